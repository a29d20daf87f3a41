#include <doctest.h>

#include <functional>
#include <random>

#include "segver/characteristic.hpp"
#include "segver/error.hpp"

using namespace segver;

namespace {

RingPtr theta_ring(int top) { return GradedRing::make({{"theta", 1, std::nullopt}}, top); }

/// Random element of degree exactly k in the generators of `ring`.
FormalClass random_part(std::mt19937& rng, const RingPtr& ring, int k) {
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  FormalClass out(ring);
  const std::size_t gens = ring->size();
  // exponent vectors of total degree k over generators of degree 1
  std::vector<int> e(gens, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == gens) {
      e[i] = left;
      out += FormalClass::monomial(ring, e, Rational(num(rng), den(rng)));
      return;
    }
    for (int v = 0; v <= left; ++v) {
      e[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, k);
  return out;
}

}  // namespace

TEST_CASE("graded ring truncation and parts") {
  auto ring = GradedRing::make({{"x", 1, std::nullopt}, {"y", 2, std::nullopt}}, 4);
  const FormalClass x = FormalClass::generator(ring, "x");
  const FormalClass y = FormalClass::generator(ring, "y");
  const FormalClass f = FormalClass(ring, 1) + x + y * y + x * y;
  CHECK(f.part(0) == FormalClass(ring, 1));
  CHECK(f.part(3) == x * y);
  CHECK(f.part(0) + f.part(1) + f.part(2) + f.part(3) + f.part(4) == f);
  CHECK((y * y * x).is_zero());
  CHECK(f.max_degree() == 4);
  CHECK_THROWS_AS(FormalClass::generator(ring, "z"), InvalidInput);

  auto nil = GradedRing::make({{"t", 1, 3}}, 10);
  CHECK(FormalClass::generator(nil, "t").pow(3).is_zero());
  CHECK(!FormalClass::generator(nil, "t").pow(2).is_zero());
}

TEST_CASE("ch_to_chern examples") {
  auto ring = theta_ring(4);
  const FormalClass t = FormalClass::generator(ring, "theta");
  const Rational x(5, 3);
  const FormalClass c = ch_to_chern(FormalClass(ring, 2) + t * x);
  CHECK(c.part(1) == t * x);
  CHECK(c.part(2) == t.pow(2) * (x * x / Rational(2)));
  CHECK(c.part(3) == t.pow(3) * (x * x * x / Rational(6)));
  CHECK(ch_to_chern(FormalClass(ring, 7)) == FormalClass(ring, 1));
}

TEST_CASE("segre examples") {
  auto ring = theta_ring(5);
  const FormalClass x = FormalClass::generator(ring, "theta");
  FormalClass expect(ring, 1);
  for (int k = 1; k <= 5; ++k) expect += x.pow(k) * Rational(k % 2 ? -1 : 1);
  CHECK(segre(FormalClass(ring, 1) + x) == expect);
  CHECK(segre(FormalClass(ring, 1)) == FormalClass(ring, 1));
}

TEST_CASE("twist examples") {
  auto ring = GradedRing::make({{"a", 1, std::nullopt}, {"l", 1, std::nullopt}}, 4);
  const FormalClass a = FormalClass::generator(ring, "a");
  const FormalClass l = FormalClass::generator(ring, "l");

  // rank one virtual class with c = 1 + a + 2a^2
  const ChernData w = ChernData::from_chern(1, FormalClass(ring, 1) + a + a * a * Rational(2));
  CHECK(!w.chern_class(2).is_zero());
  CHECK(twist(w, l).chern_class(2) == w.chern_class(2));

  // honest rank two class: c = (1 + a)(1 - a) has c_3 = 0
  const ChernData v = ChernData::from_chern(2, (FormalClass(ring, 1) + a) * (FormalClass(ring, 1) - a));
  CHECK(twist(v, l).chern_class(3).is_zero());
  CHECK(twist(v, l).chern_class(1) == v.chern_class(1) + l * Rational(2));
}

TEST_CASE("twist invariance of c_{n+1} on random virtual classes") {
  std::mt19937 rng(2024);
  int cases = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = trial % 4;  // rank 0..3
    auto ring = GradedRing::make({{"a", 1, std::nullopt}, {"b", 1, std::nullopt}, {"l", 1, std::nullopt}}, n + 2);
    FormalClass c(ring, 1);
    for (int k = 1; k <= n + 2; ++k) c += random_part(rng, ring, k);
    const ChernData w = ChernData::from_chern(n, c);
    FormalClass lambda = random_part(rng, ring, 1);
    CHECK(w.chern() == c);
    CHECK(twist(w, lambda).chern_class(n + 1) == c.part(n + 1));
    ++cases;
  }
  CHECK(cases == 100);
}

TEST_CASE("segre inverts the total Chern class") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    auto ring = GradedRing::make({{"a", 1, std::nullopt}, {"b", 1, std::nullopt}}, 6);
    FormalClass c(ring, 1);
    for (int k = 1; k <= 6; ++k) c += random_part(rng, ring, k);
    CHECK(segre(c) * c == FormalClass(ring, 1));
  }
}

TEST_CASE("Chern character round trip up to degree 6") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    auto ring = GradedRing::make({{"a", 1, std::nullopt}, {"b", 1, std::nullopt}}, 6);
    const Rational rank(static_cast<int>(rng() % 7) - 3);
    FormalClass c(ring, 1);
    for (int k = 1; k <= 6; ++k) c += random_part(rng, ring, k);
    const FormalClass ch = chern_to_ch(c, rank);
    CHECK(ch.constant_term() == rank);
    CHECK(ch_to_chern(ch) == c);
  }
}

TEST_CASE("proj_pushforward") {
  auto ring = GradedRing::make({{"x", 1, std::nullopt}, {"s1", 1, std::nullopt}, {"s2", 2, std::nullopt},
                                {"zeta", 1, std::nullopt}},
                               6);
  const FormalClass x = FormalClass::generator(ring, "x");
  const FormalClass s1 = FormalClass::generator(ring, "s1");
  const FormalClass s2 = FormalClass::generator(ring, "s2");
  const FormalClass z = FormalClass::generator(ring, "zeta");
  const std::size_t zi = ring->index_of("zeta");
  const std::vector<FormalClass> s{FormalClass(ring, 1), s1, s2};
  CHECK(proj_pushforward(z, zi, 2, s) == FormalClass(ring, 1));
  CHECK(proj_pushforward(z.pow(2), zi, 2, s) == s1);
  CHECK(proj_pushforward(z.pow(3), zi, 2, s) == s2);
  CHECK(proj_pushforward(FormalClass(ring, 1), zi, 3, s).is_zero());
  CHECK(proj_pushforward(z, zi, 3, s).is_zero());
  CHECK(proj_pushforward(x * z.pow(3), zi, 3, s) == x * s1);
}

TEST_CASE("verify_pushforward_chain") {
  CHECK(verify_pushforward_chain(1, 1, 1, 2, 4));
  CHECK(verify_pushforward_chain(2, 1, 1, 3, 6));
  CHECK(verify_pushforward_chain(2, 0, 1, 3, 6));
  for (int r = 1; r <= 3; ++r) {
    for (int m = 1; m <= 3; ++m) {
      for (int R = 2; R <= 6; ++R) CHECK_MESSAGE(verify_pushforward_chain(r, m, 2, R, 6), "r=", r, " m=", m, " R=", R);
    }
  }
}

TEST_CASE("jacobian_segre") {
  CHECK(jacobian_segre(2, 2) == 4);
  CHECK(jacobian_segre(3, 3) == 27);
  CHECK(jacobian_segre(2, 1) == 1);
  for (int g = 2; g <= 4; ++g) {
    for (int a = 1; a <= 6; ++a) {
      Integer expect = 1;
      for (int i = 0; i < g; ++i) expect *= a;
      CHECK(jacobian_segre(g, a) == expect);
    }
  }
}

TEST_CASE("rank_alpha_M") {
  CHECK(rank_alpha_M(2, 2, 1, 1) == -4);
  CHECK(rank_alpha_M(2, 2, 0, 3) == -4);
  CHECK(rank_alpha_M(3, 1, 5, 2) == -2);
  CHECK(rank_alpha_M(5, 3, 2, 1) == -36);
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int g = 2 + static_cast<int>(rng() % 6);
    const int r = 1 + static_cast<int>(rng() % 5);
    const std::int64_t d = static_cast<std::int64_t>(rng() % 41) - 20;
    const int l = 1 + static_cast<int>(rng() % 6);
    CHECK(rank_alpha_M(g, r, d, l) == -static_cast<std::int64_t>(r) * r * (g - 1));
  }
}
