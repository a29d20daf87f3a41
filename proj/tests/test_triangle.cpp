#include <doctest.h>

#include "segver/error.hpp"
#include "segver/triangle.hpp"

using namespace segver;

namespace {

const TriangleEngine& engine() {
  static const TriangleEngine e(VIConvention{}, VIOptions{});
  return e;
}

}  // namespace

TEST_CASE("input validation") {
  CHECK_THROWS_WITH_AS(ModuliInput({1, 1, 0, 1}).validate(), doctest::Contains("genus must be at least 2"),
                       InvalidInput);
  CHECK_THROWS_AS(ModuliInput({2, 0, 0, 1}).validate(), InvalidInput);
  CHECK_THROWS_AS(ModuliInput({2, 1, 0, 0}).validate(), InvalidInput);
  CHECK_NOTHROW(ModuliInput({2, 2, -3, 1}).validate());
}

TEST_CASE("derive_params examples") {
  const DerivedParams a = derive_params({2, 2, 1, 1}, 5);
  CHECK(a.h == 1);
  CHECK(a.n == 4);
  CHECK(a.exponent == 8);
  CHECK(a.vdim == 16);

  const DerivedParams b = derive_params({2, 2, 0, 2}, 6);
  CHECK(b.h == 2);
  CHECK(b.r0 == 1);
  CHECK(b.n == 4);
  CHECK(b.exponent == 10);
  CHECK(b.vdim == 20);

  const DerivedParams c = derive_params({3, 1, 2, 2}, 7);
  CHECK(c.n == 3);
  CHECK(c.exponent == 17);
  CHECK(c.vdim == 17);

  CHECK_THROWS_AS(derive_params({2, 2, 1, 1}, 6), InvalidInput);
}

TEST_CASE("degree match holds for every derived instance") {
  for (int g = 2; g <= 4; ++g) {
    for (int r = 1; r <= 4; ++r) {
      for (std::int64_t d = -5; d <= 5; ++d) {
        for (int l = 1; l <= 4; ++l) {
          const ModuliInput in{g, r, d, l};
          const std::int64_t floor = floor_degree(in);
          CHECK(floor > 2 * r * (g - 1));
          CHECK((floor - d) % r == 0);
          for (int k = 0; k < 3; ++k) {
            const DerivedParams p = derive_params(in, floor + k * r);
            CHECK(r * p.exponent == p.n * p.d_norm - r * (p.n - r) * (g - 1));
            CHECK(p.exponent >= 1);
          }
        }
      }
    }
  }
}

TEST_CASE("level exponent identity when r divides d") {
  for (int g = 2; g <= 4; ++g) {
    for (int r = 1; r <= 4; ++r) {
      for (int l = 1; l <= 4; ++l) {
        for (std::int64_t dn = r; dn <= 60; dn += r) {
          if (dn % l != 0) continue;
          const ModuliInput in{g, r, 0, l};
          if (dn <= 2 * r * (g - 1)) continue;
          const DerivedParams p = derive_params(in, dn);
          CHECK(l * (dn / r + dn / l - (g - 1)) == p.exponent);
        }
      }
    }
  }
}

TEST_CASE("build_alpha examples") {
  const KClassCurve a = build_alpha({2, 2, 1, 3}, derive_params({2, 2, 1, 3}, 11));
  CHECK(a.rank == 8);
  CHECK(a.degree == -38);
  const KClassCurve b = build_alpha({2, 1, 4, 1}, derive_params({2, 1, 4, 1}, 4));
  CHECK(b.rank == 2);
  CHECK(b.degree == -7);
}

TEST_CASE("verlinde_number examples") {
  CHECK(engine().verlinde_number({2, 1, 0, 2}) == 9);
  CHECK(engine().verlinde_number({2, 2, 0, 1}) == 9);
  CHECK(engine().verlinde_number({3, 1, 0, 1}) == 8);
}

TEST_CASE("segre_number examples") {
  CHECK(engine().segre_number({2, 1, 3, 2}) == std::pair<Integer, bool>{9, true});
  CHECK(engine().segre_number({3, 1, 5, 1}) == std::pair<Integer, bool>{8, true});
  const auto [v, independent] = engine().segre_number({2, 2, 1, 1});
  CHECK(!independent);
  CHECK(v == engine().verlinde_number({2, 2, 1, 1}));
}

TEST_CASE("verify_triangle") {
  const TriangleReport rep = engine().verify_triangle({2, 1, 0, 3});
  CHECK(rep.passed());
  CHECK(rep.verlinde == 16);
  CHECK(rep.quot == 16);
  CHECK(rep.segre == 16);
  CHECK(rep.segre_independent);
  for (const auto& c : rep.checks) CHECK_MESSAGE(c.verdict != Verdict::Fail, c.name, ": ", c.detail);
  CHECK(rep.find("d-shift") != nullptr);

  CHECK(engine().verify_triangle({2, 2, 0, 1}).verlinde == engine().verify_triangle({2, 1, 0, 2}).verlinde);
  CHECK_THROWS_AS(engine().verify_triangle({1, 1, 0, 1}), InvalidInput);
}

TEST_CASE("rank-one closure") {
  for (int g = 2; g <= 4; ++g) {
    for (int l = 1; l <= 5; ++l) {
      const TriangleReport rep = engine().verify_triangle({g, 1, 0, l}, {false, false, true});
      CHECK(rep.passed());
      CHECK(rep.verlinde == rank_one_verlinde(g, l));
      CHECK(rep.segre == rank_one_verlinde(g, l));
      CHECK(rep.segre_independent);
    }
  }
}

TEST_CASE("known small Verlinde numbers") {
  CHECK(engine().verlinde_number({2, 2, 0, 2}) == 40);
  CHECK(engine().verlinde_number({2, 2, 1, 1}) == 24);
  CHECK(engine().verlinde_number({3, 2, 0, 1}) == 27);
  CHECK(engine().verlinde_number({3, 2, 1, 1}) == 224);
}

TEST_CASE("negative degree normalizes mod r") {
  CHECK(engine().verlinde_number({2, 2, -1, 1}) == engine().verlinde_number({2, 2, 1, 1}));
  CHECK(engine().verlinde_number({2, 3, -2, 1}) == engine().verlinde_number({2, 3, 1, 1}));
}

TEST_CASE("interpolate") {
  const auto c = interpolate({1, 2, 3, 4}, {1, 8, 27, 64});
  CHECK(c == std::vector<Rational>{0, 0, 0, 1});
}

TEST_CASE("fit_level_polynomial") {
  const LevelPolynomial a = engine().fit_level_polynomial(2, 1, 0, {1, 2, 3, 4, 5});
  CHECK(a.degree == 2);
  CHECK(a.coefficients == std::vector<Rational>{1, 2, 1});
  CHECK(a.volume_term == 1);

  const LevelPolynomial b = engine().fit_level_polynomial(3, 1, 0, {1, 2, 3, 4, 5, 6});
  CHECK(b.coefficients == std::vector<Rational>{1, 3, 3, 1});

  const LevelPolynomial c = engine().fit_level_polynomial(2, 2, 1, {1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(c.degree == 5);
  // regression values
  CHECK(c.coefficients ==
        std::vector<Rational>{1, Rational(13, 3), Rational(23, 3), 7, Rational(10, 3), Rational(2, 3)});
  for (const auto& [l, v] : c.samples) CHECK(c.evaluate(l) == Rational(v));

  CHECK_THROWS_AS(engine().fit_level_polynomial(2, 2, 1, {1, 2, 3, 4, 5}), Error);
}
