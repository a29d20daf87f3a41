#include "segver/characteristic.hpp"

#include <numeric>

#include "segver/error.hpp"

namespace segver {
namespace {

int resolve_top(const FormalClass& f, int top_degree) {
  return top_degree < 0 ? f.ring().top_degree() : std::min(top_degree, f.ring().top_degree());
}

FormalClass sign_scaled(const FormalClass& f, int exponent) {
  return (exponent % 2 == 0) ? f : -f;
}

}  // namespace

FormalClass ch_to_chern(const FormalClass& character, int top_degree) {
  const auto& ring = character.ring_ptr();
  const int top = resolve_top(character, top_degree);
  std::vector<FormalClass> p;  // p[k] = k! ch_k
  std::vector<FormalClass> c;
  p.reserve(static_cast<std::size_t>(top) + 1);
  c.reserve(static_cast<std::size_t>(top) + 1);
  p.emplace_back(ring);
  c.emplace_back(ring, Rational(1));
  for (int k = 1; k <= top; ++k) {
    p.push_back(character.part(k) * Rational(factorial(static_cast<unsigned long>(k))));
    FormalClass acc(ring);
    for (int i = 1; i <= k; ++i) {
      acc += sign_scaled(c[static_cast<std::size_t>(k - i)] * p[static_cast<std::size_t>(i)], i - 1);
    }
    c.push_back(acc * Rational(1, k));
  }
  FormalClass total(ring);
  for (const auto& ck : c) total += ck;
  return total;
}

FormalClass chern_to_ch(const FormalClass& total_chern, const Rational& rank, int top_degree) {
  if (total_chern.constant_term() != Rational(1)) {
    throw InvalidInput("total Chern class must have constant term 1");
  }
  const auto& ring = total_chern.ring_ptr();
  const int top = resolve_top(total_chern, top_degree);
  std::vector<FormalClass> c;
  std::vector<FormalClass> p;
  for (int k = 0; k <= top; ++k) c.push_back(total_chern.part(k));
  p.emplace_back(ring);
  FormalClass ch(ring, rank);
  for (int k = 1; k <= top; ++k) {
    FormalClass pk = sign_scaled(c[static_cast<std::size_t>(k)] * Rational(k), k - 1);
    for (int i = 1; i < k; ++i) {
      pk += sign_scaled(c[static_cast<std::size_t>(k - i)] * p[static_cast<std::size_t>(i)], k - 1 + i);
    }
    ch += pk * Rational(Integer(1), factorial(static_cast<unsigned long>(k)));
    p.push_back(std::move(pk));
  }
  return ch;
}

FormalClass segre(const FormalClass& total_chern) {
  if (total_chern.constant_term() != Rational(1)) {
    throw InvalidInput("total Chern class must have constant term 1");
  }
  const auto& ring = total_chern.ring_ptr();
  const int top = ring->top_degree();
  std::vector<FormalClass> c;
  for (int k = 0; k <= top; ++k) c.push_back(total_chern.part(k));
  std::vector<FormalClass> s;
  s.emplace_back(ring, Rational(1));
  for (int k = 1; k <= top; ++k) {
    FormalClass acc(ring);
    for (int i = 1; i <= k; ++i) acc -= c[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(k - i)];
    s.push_back(std::move(acc));
  }
  FormalClass total(ring);
  for (const auto& sk : s) total += sk;
  return total;
}

ChernData::ChernData(FormalClass character) : ch_(std::move(character)) {}

ChernData ChernData::from_chern(const Rational& rank, const FormalClass& total_chern) {
  return ChernData(chern_to_ch(total_chern, rank));
}

ChernData twist(const ChernData& w, const FormalClass& lambda) {
  return ChernData(w.character() * lambda.exp());
}

FormalClass proj_pushforward(const FormalClass& expr, std::size_t zeta_index, int bundle_rank,
                             const std::vector<FormalClass>& segre_classes) {
  const auto& ring = expr.ring_ptr();
  if (zeta_index >= ring->size()) throw InvalidInput("zeta index out of range");
  if (bundle_rank < 1) throw InvalidInput("projective bundle rank must be positive");
  FormalClass out(ring);
  for (const auto& [mono, coeff] : expr.terms()) {
    const int j = mono[zeta_index];
    const int k = j - (bundle_rank - 1);
    if (k < 0 || static_cast<std::size_t>(k) >= segre_classes.size()) continue;
    FormalClass::Monomial base = mono;
    base[zeta_index] = 0;
    out += FormalClass::monomial(ring, base, coeff) * segre_classes[static_cast<std::size_t>(k)];
  }
  return out;
}

bool verify_pushforward_chain(int r, int m, int n, int bundle_rank, int base_degree) {
  if (r < 1 || m < 0 || n < 1 || bundle_rank < 1 || base_degree < 0) {
    throw InvalidInput("verify_pushforward_chain: invalid formal sizes");
  }
  const int fiber_rank = r * m;
  const int top = std::max(fiber_rank, base_degree + bundle_rank - 1);

  std::vector<GradedRing::Generator> gens;
  for (int i = 1; i <= r; ++i) gens.push_back({"v" + std::to_string(i), i, std::nullopt});
  for (int i = 1; i <= base_degree; ++i) gens.push_back({"s" + std::to_string(i), i, std::nullopt});
  gens.push_back({"zeta", 1, std::nullopt});
  const auto ring = GradedRing::make(gens, top);
  const std::size_t zeta = ring->index_of("zeta");

  FormalClass c_vp(ring, Rational(1));
  for (int i = 1; i <= r; ++i) c_vp += FormalClass::generator(ring, "v" + std::to_string(i));
  const FormalClass c_f = c_vp.pow(static_cast<unsigned>(m)).truncated(base_degree);

  FormalClass s_single(ring, Rational(1));
  for (int i = 1; i <= base_degree; ++i) s_single += FormalClass::generator(ring, "s" + std::to_string(i));
  const FormalClass s_e = s_single.pow(static_cast<unsigned>(n)).truncated(base_degree);
  std::vector<FormalClass> s_parts;
  for (int k = 0; k <= base_degree; ++k) s_parts.push_back(s_e.part(k));

  const int target = fiber_rank - bundle_rank + 1;

  // c_top of the twist, through the Chern character.
  const auto f = ChernData::from_chern(Rational(fiber_rank), c_vp.pow(static_cast<unsigned>(m)));
  const auto twisted = twist(f, FormalClass::generator(ring, zeta));
  const FormalClass ctop = twisted.chern_class(fiber_rank);
  const FormalClass lhs = proj_pushforward(ctop, zeta, bundle_rank, s_parts).truncated(base_degree);

  // 1/(1 - zeta) c(F), pushed forward, degree-matched.
  FormalClass geometric(ring, Rational(1));
  FormalClass zp(ring, Rational(1));
  for (int j = 1; j <= top; ++j) {
    zp = zp * FormalClass::generator(ring, zeta);
    geometric += zp;
  }
  const FormalClass mid =
      proj_pushforward(geometric * c_f, zeta, bundle_rank, s_parts).truncated(base_degree).part(target);

  const FormalClass rhs = (s_e * c_f).truncated(base_degree).part(target);

  return lhs == mid && mid == rhs;
}

Integer jacobian_segre(int g, int a) {
  if (g < 2) throw InvalidInput("jacobian_segre requires g >= 2");
  if (a < 1) throw InvalidInput("jacobian_segre requires a >= 1");
  const auto ring = GradedRing::make({{"theta", 1, g + 1}}, g);
  const FormalClass theta = FormalClass::generator(ring, "theta");
  const ChernData alpha_m(FormalClass(ring, Rational(-(g - 1))) - theta * Rational(a));
  const FormalClass s = segre(alpha_m.chern());
  // int theta^g = g!
  const Rational value =
      s.part(g).coefficient(FormalClass::Monomial{g}) * Rational(factorial(static_cast<unsigned long>(g)));
  if (!value.is_integer()) throw NotIntegral("jacobian Segre number not integral", value.str());
  return value.numerator();
}

std::int64_t curve_euler_characteristic(int g, std::int64_t r_e, std::int64_t d_e, std::int64_t r_a,
                                        std::int64_t d_a) {
  return r_e * d_a + d_e * r_a + r_e * r_a * (1 - g);
}

std::int64_t rank_alpha_M(int g, int r, std::int64_t d, int level) {
  if (r < 1) throw InvalidInput("rank must be positive");
  const std::int64_t h = std::gcd(static_cast<std::int64_t>(r), d < 0 ? -d : d);
  const std::int64_t r0 = r / h;
  const std::int64_t d0 = d / h;
  const std::int64_t alpha_rank = (level + h) * r0;
  const std::int64_t alpha_degree = -(level + h) * d0 + level * r0 * (g - 1);
  return curve_euler_characteristic(g, r, d, alpha_rank, alpha_degree);
}

}  // namespace segver
