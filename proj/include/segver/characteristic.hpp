#pragma once

#include <cstdint>
#include <vector>

#include "segver/graded_ring.hpp"

namespace segver {

/// Total Chern class from a Chern character via Newton's identities:
/// with p_k = k! ch_k, k c_k = sum_{i=1..k} (-1)^{i-1} c_{k-i} p_i.
/// Computed up to `top_degree` (the ring's truncation when negative).
FormalClass ch_to_chern(const FormalClass& character, int top_degree = -1);

/// Chern character of rank `rank` with total Chern class `total_chern`.
FormalClass chern_to_ch(const FormalClass& total_chern, const Rational& rank, int top_degree = -1);

/// Total Segre class: the inverse of `total_chern` in the truncated ring.
/// Requires constant term 1.
FormalClass segre(const FormalClass& total_chern);

/// A K-theory class recorded by its rank and Chern character.  The rank may
/// be negative.
class ChernData {
 public:
  /// `character.constant_term()` is the rank.
  explicit ChernData(FormalClass character);
  static ChernData from_chern(const Rational& rank, const FormalClass& total_chern);

  Rational rank() const { return ch_.constant_term(); }
  const FormalClass& character() const noexcept { return ch_; }
  FormalClass chern() const { return ch_to_chern(ch_); }
  /// c_k, the degree-k part of the total Chern class.
  FormalClass chern_class(int k) const { return chern().part(k); }

  ChernData operator-() const { return ChernData(-ch_); }
  friend ChernData operator+(const ChernData& a, const ChernData& b) {
    return ChernData(a.ch_ + b.ch_);
  }

 private:
  FormalClass ch_;
};

/// W tensor L for a line class with first Chern class `lambda`:
/// ch(W (x) L) = ch(W) exp(lambda).
ChernData twist(const ChernData& w, const FormalClass& lambda);

/// Pushforward along a projective bundle of rank `bundle_rank` whose
/// hyperplane class is the generator `zeta_index`:
/// zeta^{R-1+k} -> segre_classes[k], lower powers -> 0.  `segre_classes[0]`
/// is normally 1; powers beyond the supplied list push forward to zero.
FormalClass proj_pushforward(const FormalClass& expr, std::size_t zeta_index, int bundle_rank,
                             const std::vector<FormalClass>& segre_classes);

/// Formal check of the projective-bundle pushforward chain
///   pi_* c_top(O(1) (x) F)  =  [pi_* (1/(1-zeta)) c(F)]  =  [s(E) c(F)]
/// where F = V_p^{(+)m} with V_p of rank r (free Chern classes), E = (pi_* V)^{(+)n}
/// of rank R (free Segre classes of pi_* V), [.] the part of degree rm - R + 1,
/// everything truncated at base degree D.  The left side is computed through
/// the Chern character of the twist, the middle by the geometric series in
/// zeta, and the right side directly on the base.
bool verify_pushforward_chain(int r, int m, int n, int bundle_rank, int base_degree);

/// Top Segre number of Rpi_*(P (x) rho^* alpha) on the Jacobian of a genus g
/// curve, alpha of rank a.  Works in Q[theta]/(theta^{g+1}) with
/// int theta^g / g! = 1 and ch = -(g-1) - a theta.
Integer jacobian_segre(int g, int a);

/// chi(C, E (x) alpha) for E of rank r_e and degree d_e, alpha of rank r_a and
/// degree d_a, on a genus g curve (Riemann-Roch).
std::int64_t curve_euler_characteristic(int g, std::int64_t r_e, std::int64_t d_e, std::int64_t r_a,
                                        std::int64_t d_a);

/// Rank of alpha_M = Rpi_*(V (x) rho^* alpha) for the alpha attached to
/// (r, d, level); always -r^2 (g-1).
std::int64_t rank_alpha_M(int g, int r, std::int64_t d, int level);

}  // namespace segver
