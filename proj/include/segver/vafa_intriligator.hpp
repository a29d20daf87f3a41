#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "segver/cyclotomic.hpp"

namespace segver {

/// Data of the top intersection  int_{[Quot(C^n, r, d)]^vir} a_r^N.
/// Construction enforces r N = n d - r (n - r)(g - 1).
class VIInstance {
 public:
  /// Throws InvalidInput for out-of-range sizes and DegreeMismatch when the
  /// exponent does not match the virtual dimension.
  VIInstance(int n, int r, int g, std::int64_t d, std::int64_t exponent);

  int n() const noexcept { return n_; }
  int r() const noexcept { return r_; }
  int g() const noexcept { return g_; }
  std::int64_t d() const noexcept { return d_; }
  std::int64_t exponent() const noexcept { return exponent_; }
  std::int64_t virtual_dimension() const noexcept;

  friend bool operator==(const VIInstance&, const VIInstance&) = default;

 private:
  int n_;
  int r_;
  int g_;
  std::int64_t d_;
  std::int64_t exponent_;
};

/// Global normalization of the root-of-unity sum.
struct VIConvention {
  /// +1: evaluation points are the n-th roots of 1.
  /// -1: evaluation points are the n-th roots of (-1)^{r-1}.
  int root_target = -1;
  /// Overall sign u.
  int phase = 1;
  /// Offset added to the exponent of prod(lambda).
  int tau = 0;

  friend bool operator==(const VIConvention&, const VIConvention&) = default;
  /// Canonical text form, e.g. "root_target=-1;phase=1;tau=0".
  std::string key() const;
};

/// rootTarget in {+1, -1} x phase in {+1, -1} x tau in {-2..2}.
std::vector<VIConvention> default_search_space();

enum class Backend { Exact, Float };

std::string to_string(Backend b);
Backend parse_backend(const std::string& s);

struct VIOptions {
  Backend backend = Backend::Exact;
  unsigned workers = 1;
  /// Sum over one representative per conjugate pair of subsets.
  bool conjugation_halving = true;
  /// Use precomputed (2 - z^k - z^-k)^{1-g} tables instead of evaluating each
  /// pairwise difference from scratch.
  bool difference_table = true;
  /// Float backend: absolute tolerance relative to the sum of |summands|.
  double float_tolerance = 1e-9;
};

/// Conductor of the field the sum lives in: n, or 2n when the evaluation
/// points are roots of -1.
int vi_conductor(const VIInstance& inst, const VIConvention& conv);

/// u * sum over r-subsets I of the evaluation points of
///   (prod_I lambda)^{N + tau} * W(I)^{g-1},
///   W(I) = n^r (prod_I lambda)^{-1} prod_{lambda != mu in I} (lambda - mu)^{-1},
/// certified to be a rational integer.  The exact backend is deterministic
/// for every worker count.  Throws CalibrationFailure when the sum is not a
/// rational integer.
Integer vi_sum(const VIInstance& inst, const VIConvention& conv, const VIOptions& options = {});

/// The exact sum before integrality certification, in Q(zeta_m).
CycloElem vi_sum_value(const VIInstance& inst, const VIConvention& conv, const VIOptions& options = {});

/// Single summand for the index subset `subset` (indices into the evaluation
/// points), computed naively from the pairwise differences.  Used to check
/// the table-driven evaluation.
CycloElem vi_summand_naive(const VIInstance& inst, const VIConvention& conv, const std::vector<int>& subset);

/// Worker count from `requested` when positive, else the SEGVER_WORKERS
/// environment variable, else hardware concurrency.
unsigned resolve_workers(unsigned requested);

}  // namespace segver
