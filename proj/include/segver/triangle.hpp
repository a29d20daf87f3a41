#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "segver/vafa_intriligator.hpp"

namespace segver {

/// (g, r, d, level) with g >= 2, r >= 1, level >= 1; d is any integer.
struct ModuliInput {
  int g = 2;
  int r = 1;
  std::int64_t d = 0;
  int level = 1;

  /// Throws InvalidInput.
  void validate() const;
  friend bool operator==(const ModuliInput&, const ModuliInput&) = default;
};

/// Quot-side data for a normalized degree d' = d (mod r).
struct DerivedParams {
  std::int64_t h = 1;       // gcd(r, d), gcd(r, 0) = r
  std::int64_t r0 = 1;      // r / h
  std::int64_t d0 = 0;      // d / h
  std::int64_t d_norm = 0;  // d'
  std::int64_t d0_norm = 0; // d' / h
  int n = 2;                // (level + h) r0
  std::int64_t exponent = 0;  // N = (level + h) d0' - level r0 (g - 1)
  std::int64_t vdim = 0;    // n d' - r (n - r)(g - 1)

  VIInstance quot_instance(const ModuliInput& in) const;
};

/// Arithmetic of the Quot-side parameters at an explicitly chosen d'.
/// Throws InvalidInput when d' is not congruent to d mod r or N < 1, and
/// MathMismatch if r N != vdim.
DerivedParams derive_params(const ModuliInput& in, std::int64_t d_norm);

/// Smallest d' = d (mod r) with d' > 2 r (g - 1) and N >= 1.
std::int64_t floor_degree(const ModuliInput& in);

struct DNormalizationPolicy {
  enum class Mode {
    /// Start at floor_degree and bump by r until vi_sum(d') == vi_sum(d' + r).
    Stabilized,
    /// floor_degree, no stabilization witness.
    Floor,
    /// Use `fixed_degree`.
    Fixed,
  };
  Mode mode = Mode::Stabilized;
  std::int64_t fixed_degree = 0;
  int cap = 10;

  std::string key() const;
};

/// K-class on the curve, recorded by rank and degree.
struct KClassCurve {
  std::int64_t rank = 0;
  std::int64_t degree = 0;
  /// Rank of Rpi_*(V (x) rho^* alpha) on the moduli space.
  std::int64_t pushforward_rank = 0;
};

KClassCurve build_alpha(const ModuliInput& in, const DerivedParams& params);

enum class Verdict { Pass, Fail, Skipped };
std::string to_string(Verdict v);

struct Check {
  std::string name;
  Verdict verdict = Verdict::Skipped;
  std::string detail;
};

struct TriangleReport {
  ModuliInput input;
  DerivedParams params;
  Integer verlinde;
  Integer quot;
  Integer segre;
  bool segre_independent = false;
  std::vector<Check> checks;
  double elapsed_ms = 0;

  bool passed() const;
  const Check* find(const std::string& name) const;
};

struct TriangleOptions {
  bool d_shift = true;
  bool level_rank = true;
  bool exponent_identity = true;
};

struct LevelPolynomial {
  /// Ascending coefficients in the level.
  std::vector<Rational> coefficients;
  int degree = 0;
  /// Leading coefficient.
  Rational volume_term;
  std::vector<std::pair<int, Integer>> samples;

  Rational evaluate(const Rational& level) const;
};

/// Computes the three corners of the triangle for a fixed convention.
/// Memoizes root-of-unity sums, so one engine can be shared by the checks of
/// a sweep; all methods are safe to call concurrently.
class TriangleEngine {
 public:
  TriangleEngine(VIConvention convention, VIOptions vi_options, DNormalizationPolicy policy = {});

  const VIConvention& convention() const noexcept { return conv_; }
  const VIOptions& vi_options() const noexcept { return vi_; }
  const DNormalizationPolicy& policy() const noexcept { return policy_; }

  /// Applies the normalization policy.
  DerivedParams derive_params(const ModuliInput& in) const;
  /// int a_r^N on Quot(C^n, r, d') for the given parameters.
  Integer quot_value(const ModuliInput& in, const DerivedParams& params) const;

  Integer verlinde_number(const ModuliInput& in) const;
  /// (value, computed independently of the root-of-unity sum).
  std::pair<Integer, bool> segre_number(const ModuliInput& in) const;
  TriangleReport verify_triangle(const ModuliInput& in, const TriangleOptions& options = {}) const;

  /// Exact interpolation of level -> Verlinde number.  Needs at least
  /// r^2 (g-1) + 3 levels; throws MathMismatch("polynomiality violated") when
  /// the extra samples are off the curve or the degree is not r^2 (g-1) + 1.
  LevelPolynomial fit_level_polynomial(int g, int r, std::int64_t d, const std::vector<int>& levels) const;

 private:
  Integer cached_vi(const VIInstance& inst) const;

  VIConvention conv_;
  VIOptions vi_;
  DNormalizationPolicy policy_;
  mutable std::mutex mutex_;
  mutable std::map<std::tuple<int, int, int, std::int64_t, std::int64_t>, Integer> memo_;
};

/// Closed-form rank-one Verlinde number chi(Jac, Theta^{level+1}) = (level+1)^g.
Integer rank_one_verlinde(int g, int level);

/// Exact Lagrange interpolation through (x_i, y_i); ascending coefficients.
std::vector<Rational> interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

}  // namespace segver
