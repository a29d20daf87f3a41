#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "segver/rational.hpp"

namespace segver {

/// The field Q(zeta_m), presented as Q[x] / Phi_m(x).
///
/// Instances are interned per conductor; obtain them through `get`.  The cache
/// tolerates concurrent first access: two threads may build the same field,
/// one of the copies wins and both observe an identical value.
class CyclotomicField {
 public:
  static std::shared_ptr<const CyclotomicField> get(int order);

  int order() const noexcept { return order_; }
  /// Euler phi of the order; the dimension over Q.
  int degree() const noexcept { return static_cast<int>(phi_.size()) - 1; }
  /// Coefficients of Phi_m, constant term first, monic.
  const std::vector<Integer>& minimal_polynomial() const noexcept { return phi_; }
  /// zeta_m^k reduced modulo Phi_m, for any integer k.
  const std::vector<Rational>& root_power(long k) const;

  /// Reduces a polynomial (constant term first) modulo Phi_m in place and
  /// resizes it to exactly `degree()` coefficients.
  void reduce(std::vector<Rational>& poly) const;

  explicit CyclotomicField(int order);

 private:
  int order_;
  std::vector<Integer> phi_;
  std::vector<long> phi_small_;  // phi_ as machine integers, for the reduction loop
  std::vector<std::vector<Rational>> powers_;
};

/// Phi_m computed by dividing x^m - 1 by Phi_d over the proper divisors d.
std::vector<Integer> cyclotomic_polynomial(int order);
int euler_phi(int m);

/// Element of Q(zeta_m) in the power basis 1, z, ..., z^{phi(m)-1}.
class CycloElem {
 public:
  /// The zero element of Q(zeta_1) = Q.
  CycloElem();
  CycloElem(int order, const Rational& q);
  /// Takes ownership of `coeffs` and reduces it modulo Phi_m.
  CycloElem(int order, std::vector<Rational> coeffs);

  static CycloElem zero(int order) { return CycloElem(order, Rational(0)); }
  static CycloElem one(int order) { return CycloElem(order, Rational(1)); }
  static CycloElem root(int order, long k);

  int order() const noexcept { return field_->order(); }
  const CyclotomicField& field() const noexcept { return *field_; }
  const std::vector<Rational>& coeffs() const noexcept { return c_; }

  bool is_zero() const;
  bool is_rational() const;
  /// Requires `is_rational()`.
  const Rational& rational_part() const { return c_.front(); }

  CycloElem& operator+=(const CycloElem& o);
  CycloElem& operator-=(const CycloElem& o);
  CycloElem& operator*=(const CycloElem& o);
  CycloElem& operator*=(const Rational& q);

  friend CycloElem operator+(CycloElem a, const CycloElem& b) { return a += b; }
  friend CycloElem operator-(CycloElem a, const CycloElem& b) { return a -= b; }
  friend CycloElem operator*(CycloElem a, const CycloElem& b) { return a *= b; }
  friend CycloElem operator*(CycloElem a, const Rational& q) { return a *= q; }
  friend CycloElem operator*(const Rational& q, CycloElem a) { return a *= q; }
  CycloElem operator-() const;

  /// Values are compared after lifting to a common conductor.
  friend bool operator==(const CycloElem& a, const CycloElem& b);

  /// Multiplicative inverse by the extended Euclidean algorithm against Phi_m.
  /// Throws DivisionByZero on zero.
  CycloElem inverse() const;
  /// Binary exponentiation; negative exponents go through `inverse`.
  CycloElem pow(long exponent) const;
  /// zeta -> zeta^{-1}.
  CycloElem conj() const;

  /// Image under Q(zeta_m) -> Q(zeta_M); requires m | M.
  CycloElem lift(int target_order) const;
  /// Preimage under Q(zeta_m') -> Q(zeta_m); requires m' | m and the value
  /// to lie in the subfield, otherwise throws InvalidInput.
  CycloElem restrict_to(int target_order) const;

  std::complex<double> to_complex() const;
  /// Human-readable reduced representation, e.g. "Q(zeta_6): 1/2 - 3*z".
  std::string str() const;

 private:
  std::shared_ptr<const CyclotomicField> field_;
  std::vector<Rational> c_;
};

CycloElem cyclo_root(int order, long k);
CycloElem cyclo_inv(const CycloElem& a);
CycloElem cyclo_pow(const CycloElem& a, long exponent);
/// Certifies that `a` is a rational integer and returns it.  Throws
/// NotIntegral carrying the reduced representation otherwise.
Integer as_rational_integer(const CycloElem& a);

}  // namespace segver
