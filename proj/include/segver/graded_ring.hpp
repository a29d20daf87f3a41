#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "segver/rational.hpp"

namespace segver {

/// Commutative polynomial ring over Q on even-degree generators, truncated
/// above `top_degree` and optionally with g^k = 0 relations.
class GradedRing {
 public:
  struct Generator {
    std::string name;
    int degree = 1;
    /// Smallest k with g^k = 0, if any.
    std::optional<int> nilpotency;
  };

  GradedRing(std::vector<Generator> generators, int top_degree);

  static std::shared_ptr<const GradedRing> make(std::vector<Generator> generators, int top_degree) {
    return std::make_shared<const GradedRing>(std::move(generators), top_degree);
  }

  std::size_t size() const noexcept { return gens_.size(); }
  int top_degree() const noexcept { return top_; }
  const Generator& generator(std::size_t i) const { return gens_.at(i); }
  /// Throws InvalidInput for unknown names.
  std::size_t index_of(const std::string& name) const;

  int degree(const std::vector<int>& exponents) const;
  /// False when the monomial is killed by truncation or a nilpotency relation.
  bool survives(const std::vector<int>& exponents) const;

 private:
  std::vector<Generator> gens_;
  int top_;
};

using RingPtr = std::shared_ptr<const GradedRing>;

/// Element of a GradedRing: a sparse map from exponent vectors to nonzero
/// rational coefficients.  Iteration order is the lexicographic order of
/// exponent vectors, so printing is deterministic.
class FormalClass {
 public:
  using Monomial = std::vector<int>;
  using Terms = std::map<Monomial, Rational>;

  explicit FormalClass(RingPtr ring);
  FormalClass(RingPtr ring, const Rational& constant);

  static FormalClass generator(RingPtr ring, const std::string& name);
  static FormalClass generator(RingPtr ring, std::size_t index);
  static FormalClass monomial(RingPtr ring, Monomial exponents, const Rational& coeff = Rational(1));

  const GradedRing& ring() const noexcept { return *ring_; }
  const RingPtr& ring_ptr() const noexcept { return ring_; }
  const Terms& terms() const noexcept { return terms_; }

  bool is_zero() const noexcept { return terms_.empty(); }
  Rational coefficient(const Monomial& m) const;
  Rational constant_term() const;

  /// Homogeneous part of degree k.
  FormalClass part(int k) const;
  /// Drops every term of degree > k.
  FormalClass truncated(int k) const;
  /// Largest degree present; -1 for zero.
  int max_degree() const;

  FormalClass& operator+=(const FormalClass& o);
  FormalClass& operator-=(const FormalClass& o);
  FormalClass& operator*=(const Rational& q);
  friend FormalClass operator+(FormalClass a, const FormalClass& b) { return a += b; }
  friend FormalClass operator-(FormalClass a, const FormalClass& b) { return a -= b; }
  friend FormalClass operator*(FormalClass a, const Rational& q) { return a *= q; }
  friend FormalClass operator*(const Rational& q, FormalClass a) { return a *= q; }
  friend FormalClass operator*(const FormalClass& a, const FormalClass& b);
  FormalClass operator-() const;

  friend bool operator==(const FormalClass& a, const FormalClass& b) {
    return a.ring_ == b.ring_ && a.terms_ == b.terms_;
  }

  FormalClass pow(unsigned k) const;
  /// exp of a class with zero constant term.
  FormalClass exp() const;

  std::string str() const;

 private:
  void add_term(const Monomial& m, const Rational& c);

  RingPtr ring_;
  Terms terms_;
};

}  // namespace segver
