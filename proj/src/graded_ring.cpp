#include "segver/graded_ring.hpp"

#include <set>
#include <sstream>

#include "segver/error.hpp"

namespace segver {

GradedRing::GradedRing(std::vector<Generator> generators, int top_degree)
    : gens_(std::move(generators)), top_(top_degree) {
  if (top_ < 0) throw InvalidInput("top degree must be nonnegative");
  std::set<std::string> seen;
  for (const auto& g : gens_) {
    if (g.degree < 1) throw InvalidInput("generator '" + g.name + "' must have positive degree");
    if (!seen.insert(g.name).second) throw InvalidInput("duplicate generator name '" + g.name + "'");
    if (g.nilpotency && *g.nilpotency < 1) throw InvalidInput("nilpotency order must be positive");
  }
}

std::size_t GradedRing::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (gens_[i].name == name) return i;
  }
  throw InvalidInput("unknown generator '" + name + "'");
}

int GradedRing::degree(const std::vector<int>& exponents) const {
  int d = 0;
  for (std::size_t i = 0; i < exponents.size(); ++i) d += exponents[i] * gens_[i].degree;
  return d;
}

bool GradedRing::survives(const std::vector<int>& exponents) const {
  if (degree(exponents) > top_) return false;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (gens_[i].nilpotency && exponents[i] >= *gens_[i].nilpotency) return false;
  }
  return true;
}

FormalClass::FormalClass(RingPtr ring) : ring_(std::move(ring)) {}

FormalClass::FormalClass(RingPtr ring, const Rational& constant) : ring_(std::move(ring)) {
  add_term(Monomial(ring_->size(), 0), constant);
}

FormalClass FormalClass::generator(RingPtr ring, const std::string& name) {
  const std::size_t i = ring->index_of(name);
  return generator(std::move(ring), i);
}

FormalClass FormalClass::generator(RingPtr ring, std::size_t index) {
  Monomial m(ring->size(), 0);
  m.at(index) = 1;
  return monomial(std::move(ring), std::move(m));
}

FormalClass FormalClass::monomial(RingPtr ring, Monomial exponents, const Rational& coeff) {
  if (exponents.size() != ring->size()) throw InvalidInput("monomial arity does not match ring");
  FormalClass f(std::move(ring));
  f.add_term(exponents, coeff);
  return f;
}

void FormalClass::add_term(const Monomial& m, const Rational& c) {
  if (c.is_zero() || !ring_->survives(m)) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Rational FormalClass::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational FormalClass::constant_term() const { return coefficient(Monomial(ring_->size(), 0)); }

FormalClass FormalClass::part(int k) const {
  FormalClass out(ring_);
  for (const auto& [m, c] : terms_) {
    if (ring_->degree(m) == k) out.terms_.emplace(m, c);
  }
  return out;
}

FormalClass FormalClass::truncated(int k) const {
  FormalClass out(ring_);
  for (const auto& [m, c] : terms_) {
    if (ring_->degree(m) <= k) out.terms_.emplace(m, c);
  }
  return out;
}

int FormalClass::max_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, ring_->degree(m));
  return d;
}

FormalClass& FormalClass::operator+=(const FormalClass& o) {
  if (o.ring_ != ring_) throw InvalidInput("classes live in different rings");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

FormalClass& FormalClass::operator-=(const FormalClass& o) { return *this += -o; }

FormalClass& FormalClass::operator*=(const Rational& q) {
  if (q.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= q;
  return *this;
}

FormalClass FormalClass::operator-() const {
  FormalClass out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

FormalClass operator*(const FormalClass& a, const FormalClass& b) {
  if (a.ring_ != b.ring_) throw InvalidInput("classes live in different rings");
  FormalClass out(a.ring_);
  FormalClass::Monomial m(a.ring_->size());
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

FormalClass FormalClass::pow(unsigned k) const {
  FormalClass result(ring_, Rational(1));
  FormalClass base = *this;
  while (k != 0) {
    if (k & 1U) result = result * base;
    k >>= 1;
    if (k != 0) base = base * base;
  }
  return result;
}

FormalClass FormalClass::exp() const {
  if (!constant_term().is_zero()) throw InvalidInput("exp needs a class without constant term");
  FormalClass result(ring_, Rational(1));
  FormalClass term(ring_, Rational(1));
  for (int k = 1; k <= ring_->top_degree(); ++k) {
    term = term * *this;
    term *= Rational(1, k);
    if (term.is_zero()) break;
    result += term;
  }
  return result;
}

std::string FormalClass::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool neg = c.sign() < 0;
    const Rational mag = neg ? -c : c;
    if (first) {
      if (neg) os << '-';
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool any = false;
    std::ostringstream mono;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (any) mono << '*';
      mono << ring_->generator(i).name;
      if (m[i] > 1) mono << '^' << m[i];
      any = true;
    }
    if (!any) {
      os << mag;
    } else {
      if (mag != Rational(1)) os << mag << '*';
      os << mono.str();
    }
  }
  return os.str();
}

}  // namespace segver
