#include "segver/cyclotomic.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>

#include "segver/error.hpp"

namespace segver {
namespace {

using Poly = std::vector<Rational>;

void trim(Poly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

// Quotient and remainder of a / b over Q; b must be nonzero and trimmed.
std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
  trim(a);
  if (a.size() < b.size()) return {Poly{}, a};
  Poly q(a.size() - b.size() + 1);
  const Rational lead_inv = b.back().inverse();
  for (std::size_t k = a.size(); k-- >= b.size();) {
    if (a[k].is_zero()) continue;
    const Rational f = a[k] * lead_inv;
    const std::size_t shift = k - (b.size() - 1);
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
  }
  trim(a);
  trim(q);
  return {q, a};
}

Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j].is_zero()) continue;
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

Poly sub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

long mod(long k, long m) {
  const long r = k % m;
  return r < 0 ? r + m : r;
}

// Solves A x = b over Q (A is rows x cols, row-major); nullopt if inconsistent.
std::optional<std::vector<Rational>> solve(std::vector<std::vector<Rational>> a,
                                           std::vector<Rational> b, std::size_t cols) {
  const std::size_t rows = a.size();
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t p = row;
    while (p < rows && a[p][col].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[row]);
    std::swap(b[p], b[row]);
    const Rational inv = a[row][col].inverse();
    for (std::size_t j = col; j < cols; ++j) a[row][j] *= inv;
    b[row] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || a[i][col].is_zero()) continue;
      const Rational f = a[i][col];
      for (std::size_t j = col; j < cols; ++j) a[i][j] -= f * a[row][j];
      b[i] -= f * b[row];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t i = row; i < rows; ++i) {
    if (!b[i].is_zero()) return std::nullopt;
  }
  std::vector<Rational> x(cols);
  for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = b[i];
  return x;
}

}  // namespace

int euler_phi(int m) {
  int result = m;
  for (int p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    while (m % p == 0) m /= p;
    result -= result / p;
  }
  if (m > 1) result -= result / m;
  return result;
}

std::vector<Integer> cyclotomic_polynomial(int order) {
  if (order < 1) throw InvalidInput("cyclotomic order must be positive");
  Poly num(static_cast<std::size_t>(order) + 1);
  num.front() = Rational(-1);
  num.back() = Rational(1);
  for (int d = 1; d < order; ++d) {
    if (order % d != 0) continue;
    const auto& phi_d = CyclotomicField::get(d)->minimal_polynomial();
    Poly den(phi_d.begin(), phi_d.end());
    auto [q, r] = divmod(num, den);
    num = std::move(q);
  }
  std::vector<Integer> out;
  out.reserve(num.size());
  for (const auto& c : num) out.push_back(c.numerator());
  return out;
}

CyclotomicField::CyclotomicField(int order) : order_(order), phi_(cyclotomic_polynomial(order)) {
  for (const auto& c : phi_) {
    if (!c.fits_slong_p()) throw Error("cyclotomic coefficient exceeds machine range");
    phi_small_.push_back(c.get_si());
  }
  const int deg = degree();
  powers_.reserve(static_cast<std::size_t>(order));
  Poly current(static_cast<std::size_t>(deg));
  current[0] = Rational(1);
  for (int k = 0; k < order; ++k) {
    powers_.push_back(current);
    Poly next(current.size() + 1);
    for (std::size_t i = 0; i < current.size(); ++i) next[i + 1] = current[i];
    reduce(next);
    current = std::move(next);
  }
}

void CyclotomicField::reduce(std::vector<Rational>& poly) const {
  const std::size_t deg = static_cast<std::size_t>(degree());
  for (std::size_t k = poly.size(); k-- > deg;) {
    if (poly[k].is_zero()) continue;
    const Rational c = poly[k];
    const std::size_t base = k - deg;
    for (std::size_t i = 0; i < deg; ++i) {
      const long f = phi_small_[i];
      if (f == 0) continue;
      poly[base + i] -= c * Rational(f);
    }
    poly[k] = Rational(0);
  }
  poly.resize(deg);
}

const std::vector<Rational>& CyclotomicField::root_power(long k) const {
  return powers_[static_cast<std::size_t>(mod(k, order_))];
}

std::shared_ptr<const CyclotomicField> CyclotomicField::get(int order) {
  if (order < 1) throw InvalidInput("cyclotomic order must be positive");
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const CyclotomicField>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(order); it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const CyclotomicField>(order);
  std::lock_guard lock(mutex);
  return cache.emplace(order, std::move(built)).first->second;
}

CycloElem::CycloElem() : CycloElem(1, Rational(0)) {}

CycloElem::CycloElem(int order, const Rational& q) : field_(CyclotomicField::get(order)) {
  c_.assign(static_cast<std::size_t>(field_->degree()), Rational(0));
  c_[0] = q;
}

CycloElem::CycloElem(int order, std::vector<Rational> coeffs)
    : field_(CyclotomicField::get(order)), c_(std::move(coeffs)) {
  if (c_.size() < static_cast<std::size_t>(field_->degree())) {
    c_.resize(static_cast<std::size_t>(field_->degree()));
  }
  field_->reduce(c_);
}

CycloElem CycloElem::root(int order, long k) {
  auto field = CyclotomicField::get(order);
  return CycloElem(order, field->root_power(k));
}

bool CycloElem::is_zero() const {
  for (const auto& c : c_) {
    if (!c.is_zero()) return false;
  }
  return true;
}

bool CycloElem::is_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i) {
    if (!c_[i].is_zero()) return false;
  }
  return true;
}

CycloElem& CycloElem::operator+=(const CycloElem& o) {
  if (o.order() != order()) {
    const int m = std::lcm(order(), o.order());
    *this = lift(m);
    return *this += o.lift(m);
  }
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

CycloElem& CycloElem::operator-=(const CycloElem& o) { return *this += -o; }

CycloElem& CycloElem::operator*=(const CycloElem& o) {
  if (o.order() != order()) {
    const int m = std::lcm(order(), o.order());
    *this = lift(m);
    return *this *= o.lift(m);
  }
  Poly prod = mul(c_, o.c_);
  prod.resize(std::max(prod.size(), c_.size()));
  field_->reduce(prod);
  c_ = std::move(prod);
  return *this;
}

CycloElem& CycloElem::operator*=(const Rational& q) {
  for (auto& c : c_) c *= q;
  return *this;
}

CycloElem CycloElem::operator-() const {
  CycloElem r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

bool operator==(const CycloElem& a, const CycloElem& b) {
  if (a.order() != b.order()) {
    const int m = std::lcm(a.order(), b.order());
    return a.lift(m).c_ == b.lift(m).c_;
  }
  return a.c_ == b.c_;
}

CycloElem CycloElem::inverse() const {
  if (is_zero()) throw DivisionByZero("division by zero in cyclotomic field");
  const auto& phi = field_->minimal_polynomial();
  Poly r0(phi.begin(), phi.end());
  Poly r1 = c_;
  trim(r1);
  Poly s0{}, s1{Rational(1)};
  while (r1.size() > 1) {
    auto [q, rem] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(rem);
    Poly s2 = sub(s0, mul(q, s1));
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r1 is a nonzero constant since Phi_m is irreducible.
  const Rational scale = r1.front().inverse();
  for (auto& c : s1) c *= scale;
  return CycloElem(order(), std::move(s1));
}

CycloElem CycloElem::pow(long exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  CycloElem result = one(order());
  CycloElem base = *this;
  unsigned long e = static_cast<unsigned long>(exponent);
  while (e != 0) {
    if (e & 1UL) result *= base;
    e >>= 1;
    if (e != 0) base *= base;
  }
  return result;
}

CycloElem CycloElem::conj() const {
  Poly out(c_.size());
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k].is_zero()) continue;
    const auto& img = field_->root_power(-static_cast<long>(k));
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!img[i].is_zero()) out[i] += c_[k] * img[i];
    }
  }
  return CycloElem(order(), std::move(out));
}

CycloElem CycloElem::lift(int target_order) const {
  if (target_order == order()) return *this;
  if (target_order % order() != 0) {
    throw InvalidInput("cannot lift Q(zeta_" + std::to_string(order()) + ") into Q(zeta_" +
                       std::to_string(target_order) + ")");
  }
  const long step = target_order / order();
  auto target = CyclotomicField::get(target_order);
  Poly out(static_cast<std::size_t>(target->degree()));
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k].is_zero()) continue;
    const auto& img = target->root_power(step * static_cast<long>(k));
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!img[i].is_zero()) out[i] += c_[k] * img[i];
    }
  }
  return CycloElem(target_order, std::move(out));
}

CycloElem CycloElem::restrict_to(int target_order) const {
  if (target_order == order()) return *this;
  if (target_order < 1 || order() % target_order != 0) {
    throw InvalidInput("Q(zeta_" + std::to_string(target_order) + ") is not a subfield of Q(zeta_" +
                       std::to_string(order()) + ")");
  }
  auto sub_field = CyclotomicField::get(target_order);
  const std::size_t cols = static_cast<std::size_t>(sub_field->degree());
  const long step = order() / target_order;
  std::vector<std::vector<Rational>> a(c_.size(), std::vector<Rational>(cols));
  for (std::size_t j = 0; j < cols; ++j) {
    const auto& img = field_->root_power(step * static_cast<long>(j));
    for (std::size_t i = 0; i < c_.size(); ++i) a[i][j] = img[i];
  }
  auto x = solve(std::move(a), c_, cols);
  if (!x) throw InvalidInput("value " + str() + " does not lie in Q(zeta_" + std::to_string(target_order) + ")");
  return CycloElem(target_order, std::move(*x));
}

std::complex<double> CycloElem::to_complex() const {
  const double angle = 2.0 * M_PI / order();
  std::complex<double> z(0.0, 0.0);
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k].is_zero()) continue;
    z += c_[k].to_double() * std::polar(1.0, angle * static_cast<double>(k));
  }
  return z;
}

std::string CycloElem::str() const {
  std::ostringstream os;
  os << "Q(zeta_" << order() << "): ";
  bool first = true;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k].is_zero()) continue;
    const bool neg = c_[k].sign() < 0;
    const Rational mag = neg ? -c_[k] : c_[k];
    if (first) {
      if (neg) os << '-';
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    if (k == 0) {
      os << mag;
    } else {
      if (mag != Rational(1)) os << mag << '*';
      os << 'z';
      if (k > 1) os << '^' << k;
    }
  }
  if (first) os << '0';
  return os.str();
}

CycloElem cyclo_root(int order, long k) { return CycloElem::root(order, k); }
CycloElem cyclo_inv(const CycloElem& a) { return a.inverse(); }
CycloElem cyclo_pow(const CycloElem& a, long exponent) { return a.pow(exponent); }

Integer as_rational_integer(const CycloElem& a) {
  if (!a.is_rational()) throw NotIntegral("not a rational number", a.str());
  const Rational& q = a.rational_part();
  if (!q.is_integer()) throw NotIntegral("rational but not integral", a.str());
  return q.numerator();
}

}  // namespace segver
