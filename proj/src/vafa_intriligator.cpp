#include "segver/vafa_intriligator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "segver/error.hpp"
#include "segver/subsets.hpp"

namespace segver {
namespace {

long mod(long k, long m) {
  const long r = k % m;
  return r < 0 ? r + m : r;
}

// Exponents e_j with lambda_j = zeta_m^{e_j}.
struct RootSet {
  int m = 1;
  std::vector<long> exps;
  // Index of the conjugate root.
  std::vector<int> conj_index;
};

RootSet make_roots(const VIInstance& inst, const VIConvention& conv) {
  RootSet rs;
  const int n = inst.n();
  rs.m = vi_conductor(inst, conv);
  const bool shifted = rs.m != n;
  for (int j = 0; j < n; ++j) {
    rs.exps.push_back(shifted ? 2L * j + 1 : j);
    rs.conj_index.push_back(shifted ? n - 1 - j : (n - j) % n);
  }
  return rs;
}

// Relation of a subset to its conjugate: -1 below, 0 fixed, +1 above.
int conj_relation(const RootSet& rs, const std::vector<int>& subset, std::vector<int>& scratch) {
  scratch.clear();
  for (int i : subset) scratch.push_back(rs.conj_index[static_cast<std::size_t>(i)]);
  std::sort(scratch.begin(), scratch.end());
  if (subset == scratch) return 0;
  return std::lexicographical_compare(subset.begin(), subset.end(), scratch.begin(), scratch.end()) ? -1 : 1;
}

long subset_exponent_sum(const RootSet& rs, const std::vector<int>& subset) {
  long s = 0;
  for (int i : subset) s += rs.exps[static_cast<std::size_t>(i)];
  return mod(s, rs.m);
}

// Coefficient of sum(e) in the zeta exponent of each summand.
long zeta_multiplier(const VIInstance& inst, const VIConvention& conv) {
  return static_cast<long>(inst.exponent()) + conv.tau - static_cast<long>(inst.r()) * (inst.g() - 1);
}

struct ExactTables {
  // pair_factor[k] = (2 - z^k - z^-k)^{1-g}, k = 1..m-1
  std::vector<CycloElem> pair_factor;
  std::vector<CycloElem> roots;
};

ExactTables make_exact_tables(const RootSet& rs, int g) {
  ExactTables t;
  const int m = rs.m;
  t.roots.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) t.roots.push_back(CycloElem::root(m, k));
  t.pair_factor.resize(static_cast<std::size_t>(m));
  for (int k = 1; k < m; ++k) {
    CycloElem base = CycloElem(m, Rational(2)) - t.roots[static_cast<std::size_t>(k)] -
                     t.roots[static_cast<std::size_t>(m - k)];
    t.pair_factor[static_cast<std::size_t>(k)] = base.pow(1L - g);
  }
  return t;
}

CycloElem summand_from_tables(const RootSet& rs, const ExactTables& t, long multiplier,
                              const std::vector<int>& subset) {
  const long m = rs.m;
  const long e = mod(multiplier * subset_exponent_sum(rs, subset), m);
  CycloElem acc = t.roots[static_cast<std::size_t>(e)];
  for (std::size_t i = 0; i < subset.size(); ++i) {
    for (std::size_t j = i + 1; j < subset.size(); ++j) {
      const long k = mod(rs.exps[static_cast<std::size_t>(subset[j])] - rs.exps[static_cast<std::size_t>(subset[i])], m);
      acc *= t.pair_factor[static_cast<std::size_t>(k)];
    }
  }
  return acc;
}

struct Partial {
  CycloElem fixed;   // subsets equal to their conjugate, or everything without halving
  CycloElem lower;   // one representative per conjugate pair
};

struct Chunk {
  std::uint64_t begin;
  std::uint64_t end;
};

std::vector<Chunk> partition(std::uint64_t total, unsigned workers) {
  std::vector<Chunk> chunks;
  const std::uint64_t w = std::max<std::uint64_t>(1, std::min<std::uint64_t>(workers, total));
  const std::uint64_t base = total / w;
  const std::uint64_t extra = total % w;
  std::uint64_t start = 0;
  for (std::uint64_t i = 0; i < w; ++i) {
    const std::uint64_t len = base + (i < extra ? 1 : 0);
    chunks.push_back({start, start + len});
    start += len;
  }
  return chunks;
}

template <typename Work>
void run_chunks(const std::vector<Chunk>& chunks, Work&& work) {
  if (chunks.size() <= 1) {
    for (std::size_t i = 0; i < chunks.size(); ++i) work(i);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(chunks.size());
  std::vector<std::exception_ptr> errors(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    threads.emplace_back([&, i] {
      try {
        work(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

CycloElem exact_sum(const VIInstance& inst, const VIConvention& conv, const VIOptions& opt) {
  const RootSet rs = make_roots(inst, conv);
  const int m = rs.m;
  const long multiplier = zeta_multiplier(inst, conv);
  const ExactTables tables = opt.difference_table ? make_exact_tables(rs, inst.g()) : ExactTables{};
  const auto chunks = partition(subset_count(inst.n(), inst.r()), resolve_workers(opt.workers));
  std::vector<Partial> partials(chunks.size(), Partial{CycloElem::zero(m), CycloElem::zero(m)});

  run_chunks(chunks, [&](std::size_t c) {
    Partial& p = partials[c];
    std::vector<int> scratch;
    SubsetStream stream(inst.n(), inst.r(), chunks[c].begin);
    for (std::uint64_t k = chunks[c].begin; k < chunks[c].end; ++k, stream.advance()) {
      const auto& subset = stream.current();
      int rel = 0;
      if (opt.conjugation_halving) {
        rel = conj_relation(rs, subset, scratch);
        if (rel > 0) continue;
      }
      CycloElem s = opt.difference_table ? summand_from_tables(rs, tables, multiplier, subset)
                                         : vi_summand_naive(inst, conv, subset);
      if (rel < 0) {
        p.lower += s;
      } else {
        p.fixed += s;
      }
    }
  });

  CycloElem fixed = CycloElem::zero(m);
  CycloElem lower = CycloElem::zero(m);
  for (const auto& p : partials) {
    fixed += p.fixed;
    lower += p.lower;
  }
  CycloElem total = fixed + lower + lower.conj();
  if (opt.difference_table) {
    total *= pow(Rational(inst.n()), static_cast<long>(inst.r()) * (inst.g() - 1));
  }
  total *= Rational(conv.phase);
  return total;
}

Integer float_sum(const VIInstance& inst, const VIConvention& conv, const VIOptions& opt) {
  using real = long double;
  const RootSet rs = make_roots(inst, conv);
  const int m = rs.m;
  const long multiplier = zeta_multiplier(inst, conv);
  const real two_pi = 2.0L * std::acos(-1.0L);
  std::vector<real> pair_factor(static_cast<std::size_t>(m), 0.0L);
  for (int k = 1; k < m; ++k) {
    const real t = 2.0L - 2.0L * std::cos(two_pi * k / m);
    pair_factor[static_cast<std::size_t>(k)] = std::pow(t, static_cast<real>(1 - inst.g()));
  }
  const auto chunks = partition(subset_count(inst.n(), inst.r()), resolve_workers(opt.workers));
  struct FloatPartial {
    std::complex<real> sum{0, 0};
    real magnitude = 0;
  };
  std::vector<FloatPartial> partials(chunks.size());
  run_chunks(chunks, [&](std::size_t c) {
    FloatPartial& p = partials[c];
    SubsetStream stream(inst.n(), inst.r(), chunks[c].begin);
    for (std::uint64_t k = chunks[c].begin; k < chunks[c].end; ++k, stream.advance()) {
      const auto& subset = stream.current();
      const long e = mod(multiplier * subset_exponent_sum(rs, subset), m);
      real w = 1.0L;
      for (std::size_t i = 0; i < subset.size(); ++i) {
        for (std::size_t j = i + 1; j < subset.size(); ++j) {
          const long d = mod(rs.exps[static_cast<std::size_t>(subset[j])] - rs.exps[static_cast<std::size_t>(subset[i])], m);
          w *= pair_factor[static_cast<std::size_t>(d)];
        }
      }
      p.sum += std::polar(w, two_pi * e / m);
      p.magnitude += std::abs(w);
    }
  });
  std::complex<real> sum{0, 0};
  real magnitude = 0;
  for (const auto& p : partials) {
    sum += p.sum;
    magnitude += p.magnitude;
  }
  const real scale = std::pow(static_cast<real>(inst.n()), static_cast<real>(inst.r()) * (inst.g() - 1)) * conv.phase;
  sum *= scale;
  magnitude *= std::abs(scale);
  const real bound = std::max<real>(static_cast<real>(opt.float_tolerance) * magnitude, 1e-6L);
  if (bound > 0.25L) {
    throw Error("float backend precision insufficient for this instance; use the exact backend");
  }
  const real rounded = std::round(sum.real());
  if (std::abs(sum.imag()) > bound || std::abs(sum.real() - rounded) > bound) {
    std::ostringstream os;
    os.precision(21);
    os << sum.real() << " + " << sum.imag() << "i";
    throw CalibrationFailure("calibration failure: float sum is not near an integer: " + os.str());
  }
  std::ostringstream os;
  os.precision(0);
  os << std::fixed << rounded;
  return parse_integer(os.str() == "-0" ? "0" : os.str());
}

}  // namespace

VIInstance::VIInstance(int n, int r, int g, std::int64_t d, std::int64_t exponent)
    : n_(n), r_(r), g_(g), d_(d), exponent_(exponent) {
  if (r < 1) throw InvalidInput("subsheaf rank r must be positive");
  if (n <= r) throw InvalidInput("need r < n");
  if (g < 0) throw InvalidInput("genus must be nonnegative");
  if (d < 0) throw InvalidInput("degree must be nonnegative");
  if (exponent < 0) throw InvalidInput("exponent must be nonnegative");
  if (static_cast<std::int64_t>(r) * exponent != virtual_dimension()) {
    throw DegreeMismatch("exponent does not match virtual dimension: r*N = " +
                         std::to_string(static_cast<std::int64_t>(r) * exponent) + ", vdim = " +
                         std::to_string(virtual_dimension()));
  }
}

std::int64_t VIInstance::virtual_dimension() const noexcept {
  return static_cast<std::int64_t>(n_) * d_ - static_cast<std::int64_t>(r_) * (n_ - r_) * (g_ - 1);
}

std::string VIConvention::key() const {
  return "root_target=" + std::to_string(root_target) + ";phase=" + std::to_string(phase) +
         ";tau=" + std::to_string(tau);
}

std::vector<VIConvention> default_search_space() {
  std::vector<VIConvention> out;
  for (int rt : {1, -1}) {
    for (int u : {1, -1}) {
      for (int tau = -2; tau <= 2; ++tau) out.push_back({rt, u, tau});
    }
  }
  return out;
}

std::string to_string(Backend b) { return b == Backend::Exact ? "exact" : "float"; }

Backend parse_backend(const std::string& s) {
  if (s == "exact") return Backend::Exact;
  if (s == "float") return Backend::Float;
  throw InvalidInput("unknown backend '" + s + "' (expected exact|float)");
}

int vi_conductor(const VIInstance& inst, const VIConvention& conv) {
  const bool minus_one = conv.root_target == -1 && inst.r() % 2 == 0;
  return minus_one ? 2 * inst.n() : inst.n();
}

CycloElem vi_summand_naive(const VIInstance& inst, const VIConvention& conv, const std::vector<int>& subset) {
  const RootSet rs = make_roots(inst, conv);
  const int m = rs.m;
  std::vector<CycloElem> lambda;
  for (int i : subset) lambda.push_back(CycloElem::root(m, rs.exps[static_cast<std::size_t>(i)]));
  CycloElem prod = CycloElem::one(m);
  for (const auto& l : lambda) prod *= l;
  CycloElem diff = CycloElem::one(m);
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    for (std::size_t j = 0; j < lambda.size(); ++j) {
      if (i != j) diff *= lambda[i] - lambda[j];
    }
  }
  const CycloElem weight = Rational(pow(Rational(inst.n()), inst.r())) * prod.inverse() * diff.inverse();
  return prod.pow(inst.exponent() + conv.tau) * weight.pow(inst.g() - 1);
}

CycloElem vi_sum_value(const VIInstance& inst, const VIConvention& conv, const VIOptions& options) {
  if (conv.root_target != 1 && conv.root_target != -1) throw InvalidInput("root target must be +1 or -1");
  if (conv.phase != 1 && conv.phase != -1) throw InvalidInput("phase must be +1 or -1");
  return exact_sum(inst, conv, options);
}

Integer vi_sum(const VIInstance& inst, const VIConvention& conv, const VIOptions& options) {
  if (options.backend == Backend::Float) return float_sum(inst, conv, options);
  const CycloElem value = vi_sum_value(inst, conv, options);
  if (!value.is_rational()) {
    throw CalibrationFailure("calibration failure: sum is not rational: " + value.str());
  }
  try {
    return as_rational_integer(value);
  } catch (const NotIntegral& e) {
    throw CalibrationFailure(std::string("calibration failure: ") + e.what());
  }
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SEGVER_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace segver
