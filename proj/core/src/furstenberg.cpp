#include "mrtlab/furstenberg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mrtlab/error.hpp"
#include "mrtlab/nud.hpp"
#include "mrtlab/poly_family.hpp"

namespace mrtlab {
namespace {

constexpr double kUnitTolerance = 1e-9;

std::complex<double> ipow(std::complex<double> z, long e) {
  if (e < 0) {
    z = std::conj(z) / std::norm(z);
    e = -e;
  }
  std::complex<double> r = 1;
  while (e) {
    if (e & 1) r *= z;
    z *= z;
    e >>= 1;
  }
  return r;
}

}  // namespace

EmpiricalAverager::EmpiricalAverager(const SequenceSource& u, std::uint64_t N, std::uint64_t max_lag,
                                     Weighting weighting)
    : N_(N), max_lag_(max_lag), weighting_(weighting) {
  if (N == 0) throw ArgumentError("EmpiricalAverager: N must be >= 1");
  const std::uint64_t size = N + max_lag;
  u.require_range(size, "EmpiricalAverager");
  if (u.has_phases()) {
    phases_.resize(size);
    u.phases(1, phases_);
  } else {
    values_.resize(size);
    u.values(1, values_);
  }
}

std::complex<double> EmpiricalAverager::term(const MomentSpec& spec, std::uint64_t n) const {
  if (!phases_.empty()) {
    Turns t;
    for (const auto& m : spec.terms()) t += m.exponent * phases_[n - 1 + m.lag];
    return t.unit();
  }
  std::complex<double> z = 1;
  for (const auto& m : spec.terms()) z *= ipow(values_[n - 1 + m.lag], m.exponent);
  return z;
}

std::complex<double> EmpiricalAverager::moment(const MomentSpec& spec) const {
  if (spec.max_lag() > max_lag_) {
    std::ostringstream os;
    os << "empirical_moment: lag " << spec.max_lag() << " exceeds averager max lag " << max_lag_;
    throw ArgumentError(os.str());
  }
  if (spec.is_constant()) return 1;
  ComplexSum acc;
  if (weighting_ == Weighting::cesaro) {
    for (std::uint64_t n = 1; n <= N_; ++n) acc.add(term(spec, n));
    return acc.value() / static_cast<double>(N_);
  }
  CompensatedSum L;
  for (std::uint64_t n = 1; n <= N_; ++n) {
    const double w = 1.0 / static_cast<double>(n);
    acc.add(term(spec, n) * w);
    L.add(w);
  }
  return acc.value() / L.value();
}

std::vector<std::complex<double>> EmpiricalAverager::cesaro_prefix_moments(const MomentSpec& spec) const {
  if (spec.max_lag() > max_lag_) throw ArgumentError("cesaro_prefix_moments: lag exceeds averager max lag");
  std::vector<std::complex<double>> out(N_);
  ComplexSum acc;
  for (std::uint64_t n = 1; n <= N_; ++n) {
    acc.add(spec.is_constant() ? std::complex<double>(1) : term(spec, n));
    out[n - 1] = acc.value() / static_cast<double>(n);
  }
  return out;
}

MomentEvaluator EmpiricalAverager::evaluator() const {
  return [this](const MomentSpec& s) { return moment(s); };
}

std::complex<double> empirical_moment(const EmpiricalAverager& avg, const MomentSpec& spec) { return avg.moment(spec); }

MomentSpec phi_spec(int d, long ell) {
  auto e = phi_exponents(d);
  std::vector<MomentTerm> terms;
  for (std::size_t j = 0; j < e.size(); ++j) terms.push_back({j, e[j] * ell});
  return MomentSpec(std::move(terms));
}

std::vector<std::complex<double>> streaming_moments(const SequenceSource& u, std::uint64_t N,
                                                    const std::vector<MomentSpec>& specs, Weighting weighting,
                                                    const ParallelOptions& par, bool require_unit) {
  if (N == 0) throw ArgumentError("streaming_moments: N must be >= 1");
  std::uint64_t lag = 0;
  for (const auto& sp : specs) lag = std::max(lag, sp.max_lag());
  u.require_range(N + lag, "streaming_moments");
  const bool phased = u.has_phases();
  const bool logw = weighting == Weighting::logarithmic;
  struct Part {
    std::vector<ComplexSum> sums;
    CompensatedSum weight;
  };
  ParallelOptions opt = par;
  opt.chunk = std::max<std::uint64_t>(opt.chunk, 4 * lag + 1024);
  auto parts = chunked_map<Part>(1, N, opt, [&](std::size_t, std::uint64_t a, std::uint64_t b) {
    Part p;
    p.sums.resize(specs.size());
    const std::size_t len = static_cast<std::size_t>(b - a + 1 + lag);
    std::vector<Turns> ph;
    std::vector<std::complex<double>> val;
    if (phased) {
      ph.resize(len);
      u.phases(a, ph);
    } else {
      val.resize(len);
      u.values(a, val);
      if (require_unit)
        for (std::size_t i = 0; i < len; ++i)
          if (std::fabs(std::abs(val[i]) - 1.0) > kUnitTolerance) {
            std::ostringstream os;
            os << "phi_statistic: |u(" << a + i << ")| = " << std::abs(val[i]) << " is not 1";
            throw DomainError(os.str());
          }
    }
    std::vector<BatchedComplexSum> local(specs.size());
    for (std::uint64_t n = a; n <= b; ++n) {
      const std::size_t off = static_cast<std::size_t>(n - a);
      const double w = logw ? 1.0 / static_cast<double>(n) : 1.0;
      if (logw) p.weight.add(w);
      for (std::size_t k = 0; k < specs.size(); ++k) {
        std::complex<double> z;
        if (specs[k].is_constant()) {
          z = 1;
        } else if (phased) {
          Turns t;
          for (const auto& m : specs[k].terms()) t += m.exponent * ph[off + m.lag];
          z = t.unit();
        } else {
          z = 1;
          for (const auto& m : specs[k].terms()) z *= ipow(val[off + m.lag], m.exponent);
        }
        local[k].add(logw ? z * w : z);
      }
    }
    for (std::size_t k = 0; k < specs.size(); ++k) p.sums[k].add(local[k].sum());
    return p;
  });
  std::vector<ComplexSum> tot(specs.size());
  CompensatedSum L;
  for (const auto& p : parts) {
    for (std::size_t k = 0; k < specs.size(); ++k) tot[k].add(p.sums[k]);
    L.add(p.weight.value());
  }
  const double norm = logw ? L.value() : static_cast<double>(N);
  std::vector<std::complex<double>> out(specs.size());
  for (std::size_t k = 0; k < specs.size(); ++k) out[k] = tot[k].value() / norm;
  return out;
}

std::complex<double> phi_statistic(const SequenceSource& u, int d, long ell, std::uint64_t N,
                                   const ParallelOptions& par) {
  if (ell == 0) return 1;
  return streaming_moments(u, N, {phi_spec(d, ell)}, Weighting::cesaro, par, true).front();
}

CriterionReport criterion_check(const SequenceSource& u, int d, std::uint64_t N, long ell_max, double tol,
                                const ParallelOptions& par) {
  CriterionReport r;
  r.d = d;
  r.N = N;
  r.ell_max = ell_max;
  r.tol = tol;
  std::vector<MomentSpec> specs{phi_spec(d + 1, 1)};
  for (long l = 1; l <= ell_max; ++l) specs.push_back(phi_spec(d, l));
  auto m = streaming_moments(u, N, specs, Weighting::cesaro, par, true);
  r.next_statistic = m[0];
  r.next_deviation = std::abs(r.next_statistic - 1.0);
  for (long l = 1; l <= ell_max; ++l) {
    r.powers.push_back(m[static_cast<std::size_t>(l)]);
    r.powers_max = std::max(r.powers_max, std::abs(r.powers.back()));
  }
  r.next_pass = r.next_deviation <= tol;
  r.powers_pass = r.powers_max <= tol;
  r.passed = r.next_pass && r.powers_pass;
  return r;
}

namespace {

// All specs with max lag exactly L and total |exponent| exactly A.
void specs_with_shape(std::uint64_t L, std::uint64_t A, std::vector<MomentSpec>& out) {
  std::vector<MomentTerm> cur;
  std::function<void(std::uint64_t, std::uint64_t)> rec = [&](std::uint64_t lag, std::uint64_t left) {
    if (lag == L) {
      // the last lag must carry the remaining mass, which must be nonzero
      if (left == 0) return;
      for (int sgn : {-1, 1}) {
        cur.push_back({L, sgn * static_cast<long>(left)});
        out.emplace_back(cur);
        cur.pop_back();
      }
      return;
    }
    rec(lag + 1, left);
    for (std::uint64_t a = 1; a < left; ++a)
      for (int sgn : {-1, 1}) {
        cur.push_back({lag, sgn * static_cast<long>(a)});
        rec(lag + 1, left - a);
        cur.pop_back();
      }
  };
  rec(0, A);
}

}  // namespace

std::vector<MomentSpec> delta_specs(std::size_t count) {
  std::vector<MomentSpec> out;
  for (std::uint64_t h = 1; out.size() < count; ++h) {
    std::vector<MomentSpec> level;
    for (std::uint64_t L = 0; L < h; ++L) specs_with_shape(L, h - L, level);
    std::sort(level.begin(), level.end(), canonical_less);
    for (auto& s : level) {
      if (out.size() == count) break;
      out.push_back(std::move(s));
    }
  }
  return out;
}

DeltaResult delta_distance(const MomentEvaluator& a, const MomentEvaluator& b, const DeltaConfig& cfg) {
  DeltaResult r;
  r.terms = cfg.depth;
  CompensatedSum acc;
  double w = 1;
  for (const auto& s : delta_specs(cfg.depth)) {
    w *= 0.5;
    acc.add(w * std::abs(a(s) - b(s)));
  }
  r.value = acc.value();
  r.tail_bound = std::ldexp(1.0, -static_cast<int>(cfg.depth) + 1);
  return r;
}

DeltaResult delta_distance(const EmpiricalAverager& avg, const MomentEvaluator& oracle, const DeltaConfig& cfg) {
  return delta_distance(avg.evaluator(), oracle, cfg);
}

double log_mixture_weight(std::uint64_t D1, std::uint64_t d) {
  if (d < D1) return 0;
  const double dd = static_cast<double>(d);
  return static_cast<double>(D1) / (dd * (dd + 1));
}

LogMixture log_mixture_oracle(std::uint64_t D1, std::optional<std::uint64_t> D2, const MomentSpec& spec) {
  if (D1 == 0) throw ArgumentError("log_mixture_oracle: D1 must be >= 1");
  if (D2 && *D2 < D1) throw ArgumentError("log_mixture_oracle: D2 < D1");
  LogMixture out;
  ComplexSum acc;
  CompensatedSum wsum;
  // nu_d(spec) no longer depends on d once d >= max lag, so the weights from
  // there on are lumped: sum_{stop <= d <= D2} w_d = D1 (1/stop - 1/(D2+1)).
  const std::uint64_t stable = std::max<std::uint64_t>(D1, spec.max_lag());
  const std::uint64_t stop = D2 ? std::min(*D2, stable) : stable;
  for (std::uint64_t d = D1; d <= stop; ++d) {
    double w = log_mixture_weight(D1, d);
    if (d == stop)
      w = static_cast<double>(D1) *
          (1.0 / static_cast<double>(d) - (D2 ? 1.0 / static_cast<double>(*D2 + 1) : 0.0));
    acc.add(w * nu_d_moment(NuDOracle{static_cast<int>(d)}, spec));
    wsum.add(w);
  }
  out.value = acc.value();
  out.weight_total = wsum.value();
  out.tail_bound = D2 ? static_cast<double>(D1) / static_cast<double>(*D2 + 1) : 0.0;
  return out;
}

double short_interval_stat(const SequenceSource& u, std::uint64_t M, std::uint64_t H) {
  if (M == 0 || H == 0) throw ArgumentError("short_interval_stat: M and H must be >= 1");
  const std::uint64_t last = M + H - 1;
  Materialized mat(u, last);
  auto vals = mat.value_span();
  // window sums recomputed from scratch every 4096 steps to bound drift
  std::complex<long double> window = 0;
  CompensatedSum acc;
  const double invH = 1.0 / static_cast<double>(H);
  for (std::uint64_t m = 1; m <= M; ++m) {
    if (m == 1 || (m - 1) % 4096 == 0) {
      window = 0;
      for (std::uint64_t h = 0; h < H; ++h) window += std::complex<long double>(vals[m - 1 + h]);
    } else {
      window += std::complex<long double>(vals[m + H - 2]) - std::complex<long double>(vals[m - 2]);
    }
    acc.add(std::abs(std::complex<double>(window)) * invH);
  }
  return acc.value() / static_cast<double>(M);
}

double mean_slow_variation_stat(const SequenceSource& u, std::uint64_t N) {
  if (N == 0) throw ArgumentError("mean_slow_variation_stat: N must be >= 1");
  Materialized mat(u, N + 1);
  CompensatedSum acc;
  if (mat.has_phases()) {
    auto ph = mat.phase_span();
    for (std::uint64_t n = 0; n < N; ++n) acc.add(chord(ph[n + 1], ph[n]));
  } else {
    auto v = mat.value_span();
    for (std::uint64_t n = 0; n < N; ++n) acc.add(std::abs(v[n + 1] - v[n]));
  }
  return acc.value() / static_cast<double>(N);
}

}  // namespace mrtlab
