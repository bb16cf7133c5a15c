#include "mrtlab/archimedean.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mrtlab/error.hpp"
#include "mrtlab/expsum.hpp"
#include "mrtlab/phase_eval.hpp"

namespace mrtlab {

std::complex<double> KappaLimit::coefficient(long k) const {
  return std::pow(c, static_cast<double>(k)) / std::complex<double>(1.0, static_cast<double>(k));
}

KappaLimit KappaLimit::from_window(std::uint64_t N) {
  return {phase_at(LogCombination::single_log(1), N).unit()};
}

std::complex<double> fourier_coeff_empirical(long k, std::uint64_t N, long t, const ParallelOptions& par) {
  if (N == 0) throw ArgumentError("fourier_coeff_empirical: N must be >= 1");
  if (k == 0 || t == 0) return 1;
  const LogCombination comb = LogCombination::single_log(mpz_class(k) * t);
  auto parts = chunked_map<ComplexSum>(1, N, par, [&](std::size_t, std::uint64_t a, std::uint64_t b) {
    BatchedComplexSum s;
    for_each_phase(comb, a, b, [&](std::uint64_t, Turns ph) { s.add(ph.unit()); });
    return s.sum();
  });
  ComplexSum total;
  for (const auto& p : parts) total.add(p);
  return total.value() / static_cast<double>(N);
}

double density_g(double x) {
  x -= std::floor(x);
  constexpr double tau = 2 * std::numbers::pi;
  return tau * std::exp(tau * x) / std::expm1(tau);
}

RotationReport rotation_family_check(const std::vector<std::uint64_t>& N_grid, long k_max, const ParallelOptions& par) {
  if (k_max < 0) throw ArgumentError("rotation_family_check: k_max must be >= 0");
  RotationReport rep;
  rep.k_max = k_max;
  for (auto N : N_grid) {
    RotationRow row;
    row.N = N;
    row.c = fourier_coeff_empirical(1, N, 1, par) * std::complex<double>(1, 1);
    const KappaLimit kappa{row.c};
    for (long k = -k_max; k <= k_max; ++k) {
      const double dev = k == 0 ? 0.0 : std::abs(fourier_coeff_empirical(k, N, 1, par) - kappa.coefficient(k));
      row.deviations.push_back(dev);
      row.max_deviation = std::max(row.max_deviation, dev);
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

SarnakV SarnakV::from_params(const MrtParams& params) {
  params.validate();
  SarnakV sv;
  sv.params = params;
  sv.r.assign(params.stages.size() + 1, 0);
  for (std::size_t m = 2; m <= params.stages.size(); ++m) {
    mpz_class s = static_cast<unsigned long>(params.stages[m - 1].s), cube, root;
    cube = s * s * s;
    mpz_sqrt(root.get_mpz_t(), cube.get_mpz_t());
    sv.r[m] = root.get_ui();
  }
  return sv;
}

namespace {

// Stage index m + 1 with t_m < n <= t_{m+1}; 0 when n <= t_1.
std::size_t stage_of(const SarnakV& sv, std::uint64_t n) {
  const auto& st = sv.params.stages;
  if (n <= st.front().t) return 0;
  if (n > st.back().t) return st.size() + 1;
  std::size_t m = 1;
  while (st[m].t < n) ++m;
  return m + 1;
}

}  // namespace

Turns sarnak_v(const SarnakV& sv, std::uint64_t n) {
  const std::size_t k = stage_of(sv, n);
  if (k == 0 || k > sv.params.stages.size()) {
    std::ostringstream os;
    os << "sarnak_v: n = " << n << " outside (t_1, t_last] = (" << sv.params.stages.front().t << ", "
       << sv.params.stages.back().t << "]";
    throw ArgumentError(os.str());
  }
  if (n <= sv.r[k]) return Turns();
  return phase_at(LogCombination::single_log(sv.params.stages[k - 1].s), n);
}

Turns SarnakSequence::phase(std::uint64_t n) const {
  if (n == 0) throw ArgumentError("sarnak_v: n must be >= 1");
  if (n <= sv_.params.stages.front().t) return Turns();
  return sarnak_v(sv_, n);
}

void SarnakSequence::phases(std::uint64_t first, std::span<Turns> out) const {
  std::uint64_t n = first;
  const std::uint64_t last = first + out.size() - 1;
  require_range(last, "SarnakSequence");
  while (n <= last) {
    const std::size_t k = stage_of(sv_, n);
    if (k == 0 || n <= sv_.r[k]) {
      const std::uint64_t edge = k == 0 ? sv_.params.stages.front().t : sv_.r[k];
      for (; n <= std::min(edge, last); ++n) out[n - first] = Turns();
      continue;
    }
    const std::uint64_t edge = std::min(last, sv_.params.stages[k - 1].t);
    for_each_phase(LogCombination::single_log(sv_.params.stages[k - 1].s), n, edge,
                   [&](std::uint64_t i, Turns ph) { out[i - first] = ph; });
    n = edge + 1;
  }
}

CorrelationResult correlation_uv(const SequenceSource& u, const SarnakV& sv, std::size_t m, std::uint64_t budget) {
  if (m < 1 || m + 1 > sv.params.stages.size()) throw ArgumentError("correlation_uv: stage m+1 undefined");
  const std::uint64_t t = sv.params.stages[m].t;
  if (t > budget) {
    std::ostringstream os;
    os << "correlation_uv: t_{m+1} = " << t << " exceeds the budget " << budget << "; use surrogate mode";
    throw ResourceError(os.str());
  }
  u.require_range(t, "correlation_uv");
  SarnakSequence v(sv);
  std::vector<Turns> vp(t);
  v.phases(1, vp);
  ComplexSum acc;
  if (u.has_phases()) {
    std::vector<Turns> up(t);
    u.phases(1, up);
    for (std::uint64_t i = 0; i < t; ++i) acc.add((up[i] - vp[i]).unit());
  } else {
    for (std::uint64_t i = 0; i < t; ++i) acc.add(u.value(i + 1) * std::conj(vp[i].unit()));
  }
  CorrelationResult r;
  r.value = acc.value() / static_cast<double>(t);
  r.explicit_terms = t;
  return r;
}

CorrelationResult correlation_uv_surrogate(const SarnakV& sv, std::size_t m, std::uint64_t budget) {
  if (m < 1 || m + 1 > sv.params.stages.size()) throw ArgumentError("correlation_uv: stage m+1 undefined");
  const std::uint64_t t = sv.params.stages[m].t;
  const std::uint64_t tm = sv.params.stages[m - 1].t;
  const std::uint64_t s = sv.params.stages[m].s;
  const std::uint64_t r = sv.r[m + 1];
  const LogCombination comb = LogCombination::single_log(s);
  CorrelationResult out;
  out.surrogate = true;

  const std::uint64_t head_end = std::min(r, budget);
  ComplexSum acc;
  if (head_end >= 1) {
    std::vector<Turns> vp(head_end);
    SarnakSequence(sv).phases(1, vp);
    for_each_phase(comb, 1, head_end, [&](std::uint64_t n, Turns ph) { acc.add((ph - vp[n - 1]).unit()); });
  }
  out.explicit_terms = head_end;

  // (head_end, r]: v = 1 there when head_end >= t_m, so the terms are n^{is};
  // Kusmin-Landau applies once s / (2 pi n) < 1/2.
  double bound = 0;
  if (head_end < r) {
    std::uint64_t a = head_end + 1;
    const auto kl_start = static_cast<std::uint64_t>(std::floor(static_cast<double>(s) / std::numbers::pi)) + 1;
    const std::uint64_t trivial_end = std::min(r, std::max({a - 1, tm, kl_start}));
    bound += static_cast<double>(trivial_end - (a - 1));
    a = trivial_end + 1;
    if (a <= r) {
      static const PhaseFunction f0 = make_phase_function(0);
      try {
        bound += kl_certificate(f0, s, 1, a, r).bound;
      } catch (const CertificateRefused&) {
        bound += static_cast<double>(r - a + 1);
      }
    }
  }
  // (r, t]: u conj(v) = 1 exactly
  acc.add(std::complex<double>(static_cast<double>(t - r), 0));
  out.value = acc.value() / static_cast<double>(t);
  out.error_radius = bound / static_cast<double>(t);
  return out;
}

}  // namespace mrtlab
