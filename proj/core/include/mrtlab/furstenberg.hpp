#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mrtlab/moment_spec.hpp"
#include "mrtlab/sequence.hpp"
#include "mrtlab/summation.hpp"

namespace mrtlab {

// Moments of some measure on (S^1)^N: an empirical measure, a nu_d oracle or
// a sample ensemble.
using MomentEvaluator = std::function<std::complex<double>(const MomentSpec&)>;

enum class Weighting { cesaro, logarithmic };

// E_N(u) or E_N^log(u) restricted to moments with lags <= max_lag. Values of
// u on [1, N + max_lag] are materialized once.
class EmpiricalAverager {
 public:
  EmpiricalAverager(const SequenceSource& u, std::uint64_t N, std::uint64_t max_lag,
                    Weighting weighting = Weighting::cesaro);

  std::uint64_t N() const { return N_; }
  std::uint64_t max_lag() const { return max_lag_; }
  Weighting weighting() const { return weighting_; }
  bool exact_phases() const { return !phases_.empty(); }

  std::complex<double> moment(const MomentSpec& spec) const;
  // Cesaro moments E_n for n = 1..N (entry n-1), regardless of weighting.
  std::vector<std::complex<double>> cesaro_prefix_moments(const MomentSpec& spec) const;
  MomentEvaluator evaluator() const;

 private:
  std::complex<double> term(const MomentSpec& spec, std::uint64_t n) const;
  std::uint64_t N_, max_lag_;
  Weighting weighting_;
  std::vector<std::complex<double>> values_;  // u(1), u(2), ...
  std::vector<Turns> phases_;
};

std::complex<double> empirical_moment(const EmpiricalAverager& avg, const MomentSpec& spec);

// Weighted averages of several specs over n in [1, N], streaming u in
// chunks so nothing of size N is held in memory. Sources without exact
// phases must be unimodular to 1e-9 when require_unit is set.
std::vector<std::complex<double>> streaming_moments(const SequenceSource& u, std::uint64_t N,
                                                    const std::vector<MomentSpec>& specs,
                                                    Weighting weighting = Weighting::cesaro,
                                                    const ParallelOptions& par = {}, bool require_unit = false);

// The spec of phi_d^l: exponents of pi_d minus those of pi~_d, times l.
MomentSpec phi_spec(int d, long ell = 1);

// (1/N) sum_{n<=N} phi_d^l(u(n), ..., u(n+d)). Needs |u| = 1 to 1e-9.
std::complex<double> phi_statistic(const SequenceSource& u, int d, long ell, std::uint64_t N,
                                   const ParallelOptions& par = {});

struct CriterionReport {
  int d = 0;
  std::uint64_t N = 0;
  long ell_max = 0;
  double tol = 0;
  std::complex<double> next_statistic;     // phi_statistic(d+1, 1, N)
  double next_deviation = 0;               // |next_statistic - 1|
  std::vector<std::complex<double>> powers;  // phi_statistic(d, l, N), l = 1..ell_max
  double powers_max = 0;
  bool next_pass = false;
  bool powers_pass = false;
  bool passed = false;
};
CriterionReport criterion_check(const SequenceSource& u, int d, std::uint64_t N, long ell_max, double tol,
                                const ParallelOptions& par = {});

struct DeltaConfig {
  std::size_t depth = 40;
};

// The first `count` non-constant specs in the Delta order: grouped by height
// max lag + total |exponent|, ordered inside a height by (max lag, total
// |exponent|, lexicographic).
std::vector<MomentSpec> delta_specs(std::size_t count);

struct DeltaResult {
  double value = 0;       // truncated sum over the first J specs
  double tail_bound = 0;  // 2^{-J+1}
  std::size_t terms = 0;
};
DeltaResult delta_distance(const MomentEvaluator& a, const MomentEvaluator& b, const DeltaConfig& cfg = {});
DeltaResult delta_distance(const EmpiricalAverager& avg, const MomentEvaluator& oracle, const DeltaConfig& cfg = {});

struct LogMixture {
  std::complex<double> value;
  double weight_total = 0;  // sum of the weights actually used
  double tail_bound = 0;    // mass beyond D2 (0 for D2 = infinity)
};
// sum_{D1 <= d <= D2} D1 (1/d - 1/(d+1)) nu_d(spec); D2 = nullopt means
// infinity, summed exactly because nu_d(spec) is constant once d >= max lag.
LogMixture log_mixture_oracle(std::uint64_t D1, std::optional<std::uint64_t> D2, const MomentSpec& spec);
double log_mixture_weight(std::uint64_t D1, std::uint64_t d);

// (1/M) sum_{m<=M} |(1/H) sum_{0<=h<H} u(m+h)|
double short_interval_stat(const SequenceSource& u, std::uint64_t M, std::uint64_t H);
// (1/N) sum_{n<=N} |u(n+1) - u(n)|
double mean_slow_variation_stat(const SequenceSource& u, std::uint64_t N);

}  // namespace mrtlab
