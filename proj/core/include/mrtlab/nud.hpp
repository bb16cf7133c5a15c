#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrtlab/moment_spec.hpp"
#include "mrtlab/turns.hpp"

namespace mrtlab {

// A point (x_0, ..., x_d) of T^{d+1}. The unipotent map fixes x_0 and sends
// x_j to x_{j-1} + x_j, so Z_n = e(x_d of T^n x).
struct TorusPoint {
  std::vector<Turns> coords;
  int d() const { return static_cast<int>(coords.size()) - 1; }
  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

TorusPoint td_apply(const TorusPoint& p);
// x_j -> sum_{k <= j} C(r, j - k) x_k with exact binomials mod 2^128.
TorusPoint td_power(const TorusPoint& p, std::uint64_t r);

// C(n, k) mod 2^128.
u128 binomial_mod_2_128(std::uint64_t n, std::uint64_t k);

// Phases of Z_0, ..., Z_{length-1} for X_j = uniform_turns(seed, stream, j):
// Z_n = e(sum_{j <= min(n, d)} C(n, j) X_j).
std::vector<Turns> sample_nu_d(int d, std::size_t length, std::uint64_t seed, std::uint64_t stream = 0);
// Independent uniform phases, the product measure on the circle.
std::vector<Turns> sample_iid(std::size_t length, std::uint64_t seed, std::uint64_t stream = 0);

// `count` independent nu_d paths of a common length, stored path-major.
struct SampleSet {
  int d = 0;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::size_t length = 0;
  std::vector<Turns> phases;
  std::span<const Turns> path(std::size_t i) const { return {phases.data() + i * length, length}; }
};
SampleSet sample_set(int d, std::size_t count, std::size_t length, std::uint64_t seed);

// Ensemble average E[prod Z_lag^exp] over the paths of a SampleSet.
class EnsembleAverager {
 public:
  explicit EnsembleAverager(const SampleSet& set) : set_(&set) {}
  std::complex<double> moment(const MomentSpec& spec) const;
  const SampleSet& samples() const { return *set_; }

 private:
  const SampleSet* set_;
};

// Visits every spec with at most max_terms distinct lags in [0, max_lag] and
// nonzero exponents |j| <= max_exp, together with its ensemble average.
// Shares prefix products between specs; conjugate pairs are computed once.
void for_each_spec_moment(const SampleSet& set, std::uint64_t max_lag, std::size_t max_terms, long max_exp,
                          const std::function<void(const MomentSpec&, std::complex<double>)>& visit);

// All specs of the family above in DFS order (positive lead exponents first,
// then their conjugates).
std::vector<MomentSpec> spec_family(std::uint64_t max_lag, std::size_t max_terms, long max_exp);

struct NuDOracle {
  int d = 0;
  std::complex<double> moment(const MomentSpec& spec) const;
};

// 1 if sum_i j_i C(s_i, l) = 0 for l = 0..d, else 0.
std::complex<double> nu_d_moment(const NuDOracle& oracle, const MomentSpec& spec);
// sum_i j_i s_i^l for l = 0..d all vanish (0^0 = 1).
bool powersum_equivalent(const MomentSpec& spec, int d);
// moment(spec) == moment(spec with lags scaled by r).
bool strong_stationarity_check(int d, const MomentSpec& spec, std::uint64_t r);

// First order l in 0..d where the power sums of the two lag multisets
// differ, or nullopt when they agree through order d.
std::optional<int> first_powersum_mismatch(const std::vector<std::uint64_t>& lhs,
                                           const std::vector<std::uint64_t>& rhs, int d);

// |prod_{l in lhs} Z_{l+n} - prod_{l' in rhs} Z_{l'+n}| <= tol for every
// shift n that keeps all indices inside the sample, using complex products.
bool quasi_eigen_relation_check(std::span<const Turns> sample, int d, const std::vector<std::uint64_t>& lhs,
                                const std::vector<std::uint64_t>& rhs, double tol);

struct IndependenceEntry {
  std::vector<long> exponents;  // one per window position
  double magnitude = 0;
};
struct IndependenceReport {
  int d = 0;
  std::size_t window = 0;
  long max_exponent = 0;
  std::size_t samples = 0;
  double threshold = 0;
  std::vector<IndependenceEntry> entries;
  double max_magnitude = 0;
  bool passed = true;
};
// Mixed moments of (Z_0, ..., Z_{window-1}) with |exponents| <= E, not all 0.
// Requires window <= d + 1 (the independence range).
IndependenceReport independence_report(const SampleSet& set, std::size_t window, long max_exponent,
                                       double threshold);

}  // namespace mrtlab
