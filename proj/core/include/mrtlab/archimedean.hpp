#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "mrtlab/mrt.hpp"
#include "mrtlab/sequence.hpp"
#include "mrtlab/summation.hpp"

namespace mrtlab {

// Fourier coefficients c^k / (1 + ik) of a rotated copy of g(z) dz.
struct KappaLimit {
  std::complex<double> c = 1;
  std::complex<double> coefficient(long k) const;
  static KappaLimit from_window(std::uint64_t N);  // c = N^i
};

// (1/N) sum_{n<=N} n^{ikt}, phases to 2^-40 turns.
std::complex<double> fourier_coeff_empirical(long k, std::uint64_t N, long t = 1, const ParallelOptions& par = {});

// 2 pi e^{2 pi x} / (e^{2 pi} - 1), x reduced mod 1.
double density_g(double x);

struct RotationRow {
  std::uint64_t N = 0;
  std::complex<double> c;                // fourier_coeff_empirical(1, N) (1 + i)
  std::vector<double> deviations;        // k = -k_max..k_max
  double max_deviation = 0;
};
struct RotationReport {
  long k_max = 0;
  std::vector<RotationRow> rows;
};
RotationReport rotation_family_check(const std::vector<std::uint64_t>& N_grid, long k_max,
                                     const ParallelOptions& par = {});

// v(n) = 1 on (t_m, r_{m+1}] and n^{i s_{m+1}} on (r_{m+1}, t_{m+1}], with
// r_m = floor(s_m^{3/2}).
struct SarnakV {
  MrtParams params;
  std::vector<std::uint64_t> r;  // r[m] for stage m (1-based); r[0], r[1] unused
  static SarnakV from_params(const MrtParams& params);
};

// Phase of v(n); ArgumentError for n <= t_1 or n > t_last.
Turns sarnak_v(const SarnakV& sv, std::uint64_t n);

// v as a sequence on [1, t_last], taking v = 1 on [1, t_1].
class SarnakSequence final : public SequenceSource {
 public:
  explicit SarnakSequence(SarnakV sv) : sv_(std::move(sv)) {}
  std::complex<double> value(std::uint64_t n) const override { return phase(n).unit(); }
  bool has_phases() const override { return true; }
  Turns phase(std::uint64_t n) const override;
  std::optional<std::uint64_t> last_index() const override { return sv_.params.stages.back().t; }
  std::string describe() const override { return "sarnak_v"; }
  void phases(std::uint64_t first, std::span<Turns> out) const override;

 private:
  SarnakV sv_;
};

struct CorrelationResult {
  std::complex<double> value;  // (1/t_{m+1}) sum_{n<=t_{m+1}} u(n) conj(v(n))
  double error_radius = 0;     // 0 when every term was summed explicitly
  std::uint64_t explicit_terms = 0;
  bool surrogate = false;
};

// Direct summation against a given u, with v = 1 on [1, t_1]. ResourceError
// if t_{m+1} exceeds the budget.
CorrelationResult correlation_uv(const SequenceSource& u, const SarnakV& sv, std::size_t m,
                                 std::uint64_t budget = 100'000'000);
// u(n) = n^{i s_{m+1}}: the range (r_{m+1}, t_{m+1}] contributes exactly
// (t - r)/t; the head is summed up to the budget and the rest bounded by
// Kusmin-Landau or trivially.
CorrelationResult correlation_uv_surrogate(const SarnakV& sv, std::size_t m, std::uint64_t budget = 10'000'000);

}  // namespace mrtlab
