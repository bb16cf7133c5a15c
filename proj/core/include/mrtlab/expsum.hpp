#pragma once

#include <complex>
#include <cstdint>
#include <memory>

#include "mrtlab/poly_family.hpp"
#include "mrtlab/summation.hpp"
#include "mrtlab/turns.hpp"

namespace mrtlab {

struct PhaseReduction {
  Turns turns;               // phase / 2pi mod 1
  double radians = 0;        // in [0, 2pi)
  mpfr_prec_t precision = 0; // working precision actually used
};

// l * s * f_d(n) mod 2pi with absolute error below 2^-32. d = 0 gives the
// surrogate phase s log n. When `precision` cannot resolve the magnitude the
// call escalates, or throws PrecisionError if auto_escalate is false.
PhaseReduction phase_reduce(std::uint64_t s, long ell, const PhaseFunction& pf, std::uint64_t n,
                            mpfr_prec_t precision = 128, bool auto_escalate = true);

struct ExpSumSpec {
  std::shared_ptr<const PhaseFunction> phase;
  std::uint64_t s = 1;
  long ell = 1;
  std::uint64_t a = 1, b = 1;
  mpfr_prec_t precision = 128;
  bool auto_escalate = true;
  bool track_max_partial = false;
  ParallelOptions parallel;
};

struct ExpSumResult {
  std::complex<double> value;  // (1/(b-a+1)) sum_{a<=n<=b} e^{i l s f_d(n)}
  std::complex<double> raw;    // the unnormalized sum
  std::uint64_t terms = 0;
  double error_bound = 0;      // bound on |value - exact|
  double max_partial = 0;      // max_m |sum_{a<=n<=m}|, if tracked
};

ExpSumResult exp_sum(const ExpSumSpec& spec);

struct KLCertificate {
  double lambda1 = 0;
  bool monotone = false;
  double bound = 0;  // 2 / (pi lambda1)
  std::uint64_t a = 0, b = 0;
};

// Kusmin-Landau certificate for sum_{a<=n<=b} e^{i l s f_d(n)}. Refused
// (CertificateRefused) when a < H_d or |l s f'_d / 2pi| reaches 1/2 on [a, b].
KLCertificate kl_certificate(const PhaseFunction& pf, std::uint64_t s, long ell, std::uint64_t a,
                             std::uint64_t b);

// Head/tail split of [1, N] at ceil(s^alpha): trivial bound on the head,
// Kusmin-Landau on the tail. bound is for the normalized sum.
struct KLSplit {
  std::uint64_t head = 0;  // number of head terms
  KLCertificate tail;
  double bound = 0;
};
KLSplit kl_split(const PhaseFunction& pf, std::uint64_t s, long ell, std::uint64_t N, double alpha);

// beta at the centre of (1/(d+1), 1/d); 1.5 for d = 0.
double window_midpoint(int d);
// (1/(d+1) + beta) / 2.
double default_alpha(int d, double beta);

// max over m in [a, b] of |sum_{a<=n<=m} e^{2 pi i phase(n)}| for a phase
// callable returning Turns.
template <class PhaseFn>
double max_partial_sum(PhaseFn&& phase, std::uint64_t a, std::uint64_t b) {
  ComplexSum acc;
  double best = 0;
  for (std::uint64_t n = a; n <= b; ++n) {
    acc.add(phase(n).unit());
    best = std::max(best, std::abs(acc.value()));
  }
  return best;
}

}  // namespace mrtlab
