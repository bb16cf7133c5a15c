#pragma once

#include <gmpxx.h>

#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mrtlab/bigfloat.hpp"
#include "mrtlab/phase_eval.hpp"
#include "mrtlab/polynomial.hpp"

namespace mrtlab {

// Exponent vector (e_0, ..., e_d) of a monomial in z_0, ..., z_d.
struct FactorMultiset {
  int d = 0;
  std::vector<unsigned long> exponents;
  unsigned long total() const;
  friend bool operator==(const FactorMultiset&, const FactorMultiset&) = default;
};

inline constexpr int kMaxPolyDegreeIndex = 30;

// (pi_d, pi~_d): pi_0 = z_0, pi~_0 = 1, pi_{d+1}(z_0..z_{d+1}) =
// pi_d(z_1..z_{d+1}) pi~_d(z_0..z_d) and symmetrically for pi~_{d+1}.
std::pair<FactorMultiset, FactorMultiset> pi_pair(int d, int max_d = kMaxPolyDegreeIndex);

// Signed exponents of phi_d = pi_d / pi~_d.
std::vector<long> phi_exponents(int d);

// phi_d(z_0, ..., z_d) evaluated on complex inputs.
std::complex<double> phi_value(int d, std::span<const std::complex<double>> z);

struct PolyTriple {
  int d = 0;
  IntPoly P, Q, R;  // R = Q - P
  // Factored forms as (root offset j, multiplicity): P = prod (n + j)^m.
  std::vector<std::pair<long, unsigned long>> P_factors, Q_factors;
};

// Expansion of the factored forms; degrees are checked against 2^{d-1} and
// 2^{d-1} - d and an InvariantError is raised on mismatch.
PolyTriple pq_polynomials(int d, int max_d = kMaxPolyDegreeIndex);
// Independent route: P_{d+1}(n) = P_d(n+1) Q_d(n), Q_{d+1}(n) = Q_d(n+1) P_d(n)
// on expanded polynomials. Factored forms are left empty.
PolyTriple pq_via_recurrence(int d);

struct RationalFunction {
  IntPoly num, den;
};

struct PhaseFunction {
  int d = 0;
  PolyTriple triple;
  std::optional<mpq_class> K;  // f_d ~ K/x^d, d >= 1
  mpq_class L;                 // f'_d ~ L/x^{d+1}
  double H = 0;                // f'_d monotone on [H, oo)
  RationalFunction derivative;
  // scale * f_d as a combination of logarithms.
  LogCombination log_combination(const mpz_class& scale) const;
};

PhaseFunction make_phase_function(int d);

// f_d(x) = -log1p(R(x)/P(x)) (log x for d = 0). x must exceed every real zero
// of P Q, i.e. x > 0.
BigFloat fd_eval(const PhaseFunction& pf, const mpq_class& x, mpfr_prec_t precision);
BigFloat fd_eval(const PhaseFunction& pf, double x, mpfr_prec_t precision);

// f'_d = (P'R - PR') / (PQ), or 1/x for d = 0.
RationalFunction fd_derivative(const PhaseFunction& pf);
RationalFunction fd_derivative(const PolyTriple& pt);

struct AsymptoticConstants {
  mpq_class K, L;
};
AsymptoticConstants asymptotic_constants(const PolyTriple& pt);

// Upper bound for the largest real zero of the numerator of f''_d, clamped
// at 0 and resolved to 1/1024.
double monotone_threshold(const PhaseFunction& pf);
double monotone_threshold(const RationalFunction& derivative);

// Smallest c >= 0 on the grid 1/denominator such that p(x + c) has no sign
// variations; the largest real root of p is then at most c.
mpq_class real_root_upper_bound(const IntPoly& p, unsigned long denominator = 1024);

}  // namespace mrtlab
