#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "mrtlab/bigfloat.hpp"
#include "mrtlab/turns.hpp"

namespace mrtlab {

// The phase  scale * sum_j m_j log(n + j) / (2 pi)  (in turns, mod 1) for
// integer n >= 1. With a single factor (0, 1) this is n^{i scale}; with the
// signed exponents of phi_d it is scale * f_d(n).
struct LogCombination {
  std::vector<std::pair<long, long>> factors;  // (offset j >= 0, signed multiplicity m_j)
  mpz_class scale = 1;

  static LogCombination single_log(const mpz_class& scale) { return {{{0, 1}}, scale}; }
  long total_multiplicity() const;     // sum m_j
  unsigned long weight() const;        // sum |m_j|
  long max_offset() const;
};

// Absolute error target for every phase this module produces, in turns.
inline constexpr double kPhaseErrorTurns = 0x1p-40;

// Single-point evaluation at working precision raised until the reduction
// mod 1 is certified to 2^-(frac_bits) turns. Used for anchors and as the
// reference path in tests.
Turns phase_at(const LogCombination& comb, std::uint64_t n, int frac_bits = 128);

// High-precision value of  sum_j m_j log(n + j)  (radians-free), computed as
// log1p of an exact rational when sum m_j = 0 so cancellation is harmless.
BigFloat log_combination_value(const LogCombination& comb, const mpz_class& n, mpfr_prec_t bits);
BigFloat log_combination_value(const LogCombination& comb, const mpq_class& x, mpfr_prec_t bits);

// Local Taylor model of the phase on [n0, n0 + length):
//   phase(n0 + h) = anchor + slope*h + sum_{k>=2} curvature[k-2] h^k  (mod 1)
// anchor and slope are exact to 2^-128 turns; the curvature tail is evaluated
// in double and kept below kMaxTail in magnitude.
struct PhaseBlock {
  static constexpr int kMaxTerms = 40;
  static constexpr double kMaxTail = 64.0;
  std::uint64_t n0 = 0;
  std::uint64_t length = 0;
  Turns anchor;
  Turns slope;
  std::array<double, kMaxTerms> curvature{};
  int terms = 0;            // number of curvature entries in use
  double error_bound = 0;   // certified bound on |model - phase| in turns

  Turns at(std::uint64_t h) const {
    double tail = 0;
    const double x = static_cast<double>(h);
    for (int k = terms - 1; k >= 0; --k) tail = (tail + curvature[static_cast<std::size_t>(k)]) * x;
    tail *= x;
    return anchor + h * slope + Turns::from_double(tail);
  }
  double tail(double x) const {
    double t = 0;
    for (int k = terms - 1; k >= 0; --k) t = (t + curvature[static_cast<std::size_t>(k)]) * x;
    return t * x;
  }
  // fn(h, phase) for h = 0..length-1; the linear part is accumulated exactly.
  template <class Fn>
  void for_each(Fn&& fn) const {
    Turns lin = anchor;
    for (std::uint64_t h = 0; h < length; ++h, lin += slope)
      fn(h, lin + Turns::from_double(tail(static_cast<double>(h))));
  }
};

// Plans the longest block starting at n0 that satisfies the accuracy target,
// capped at max_length. Blocks of length 1 are exact single-point anchors.
PhaseBlock plan_block(const LogCombination& comb, std::uint64_t n0, std::uint64_t max_length);

// Calls fn(n, Turns) for n = first..last in order.
template <class Fn>
void for_each_phase(const LogCombination& comb, std::uint64_t first, std::uint64_t last, Fn&& fn) {
  std::uint64_t n = first;
  while (n <= last) {
    PhaseBlock b = plan_block(comb, n, last - n + 1);
    b.for_each([&](std::uint64_t h, Turns t) { fn(n + h, t); });
    n += b.length;
  }
}

std::vector<Turns> phases(const LogCombination& comb, std::uint64_t first, std::uint64_t last);

}  // namespace mrtlab
