#include "mrtlab/phase_eval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mrtlab/error.hpp"

namespace mrtlab {
namespace {

constexpr double kTailTarget = 0x1p-44;
constexpr std::uint64_t kMinBlockStart = 32;

mpz_class power_product(const LogCombination& comb, const mpz_class& n, int sign) {
  mpz_class acc = 1;
  mpz_class base;
  mpz_class pw;
  for (auto [j, m] : comb.factors) {
    if (m == 0 || (m > 0) != (sign > 0)) continue;
    base = n + j;
    mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(std::labs(m)));
    acc *= pw;
  }
  return acc;
}

mpq_class power_product(const LogCombination& comb, const mpq_class& x, int sign) {
  mpq_class acc = 1;
  for (auto [j, m] : comb.factors) {
    if (m == 0 || (m > 0) != (sign > 0)) continue;
    mpq_class base = x + j;
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(std::labs(m)));
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(std::labs(m)));
    acc *= mpq_class(num, den);
  }
  acc.canonicalize();
  return acc;
}

// log2 of a crude upper bound on |scale * value / 2pi|.
long magnitude_bits(const LogCombination& comb, double log_arg) {
  const double sc = std::fabs(comb.scale.get_d());
  const double mag = sc * static_cast<double>(comb.weight()) * std::max(1.0, log_arg) / (2 * std::numbers::pi);
  return std::max(0L, static_cast<long>(std::ceil(std::log2(std::max(mag, 1.0)))) + 1);
}

template <class Arg>
BigFloat value_impl(const LogCombination& comb, const Arg& x, mpfr_prec_t bits) {
  if (comb.total_multiplicity() == 0) {
    // log(P/Q) = log1p((P - Q)/Q) with P, Q exact.
    auto P = power_product(comb, x, +1);
    auto Q = power_product(comb, x, -1);
    mpq_class ratio = mpq_class(P - Q) / mpq_class(Q);
    ratio.canonicalize();
    BigFloat r(bits + 8, ratio);
    BigFloat out(bits);
    mpfr_log1p(out.get(), r.get(), MPFR_RNDN);
    return out;
  }
  const mpfr_prec_t work = bits + 16 + static_cast<mpfr_prec_t>(std::log2(comb.weight() + 1.0));
  BigFloat acc(work);
  BigFloat term(work);
  for (auto [j, m] : comb.factors) {
    if (m == 0) continue;
    Arg base = x + j;
    BigFloat b(work, base);
    mpfr_log(term.get(), b.get(), MPFR_RNDN);
    mpfr_mul_si(term.get(), term.get(), m, MPFR_RNDN);
    mpfr_add(acc.get(), acc.get(), term.get(), MPFR_RNDN);
  }
  BigFloat out(bits);
  mpfr_set(out.get(), acc.get(), MPFR_RNDN);
  return out;
}

// sum_j m_j / (n0 + j)^k, exactly.
mpq_class inverse_power_sum(const LogCombination& comb, std::uint64_t n0, unsigned k) {
  mpq_class acc = 0;
  mpz_class den;
  for (auto [j, m] : comb.factors) {
    if (m == 0) continue;
    mpz_class base = mpz_class(static_cast<unsigned long>(n0)) + j;
    mpz_pow_ui(den.get_mpz_t(), base.get_mpz_t(), k);
    acc += mpq_class(mpz_class(m), den);
  }
  acc.canonicalize();
  return acc;
}

}  // namespace

long LogCombination::total_multiplicity() const {
  long s = 0;
  for (auto [j, m] : factors) s += m;
  return s;
}

unsigned long LogCombination::weight() const {
  unsigned long w = 0;
  for (auto [j, m] : factors) w += static_cast<unsigned long>(std::labs(m));
  return w;
}

long LogCombination::max_offset() const {
  long o = 0;
  for (auto [j, m] : factors) o = std::max(o, j);
  return o;
}

BigFloat log_combination_value(const LogCombination& comb, const mpz_class& n, mpfr_prec_t bits) {
  if (n <= 0) throw DomainError("log combination needs n >= 1");
  return value_impl(comb, n, bits);
}

BigFloat log_combination_value(const LogCombination& comb, const mpq_class& x, mpfr_prec_t bits) {
  if (x <= 0) throw DomainError("log combination needs x > 0");
  return value_impl(comb, x, bits);
}

Turns phase_at(const LogCombination& comb, std::uint64_t n, int frac_bits) {
  if (n == 0) throw DomainError("phase_at: n must be >= 1");
  const long mag = magnitude_bits(comb, std::log(static_cast<double>(n) + comb.max_offset() + 1.0));
  const mpfr_prec_t bits = static_cast<mpfr_prec_t>(mag + frac_bits + 32);
  BigFloat v = log_combination_value(comb, mpz_class(static_cast<unsigned long>(n)), bits);
  BigFloat sc(bits, comb.scale);
  mpfr_mul(v.get(), v.get(), sc.get(), MPFR_RNDN);
  return radians_to_turns(v);
}

PhaseBlock plan_block(const LogCombination& comb, std::uint64_t n0, std::uint64_t max_length) {
  if (n0 == 0) throw DomainError("plan_block: n must be >= 1");
  PhaseBlock b;
  b.n0 = n0;
  b.length = 1;
  b.anchor = phase_at(comb, n0);
  b.error_bound = 0x1p-120;
  std::uint64_t cap = std::min<std::uint64_t>(max_length, n0 / 16);
  if (n0 < kMinBlockStart || cap < 2) return b;

  const double sc_over_2pi = std::fabs(comb.scale.get_d()) / (2 * std::numbers::pi);
  const double W = static_cast<double>(comb.weight());
  const double n0d = static_cast<double>(n0);

  // c_k = scale (-1)^{k+1} S_k / (2 pi k), S_k = sum m_j (n0+j)^{-k}
  std::vector<double> c(PhaseBlock::kMaxTerms + 2, 0.0);
  std::vector<bool> have(c.size(), false);
  auto coeff = [&](unsigned k) {
    if (!have[k]) {
      BigFloat s(80, inverse_power_sum(comb, n0, k));
      BigFloat sc(80, comb.scale);
      mpfr_mul(s.get(), s.get(), sc.get(), MPFR_RNDN);
      mpfr_div(s.get(), s.get(), two_pi(96).get(), MPFR_RNDN);
      mpfr_div_ui(s.get(), s.get(), k, MPFR_RNDN);
      c[k] = (k % 2 == 0 ? -1.0 : 1.0) * s.to_double();
      have[k] = true;
    }
    return c[k];
  };

  std::uint64_t B = cap;
  int K = 0;
  double crude_tail = 0;
  while (B >= 2) {
    const double rho = static_cast<double>(B) / n0d;
    // smallest K with crude tail sum_{k>K} |c_k| B^k below target
    K = 0;
    for (int k = 2; k <= PhaseBlock::kMaxTerms + 1; ++k) {
      const double t = sc_over_2pi * W / (k + 1) * std::pow(rho, k + 1) / (1 - rho);
      if (t <= kTailTarget) {
        K = k;
        crude_tail = t;
        break;
      }
    }
    if (K == 0) {
      B /= 2;
      continue;
    }
    double mag = 0;
    const double Bd = static_cast<double>(B);
    for (int k = 2; k <= K; ++k) mag += std::fabs(coeff(static_cast<unsigned>(k))) * std::pow(Bd, k);
    if (mag <= PhaseBlock::kMaxTail) break;
    // shrink by the dominant quadratic term, at least halving
    const double c2 = std::fabs(coeff(2));
    std::uint64_t next = B / 2;
    if (c2 > 0) next = std::min<std::uint64_t>(next, static_cast<std::uint64_t>(std::sqrt(PhaseBlock::kMaxTail / (2 * c2))));
    B = next;
  }
  if (B < 2) return b;

  // slope = frac(c_1) at full width
  {
    mpq_class s1 = inverse_power_sum(comb, n0, 1);
    const double approx = std::fabs(s1.get_d()) * sc_over_2pi;
    const mpfr_prec_t bits = static_cast<mpfr_prec_t>(std::max(0.0, std::log2(approx + 1.0)) + 160);
    BigFloat v(bits, s1);
    BigFloat sc(bits, comb.scale);
    mpfr_mul(v.get(), v.get(), sc.get(), MPFR_RNDN);
    mpfr_div(v.get(), v.get(), two_pi(bits + 16).get(), MPFR_RNDN);
    b.slope = turns_from_bigfloat(v);
  }
  b.length = B;
  b.terms = K - 1;
  for (int k = 2; k <= K; ++k) b.curvature[static_cast<std::size_t>(k - 2)] = coeff(static_cast<unsigned>(k));
  // Horner rounding on a tail bounded by kMaxTail, plus slope error times B.
  b.error_bound = crude_tail + (K + 2) * PhaseBlock::kMaxTail * 0x1p-52 + static_cast<double>(B) * 0x1p-126;
  return b;
}

std::vector<Turns> phases(const LogCombination& comb, std::uint64_t first, std::uint64_t last) {
  std::vector<Turns> out;
  if (last < first) return out;
  out.reserve(last - first + 1);
  for_each_phase(comb, first, last, [&](std::uint64_t, Turns t) { out.push_back(t); });
  return out;
}

}  // namespace mrtlab
