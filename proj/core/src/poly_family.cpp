#include "mrtlab/poly_family.hpp"

#include <mpfr.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "mrtlab/error.hpp"

namespace mrtlab {

unsigned long FactorMultiset::total() const {
  return std::accumulate(exponents.begin(), exponents.end(), 0UL);
}

std::pair<FactorMultiset, FactorMultiset> pi_pair(int d, int max_d) {
  if (d < 0) throw ArgumentError("pi_pair: d must be nonnegative");
  if (d > max_d) {
    std::ostringstream os;
    os << "pi_pair: d = " << d << " exceeds configured maximum " << max_d;
    throw ResourceError(os.str());
  }
  FactorMultiset pi{0, {1}}, tilde{0, {0}};
  for (int k = 0; k < d; ++k) {
    FactorMultiset np{k + 1, std::vector<unsigned long>(static_cast<std::size_t>(k) + 2, 0)};
    FactorMultiset nt = np;
    for (std::size_t j = 0; j <= static_cast<std::size_t>(k); ++j) {
      np.exponents[j + 1] += pi.exponents[j];
      np.exponents[j] += tilde.exponents[j];
      nt.exponents[j + 1] += tilde.exponents[j];
      nt.exponents[j] += pi.exponents[j];
    }
    pi = std::move(np);
    tilde = std::move(nt);
  }
  return {pi, tilde};
}

std::vector<long> phi_exponents(int d) {
  auto [pi, tilde] = pi_pair(d);
  std::vector<long> e(pi.exponents.size());
  for (std::size_t j = 0; j < e.size(); ++j)
    e[j] = static_cast<long>(pi.exponents[j]) - static_cast<long>(tilde.exponents[j]);
  return e;
}

std::complex<double> phi_value(int d, std::span<const std::complex<double>> z) {
  if (z.size() < static_cast<std::size_t>(d) + 1) throw ArgumentError("phi_value: need d+1 inputs");
  auto e = phi_exponents(d);
  std::complex<double> num = 1, den = 1;
  for (std::size_t j = 0; j < e.size(); ++j) {
    for (long k = 0; k < e[j]; ++k) num *= z[j];
    for (long k = 0; k < -e[j]; ++k) den *= z[j];
  }
  return num / den;
}

namespace {

IntPoly expand(const std::vector<std::pair<long, unsigned long>>& factors) {
  IntPoly p = IntPoly::constant(1);
  for (auto [j, m] : factors) p = p * IntPoly::linear_power(j, m);
  return p;
}

std::vector<std::pair<long, unsigned long>> factored(const FactorMultiset& f) {
  std::vector<std::pair<long, unsigned long>> out;
  for (std::size_t j = 0; j < f.exponents.size(); ++j)
    if (f.exponents[j]) out.emplace_back(static_cast<long>(j), f.exponents[j]);
  return out;
}

void check_degrees(const PolyTriple& t) {
  if (t.d < 1) return;
  const int want = 1 << (t.d - 1);
  if (t.P.degree() != want || t.Q.degree() != want || t.R.degree() != want - t.d) {
    std::ostringstream os;
    os << "pq_polynomials: degree law violated at d = " << t.d << " (deg P = " << t.P.degree()
       << ", deg Q = " << t.Q.degree() << ", deg R = " << t.R.degree() << ")";
    throw InvariantError(os.str());
  }
}

}  // namespace

PolyTriple pq_polynomials(int d, int max_d) {
  auto [pi, tilde] = pi_pair(d, max_d);
  PolyTriple t;
  t.d = d;
  t.P_factors = factored(pi);
  t.Q_factors = factored(tilde);
  t.P = expand(t.P_factors);
  t.Q = expand(t.Q_factors);
  t.R = t.Q - t.P;
  check_degrees(t);
  return t;
}

PolyTriple pq_via_recurrence(int d) {
  if (d < 0) throw ArgumentError("pq_via_recurrence: d must be nonnegative");
  IntPoly P = IntPoly::linear_power(0, 1), Q = IntPoly::constant(1);
  for (int k = 0; k < d; ++k) {
    IntPoly nP = P.shifted(1) * Q;
    IntPoly nQ = Q.shifted(1) * P;
    P = std::move(nP);
    Q = std::move(nQ);
  }
  PolyTriple t;
  t.d = d;
  t.P = P;
  t.Q = Q;
  t.R = Q - P;
  check_degrees(t);
  return t;
}

RationalFunction fd_derivative(const PolyTriple& pt) {
  if (pt.d == 0) return {IntPoly::constant(1), IntPoly::linear_power(0, 1)};
  return {pt.P.derivative() * pt.R - pt.P * pt.R.derivative(), pt.P * pt.Q};
}

RationalFunction fd_derivative(const PhaseFunction& pf) { return fd_derivative(pf.triple); }

AsymptoticConstants asymptotic_constants(const PolyTriple& pt) {
  if (pt.d < 1) throw ArgumentError("asymptotic_constants: d must be at least 1");
  if (pt.R.is_zero()) throw InvariantError("asymptotic_constants: R_d vanishes identically");
  RationalFunction der = fd_derivative(pt);
  return {mpq_class(-pt.R.leading()), mpq_class(der.num.leading(), der.den.leading())};
}

mpq_class real_root_upper_bound(const IntPoly& p, unsigned long denominator) {
  if (p.degree() <= 0) return 0;
  auto variations = [](const IntPoly& q) {
    std::vector<mpq_class> c(q.coeffs().begin(), q.coeffs().end());
    return sign_variations(c);
  };
  if (variations(p) == 0) return 0;
  // Cauchy bound 1 + max |a_i / a_n| caps every real root.
  mpq_class m = 0;
  for (int i = 0; i < p.degree(); ++i) m = std::max(m, mpq_class(abs(p.coeff(i)), abs(p.leading())));
  mpz_class hi = m.get_num() / m.get_den() + 2, lo = 0;  // V(hi) = 0, V(lo) > 0
  while (hi - lo > 1) {
    mpz_class mid = (lo + hi) / 2;
    if (variations(p.shifted(mid)) == 0) hi = mid;
    else lo = mid;
  }
  if (denominator <= 1) return mpq_class(hi);
  // Refine on the grid 1/q using q^deg p(y/q), whose roots are q times those of p.
  const mpz_class q = denominator;
  std::vector<mpz_class> scaled(p.coeffs().size());
  mpz_class power = 1;
  for (int i = p.degree(); i >= 0; --i) {
    scaled[static_cast<std::size_t>(i)] = p.coeff(i) * power;
    power *= q;
  }
  IntPoly ps(std::move(scaled));
  mpz_class a = lo * q, b = hi * q;
  while (b - a > 1) {
    mpz_class mid = (a + b) / 2;
    if (variations(ps.shifted(mid)) == 0) b = mid;
    else a = mid;
  }
  return mpq_class(b, q);
}

double monotone_threshold(const RationalFunction& der) {
  IntPoly second = der.num.derivative() * der.den - der.num * der.den.derivative();
  return real_root_upper_bound(second).get_d();
}

double monotone_threshold(const PhaseFunction& pf) { return monotone_threshold(pf.derivative); }

PhaseFunction make_phase_function(int d) {
  PhaseFunction pf;
  pf.d = d;
  pf.triple = pq_polynomials(d);
  pf.derivative = fd_derivative(pf.triple);
  if (d >= 1) {
    auto c = asymptotic_constants(pf.triple);
    pf.K = c.K;
    pf.L = c.L;
  } else {
    pf.L = 1;
  }
  pf.H = monotone_threshold(pf.derivative);
  return pf;
}

LogCombination PhaseFunction::log_combination(const mpz_class& scale) const {
  LogCombination c;
  c.scale = scale;
  auto e = phi_exponents(d);
  for (std::size_t j = 0; j < e.size(); ++j)
    if (e[j]) c.factors.emplace_back(static_cast<long>(j), e[j]);
  return c;
}

BigFloat fd_eval(const PhaseFunction& pf, const mpq_class& x, mpfr_prec_t precision) {
  if (x <= 0) {
    std::ostringstream os;
    os << "fd_eval: x = " << x.get_d() << " lies in the singular region of f_" << pf.d;
    throw DomainError(os.str());
  }
  const mpfr_prec_t bits = precision + 16;
  if (pf.d == 0) {
    BigFloat v(bits, x);
    mpfr_log(v.get(), v.get(), MPFR_RNDN);
    return v;
  }
  mpq_class ratio = pf.triple.R(x) / pf.triple.P(x);
  BigFloat v(bits, ratio);
  mpfr_log1p(v.get(), v.get(), MPFR_RNDN);
  mpfr_neg(v.get(), v.get(), MPFR_RNDN);
  return v;
}

BigFloat fd_eval(const PhaseFunction& pf, double x, mpfr_prec_t precision) {
  mpq_class q(x);  // exact
  return fd_eval(pf, q, precision);
}

}  // namespace mrtlab
