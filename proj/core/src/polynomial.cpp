#include "mrtlab/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace mrtlab {

IntPoly::IntPoly(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

IntPoly IntPoly::constant(const mpz_class& c) { return IntPoly({c}); }

IntPoly IntPoly::linear_power(long a, unsigned long e) {
  std::vector<mpz_class> c(e + 1);
  mpz_class apow = 1;
  mpz_class binom;
  // coefficient of x^k is C(e,k) a^(e-k); fill from k = e downwards.
  for (unsigned long j = 0; j <= e; ++j) {
    mpz_bin_uiui(binom.get_mpz_t(), e, j);
    c[e - j] = binom * apow;
    apow *= a;
  }
  return IntPoly(std::move(c));
}

const mpz_class& IntPoly::coeff(int i) const {
  static const mpz_class zero = 0;
  if (i < 0 || i > degree()) return zero;
  return coeffs_[static_cast<std::size_t>(i)];
}

void IntPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

mpz_class IntPoly::operator()(const mpz_class& x) const {
  mpz_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

mpq_class IntPoly::operator()(const mpq_class& x) const {
  // Horner on numerator/denominator to avoid repeated gcds.
  const mpz_class& num = x.get_num();
  const mpz_class& den = x.get_den();
  mpz_class acc = 0;
  mpz_class denpow = 1;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * num + *it * denpow;
    denpow *= den;
  }
  // acc = den^deg * p(x); denpow = den^(deg+1)
  mpq_class out(acc * den, denpow);
  out.canonicalize();
  return out;
}

IntPoly IntPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<mpz_class> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<unsigned long>(i);
  return IntPoly(std::move(d));
}

IntPoly IntPoly::shifted(const mpz_class& c) const {
  std::vector<mpz_class> a = coeffs_;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) a[j - 1] += c * a[j];
  return IntPoly(std::move(a));
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<mpz_class> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
  return IntPoly(std::move(c));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) {
  std::vector<mpz_class> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
  return IntPoly(std::move(c));
}

namespace {

using Coeffs = std::vector<mpz_class>;

Coeffs schoolbook(const Coeffs& a, const Coeffs& b) {
  Coeffs c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) mpz_addmul(c[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  return c;
}

// Nonnegative coefficients packed as sum c_i 2^{i w}, built by halves.
void pack(const Coeffs& a, std::size_t lo, std::size_t hi, mp_bitcnt_t w, mpz_class& out) {
  if (hi - lo == 1) {
    out = a[lo];
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  mpz_class high;
  pack(a, lo, mid, w, out);
  pack(a, mid, hi, w, high);
  mpz_mul_2exp(high.get_mpz_t(), high.get_mpz_t(), (mid - lo) * w);
  out += high;
}

void unpack(const mpz_class& x, std::size_t lo, std::size_t hi, mp_bitcnt_t w, Coeffs& out) {
  if (hi - lo == 1) {
    out[lo] = x;
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  mpz_class low, high;
  mpz_tdiv_r_2exp(low.get_mpz_t(), x.get_mpz_t(), (mid - lo) * w);
  mpz_tdiv_q_2exp(high.get_mpz_t(), x.get_mpz_t(), (mid - lo) * w);
  unpack(low, lo, mid, w, out);
  unpack(high, mid, hi, w, out);
}

std::size_t max_bits(const Coeffs& a) {
  std::size_t b = 0;
  for (const auto& c : a) b = std::max(b, mpz_sizeinbase(c.get_mpz_t(), 2));
  return b;
}

// Kronecker substitution for nonnegative coefficient vectors.
Coeffs kronecker(const Coeffs& a, const Coeffs& b) {
  std::size_t guard = 1;
  while ((std::size_t(1) << guard) < std::min(a.size(), b.size())) ++guard;
  const mp_bitcnt_t w = max_bits(a) + max_bits(b) + guard + 1;
  mpz_class x, y;
  pack(a, 0, a.size(), w, x);
  pack(b, 0, b.size(), w, y);
  x *= y;
  Coeffs c(a.size() + b.size() - 1);
  unpack(x, 0, c.size(), w, c);
  return c;
}

bool any_nonzero(const Coeffs& v) {
  return std::any_of(v.begin(), v.end(), [](const mpz_class& c) { return c != 0; });
}

}  // namespace

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (std::min(a.coeffs_.size(), b.coeffs_.size()) < 48) return IntPoly(schoolbook(a.coeffs_, b.coeffs_));
  // a = a+ - a-, b = b+ - b-, each part with nonnegative coefficients
  auto split = [](const Coeffs& v, Coeffs& pos, Coeffs& neg) {
    pos.assign(v.size(), 0);
    neg.assign(v.size(), 0);
    for (std::size_t i = 0; i < v.size(); ++i) (sgn(v[i]) >= 0 ? pos[i] : neg[i]) = abs(v[i]);
  };
  Coeffs ap, an, bp, bn;
  split(a.coeffs_, ap, an);
  split(b.coeffs_, bp, bn);
  Coeffs c(a.coeffs_.size() + b.coeffs_.size() - 1);
  auto accumulate = [&](const Coeffs& x, const Coeffs& y, bool add) {
    if (!any_nonzero(x) || !any_nonzero(y)) return;
    Coeffs part = kronecker(x, y);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (add) c[i] += part[i];
      else c[i] -= part[i];
    }
  };
  accumulate(ap, bp, true);
  accumulate(an, bn, true);
  accumulate(ap, bn, false);
  accumulate(an, bp, false);
  return IntPoly(std::move(c));
}

IntPoly operator*(const mpz_class& k, const IntPoly& a) {
  std::vector<mpz_class> c = a.coeffs_;
  for (auto& x : c) x *= k;
  return IntPoly(std::move(c));
}

std::string IntPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const mpz_class& c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    mpz_class mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0) {
      os << mag.get_str();
    } else {
      if (mag != 1) os << mag.get_str() << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

int sign_variations(const std::vector<mpq_class>& coeffs) {
  int changes = 0;
  int last = 0;
  for (const auto& c : coeffs) {
    int s = sgn(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace mrtlab
