#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace mrtlab {

// Dense polynomial with exact integer coefficients, lowest degree first.
// The zero polynomial has no coefficients and degree -1.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<mpz_class> coeffs);
  static IntPoly constant(const mpz_class& c);
  // (x + a)^e expanded by the binomial theorem.
  static IntPoly linear_power(long a, unsigned long e);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<mpz_class>& coeffs() const { return coeffs_; }
  const mpz_class& coeff(int i) const;
  mpz_class leading() const { return is_zero() ? mpz_class(0) : coeffs_.back(); }

  mpz_class operator()(const mpz_class& x) const;
  mpq_class operator()(const mpq_class& x) const;

  IntPoly derivative() const;
  // p(x + c) by repeated synthetic division.
  IntPoly shifted(const mpz_class& c) const;

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const mpz_class& k, const IntPoly& a);
  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.coeffs_ == b.coeffs_; }

  // Human-readable form, highest degree first: "n^2 + 2*n + 1".
  std::string to_string(const std::string& var = "n") const;

 private:
  void trim();
  std::vector<mpz_class> coeffs_;
};

// Number of sign changes in the coefficient sequence, zeros skipped.
int sign_variations(const std::vector<mpq_class>& coeffs);

}  // namespace mrtlab
