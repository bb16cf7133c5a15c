#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

#include "mrtlab/turns.hpp"

namespace mrtlab {

// Owning wrapper around an mpfr_t with an explicit precision in bits.
// Arithmetic is exposed as free functions that round to the destination's
// precision, mirroring the MPFR calling convention.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits);
  BigFloat(mpfr_prec_t bits, long value);
  BigFloat(mpfr_prec_t bits, const mpz_class& value);
  BigFloat(mpfr_prec_t bits, const mpq_class& value);
  BigFloat(mpfr_prec_t bits, double value);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(value_, MPFR_RNDN); }
  // Base-2 exponent e with 2^(e-1) <= |x| < 2^e; very negative for zero.
  long exponent() const;
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  std::string to_string(int digits = 40) const;

 private:
  mpfr_t value_;
};

// 2*pi at the given precision (cached per precision per thread).
const BigFloat& two_pi(mpfr_prec_t bits);

// x mod 1 as a 128-bit turn; x is interpreted in units of full turns.
Turns turns_from_bigfloat(const BigFloat& x);

// x (radians) reduced mod 2*pi, expressed as turns. Needs x.precision() to
// exceed log2|x| + 128 for a full-width result.
Turns radians_to_turns(const BigFloat& x);

}  // namespace mrtlab
