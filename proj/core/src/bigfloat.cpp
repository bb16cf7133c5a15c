#include "mrtlab/bigfloat.hpp"

#include <map>
#include <memory>

namespace mrtlab {

BigFloat::BigFloat(mpfr_prec_t bits) { mpfr_init2(value_, bits); mpfr_set_zero(value_, 1); }

BigFloat::BigFloat(mpfr_prec_t bits, long value) {
  mpfr_init2(value_, bits);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

BigFloat::BigFloat(mpfr_prec_t bits, const mpz_class& value) {
  mpfr_init2(value_, bits);
  mpfr_set_z(value_, value.get_mpz_t(), MPFR_RNDN);
}

BigFloat::BigFloat(mpfr_prec_t bits, const mpq_class& value) {
  mpfr_init2(value_, bits);
  mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
}

BigFloat::BigFloat(mpfr_prec_t bits, double value) {
  mpfr_init2(value_, bits);
  mpfr_set_d(value_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, other.precision());
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

long BigFloat::exponent() const {
  if (mpfr_zero_p(value_)) return -(1L << 30);
  return mpfr_get_exp(value_);
}

std::string BigFloat::to_string(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, value_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

const BigFloat& two_pi(mpfr_prec_t bits) {
  thread_local std::map<mpfr_prec_t, std::unique_ptr<BigFloat>> cache;
  auto& slot = cache[bits];
  if (!slot) {
    slot = std::make_unique<BigFloat>(bits);
    mpfr_const_pi(slot->get(), MPFR_RNDN);
    mpfr_mul_2ui(slot->get(), slot->get(), 1, MPFR_RNDN);
  }
  return *slot;
}

Turns turns_from_bigfloat(const BigFloat& x) {
  BigFloat f(x.precision() + 2);
  mpfr_floor(f.get(), x.get());
  mpfr_sub(f.get(), x.get(), f.get(), MPFR_RNDN);  // exact: in [0, 1)
  mpfr_mul_2ui(f.get(), f.get(), 128, MPFR_RNDN);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), f.get(), MPFR_RNDN);
  // Rounding can land on 2^128, which wraps to zero as it should.
  mpz_class lo = z & mpz_class("0xffffffffffffffff");
  mpz_class hi = (z >> 64) & mpz_class("0xffffffffffffffff");
  u128 raw = (static_cast<u128>(hi.get_ui()) << 64) | static_cast<u128>(lo.get_ui());
  return Turns(raw);
}

Turns radians_to_turns(const BigFloat& x) {
  BigFloat t(x.precision());
  mpfr_div(t.get(), x.get(), two_pi(x.precision() + 16).get(), MPFR_RNDN);
  return turns_from_bigfloat(t);
}

}  // namespace mrtlab
