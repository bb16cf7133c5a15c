#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <string>

namespace mrtlab {

using u128 = unsigned __int128;

// A point of the circle R/Z stored as a 128-bit binary fraction of a full turn.
// Addition and integer multiples are exact modulo 1 (two's-complement
// wraparound), which keeps identities such as Z_0 Z_2 = Z_1^2 exact.
class Turns {
 public:
  constexpr Turns() = default;
  constexpr explicit Turns(u128 raw) : raw_(raw) {}

  static Turns from_double(double x) {
    const double frac = x - std::floor(x);  // exact for |x| < 2^52
    if (!(frac < 1.0)) return Turns();       // x = -tiny rounds up to 1
    return Turns(static_cast<u128>(static_cast<std::uint64_t>(frac * 0x1p64)) << 64);
  }
  static Turns from_long_double(long double x) {
    long double frac = x - std::floor(x);
    if (!(frac < 1.0L)) return Turns();
    long double hi = std::floor(frac * 0x1p64L);
    long double lo = (frac * 0x1p64L - hi) * 0x1p64L;
    return Turns((static_cast<u128>(static_cast<std::uint64_t>(hi)) << 64) | static_cast<std::uint64_t>(lo));
  }

  constexpr u128 raw() const { return raw_; }
  std::uint64_t hi() const { return static_cast<std::uint64_t>(raw_ >> 64); }
  std::uint64_t lo() const { return static_cast<std::uint64_t>(raw_); }

  // Value in [0, 1).
  double fraction() const { return static_cast<double>(hi()) * 0x1p-64 + static_cast<double>(lo()) * 0x1p-128; }
  long double fraction_ld() const {
    return static_cast<long double>(hi()) * 0x1p-64L + static_cast<long double>(lo()) * 0x1p-128L;
  }
  // Representative in [-1/2, 1/2).
  double centered() const {
    return static_cast<double>(static_cast<std::int64_t>(hi())) * 0x1p-64 + static_cast<double>(lo()) * 0x1p-128;
  }
  long double centered_ld() const {
    return static_cast<long double>(static_cast<std::int64_t>(hi())) * 0x1p-64L +
           static_cast<long double>(lo()) * 0x1p-128L;
  }
  double radians() const { return 2.0 * std::numbers::pi * fraction(); }

  // e^{2 pi i x}: table of e(k/256) times a short Taylor series on the
  // remainder |r| <= 1/512; absolute error about 2e-16.
  std::complex<double> unit() const;

  // |e^{2 pi i x} - e^{2 pi i y}| = 2 |sin(pi (x - y))|
  friend double chord(Turns x, Turns y) {
    long double d = (x - y).centered_ld();
    return static_cast<double>(2.0L * std::fabs(std::sin(std::numbers::pi_v<long double> * d)));
  }

  std::string hex() const;
  static Turns from_hex(const std::string& s);

  constexpr Turns& operator+=(Turns o) { raw_ += o.raw_; return *this; }
  constexpr Turns& operator-=(Turns o) { raw_ -= o.raw_; return *this; }
  friend constexpr Turns operator+(Turns a, Turns b) { return Turns(a.raw_ + b.raw_); }
  friend constexpr Turns operator-(Turns a, Turns b) { return Turns(a.raw_ - b.raw_); }
  friend constexpr Turns operator-(Turns a) { return Turns(-a.raw_); }
  // Integer multiples; k is taken modulo 2^128.
  template <std::integral I>
  friend constexpr Turns operator*(I k, Turns a) {
    return Turns(static_cast<u128>(static_cast<__int128>(k)) * a.raw_);
  }
  friend constexpr bool operator==(Turns, Turns) = default;

 private:
  u128 raw_ = 0;
};

namespace detail {
struct UnitTable {
  std::complex<double> e[256];
  UnitTable() {
    for (int k = 0; k < 256; ++k) {
      const long double a = 2.0L * std::numbers::pi_v<long double> * k / 256.0L;
      e[k] = {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
    }
  }
};
inline const UnitTable kUnitTable;
}  // namespace detail

inline std::complex<double> Turns::unit() const {
  const u128 k = (raw_ + (u128(1) << 119)) >> 120;  // nearest multiple of 1/256
  const auto rem = static_cast<__int128>(raw_ - (k << 120));
  const double t = 2.0 * std::numbers::pi * (static_cast<double>(static_cast<std::int64_t>(rem >> 64)) * 0x1p-64 +
                                             static_cast<double>(static_cast<std::uint64_t>(rem)) * 0x1p-128);
  const double t2 = t * t;
  const double c = 1.0 + t2 * (-0.5 + t2 * (1.0 / 24 + t2 * (-1.0 / 720 + t2 * (1.0 / 40320))));
  const double s = t * (1.0 + t2 * (-1.0 / 6 + t2 * (1.0 / 120 + t2 * (-1.0 / 5040 + t2 * (1.0 / 362880)))));
  const std::complex<double> b = detail::kUnitTable.e[static_cast<unsigned>(k & 0xff)];
  return {b.real() * c - b.imag() * s, b.real() * s + b.imag() * c};
}

inline std::string Turns::hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(32, '0');
  u128 v = raw_;
  for (int i = 31; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[static_cast<unsigned>(v & 0xf)];
    v >>= 4;
  }
  return out;
}

inline Turns Turns::from_hex(const std::string& s) {
  u128 v = 0;
  for (char c : s) {
    unsigned d;
    if (c >= '0' && c <= '9') d = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') d = static_cast<unsigned>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') d = static_cast<unsigned>(c - 'A' + 10);
    else throw std::invalid_argument("Turns::from_hex: bad digit");
    v = (v << 4) | d;
  }
  return Turns(v);
}

}  // namespace mrtlab
