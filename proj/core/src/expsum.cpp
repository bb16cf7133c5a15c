#include "mrtlab/expsum.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mrtlab/error.hpp"
#include "mrtlab/phase_eval.hpp"

namespace mrtlab {
namespace {

constexpr int kReduceGuardBits = 48;

struct ChunkOut {
  ComplexSum sum;
  double max_partial = 0;
  double max_phase_error = 0;
};

}  // namespace

PhaseReduction phase_reduce(std::uint64_t s, long ell, const PhaseFunction& pf, std::uint64_t n,
                            mpfr_prec_t precision, bool auto_escalate) {
  if (n == 0) throw DomainError("phase_reduce: n must be >= 1");
  PhaseReduction out;
  out.precision = precision;
  if (ell == 0) return out;
  const mpz_class scale = mpz_class(static_cast<unsigned long>(s)) * ell;
  // Integer bits of |l s f_d(n)| / 2pi plus the 32 fractional bits demanded.
  BigFloat f = fd_eval(pf, mpq_class(static_cast<unsigned long>(n)), 64);
  const double mag = std::fabs(scale.get_d() * f.to_double()) / (2 * std::numbers::pi);
  const long int_bits = mag < 1 ? 0 : static_cast<long>(std::ceil(std::log2(mag + 1)));
  const mpfr_prec_t needed = static_cast<mpfr_prec_t>(int_bits + 32 + kReduceGuardBits);
  if (precision < needed) {
    if (!auto_escalate) {
      std::ostringstream os;
      os << "phase_reduce: " << precision << " bits cannot resolve |l s f_" << pf.d << "(" << n
         << ")| mod 2pi to 2^-32; need " << needed;
      throw PrecisionError(os.str());
    }
    out.precision = needed;
  }
  BigFloat v = fd_eval(pf, mpq_class(static_cast<unsigned long>(n)), out.precision + 16);
  BigFloat sc(out.precision + 16, scale);
  mpfr_mul(v.get(), v.get(), sc.get(), MPFR_RNDN);
  out.turns = radians_to_turns(v);
  out.radians = out.turns.radians();
  return out;
}

ExpSumResult exp_sum(const ExpSumSpec& spec) {
  if (!spec.phase) throw ArgumentError("exp_sum: missing phase function");
  if (spec.a == 0 || spec.b < spec.a) throw ArgumentError("exp_sum: need 1 <= a <= b");
  ExpSumResult out;
  out.terms = spec.b - spec.a + 1;
  const double inv = 1.0 / static_cast<double>(out.terms);
  if (spec.ell == 0) {
    out.value = 1;
    out.raw = static_cast<double>(out.terms);
    out.max_partial = static_cast<double>(out.terms);
    return out;
  }
  const LogCombination comb = spec.phase->log_combination(mpz_class(static_cast<unsigned long>(spec.s)) * spec.ell);
  if (spec.precision < 64 && !spec.auto_escalate)
    throw PrecisionError("exp_sum: at least 64 bits are needed for phase anchors");

  auto body = [&](std::uint64_t first, std::uint64_t last, const std::complex<double>* offset) {
    ChunkOut c;
    for (std::uint64_t n = first; n <= last;) {
      PhaseBlock blk = plan_block(comb, n, last - n + 1);
      c.max_phase_error = std::max(c.max_phase_error, blk.error_bound);
      if (offset)
        blk.for_each([&](std::uint64_t, Turns t) {
          c.sum.add(t.unit());
          c.max_partial = std::max(c.max_partial, std::abs(*offset + c.sum.value()));
        });
      else {
        BatchedComplexSum local;
        blk.for_each([&](std::uint64_t, Turns t) { local.add(t.unit()); });
        c.sum.add(local.sum());
      }
      n += blk.length;
    }
    return c;
  };

  const ParallelOptions& par = spec.parallel;
  const std::uint64_t chunk = std::max<std::uint64_t>(1, par.chunk);
  ComplexSum total;
  double max_err = 0;
  double max_partial = 0;
  if (!spec.track_max_partial || par.threads <= 1) {
    std::vector<ChunkOut> parts;
    if (spec.track_max_partial) {
      // Sequential single pass; offsets follow the same chunk merge order as below.
      for (std::uint64_t a = spec.a; a <= spec.b; a += chunk) {
        const std::uint64_t b = std::min(spec.b, a + chunk - 1);
        const std::complex<double> off = total.value();
        ChunkOut c = body(a, b, &off);
        total.add(c.sum);
        max_err = std::max(max_err, c.max_phase_error);
        max_partial = std::max(max_partial, c.max_partial);
        if (b == spec.b) break;
      }
    } else {
      parts = chunked_map<ChunkOut>(spec.a, spec.b, par, [&](std::size_t, std::uint64_t a, std::uint64_t b) {
        return body(a, b, nullptr);
      });
      for (const auto& c : parts) {
        total.add(c.sum);
        max_err = std::max(max_err, c.max_phase_error);
      }
    }
  } else {
    auto parts = chunked_map<ChunkOut>(spec.a, spec.b, par, [&](std::size_t, std::uint64_t a, std::uint64_t b) {
      return body(a, b, nullptr);
    });
    std::vector<std::complex<double>> offsets(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
      offsets[i] = total.value();
      total.add(parts[i].sum);
      max_err = std::max(max_err, parts[i].max_phase_error);
    }
    auto again = chunked_map<ChunkOut>(spec.a, spec.b, par, [&](std::size_t idx, std::uint64_t a, std::uint64_t b) {
      return body(a, b, &offsets[idx]);
    });
    for (const auto& c : again) max_partial = std::max(max_partial, c.max_partial);
  }
  out.raw = total.value();
  out.value = out.raw * inv;
  out.max_partial = max_partial;
  // Per-term: chord error 2 pi * phase error, plus sin/cos and summation rounding.
  out.error_bound = 2 * std::numbers::pi * max_err + 8 * 0x1p-53 + 0x1p-50;
  return out;
}

KLCertificate kl_certificate(const PhaseFunction& pf, std::uint64_t s, long ell, std::uint64_t a, std::uint64_t b) {
  if (ell == 0) throw ArgumentError("kl_certificate: l must be nonzero");
  if (a == 0 || b < a) throw ArgumentError("kl_certificate: need 1 <= a <= b");
  KLCertificate c;
  c.a = a;
  c.b = b;
  c.monotone = static_cast<double>(a) >= pf.H;
  if (!c.monotone) {
    std::ostringstream os;
    os << "kl_certificate: a = " << a << " below the monotonicity threshold H_" << pf.d << " = " << pf.H;
    throw CertificateRefused(os.str());
  }
  // F'(x) = l s f'_d(x) / 2pi, evaluated from the exact rational f'_d.
  auto slope = [&](std::uint64_t x) {
    const mpz_class X = static_cast<unsigned long>(x);
    mpq_class r(pf.derivative.num(X), pf.derivative.den(X));
    r.canonicalize();
    BigFloat v(128, r);
    mpfr_mul_si(v.get(), v.get(), ell, MPFR_RNDN);
    mpfr_mul_ui(v.get(), v.get(), static_cast<unsigned long>(s), MPFR_RNDN);
    mpfr_div(v.get(), v.get(), two_pi(128).get(), MPFR_RNDN);
    return v.to_double();
  };
  const double fa = slope(a), fb = slope(b);
  if (fa == 0 || fb == 0 || (fa > 0) != (fb > 0))
    throw CertificateRefused("kl_certificate: f' changes sign on the range");
  if (std::max(std::fabs(fa), std::fabs(fb)) >= 0.5) {
    std::ostringstream os;
    os << "kl_certificate: |l s f'/2pi| reaches " << std::max(std::fabs(fa), std::fabs(fb))
       << " >= 1/2 on [" << a << ", " << b << "]";
    throw CertificateRefused(os.str());
  }
  c.lambda1 = std::min(std::fabs(fa), std::fabs(fb));
  c.bound = 2.0 / (std::numbers::pi * c.lambda1);
  return c;
}

KLSplit kl_split(const PhaseFunction& pf, std::uint64_t s, long ell, std::uint64_t N, double alpha) {
  KLSplit out;
  const auto start = static_cast<std::uint64_t>(std::ceil(std::pow(static_cast<double>(s), alpha)));
  if (start > N) throw ArgumentError("kl_split: s^alpha exceeds N");
  out.head = start - 1;
  out.tail = kl_certificate(pf, s, ell, std::max<std::uint64_t>(start, 1), N);
  out.bound = (static_cast<double>(out.head) + out.tail.bound) / static_cast<double>(N);
  return out;
}

double window_midpoint(int d) {
  if (d < 0) throw ArgumentError("window_midpoint: d must be nonnegative");
  if (d == 0) return 1.5;
  return (1.0 / (d + 1) + 1.0 / d) / 2;
}

double default_alpha(int d, double beta) { return (1.0 / (d + 1) + beta) / 2; }

}  // namespace mrtlab
