#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <memory>
#include <numbers>

#include "doctest.h"
#include "mrtlab/archimedean.hpp"
#include "mrtlab/error.hpp"
#include "mrtlab/phase_eval.hpp"

using namespace mrtlab;

namespace {

std::complex<double> closed_form(long k, std::uint64_t N) { return KappaLimit::from_window(N).coefficient(k); }

MrtParams two_stage(std::uint64_t t1, std::uint64_t s, std::uint64_t t) {
  MrtParams p;
  p.stages = {{t1, 0}, {t, s}};
  return p;
}

}  // namespace

TEST_CASE("kappa limit coefficients") {
  KappaLimit k{std::complex<double>(0, 1)};
  CHECK(k.coefficient(0) == std::complex<double>(1, 0));
  CHECK(std::abs(k.coefficient(2) - std::complex<double>(-1, 0) / std::complex<double>(1, 2)) < 1e-15);
  const double c = std::log(12345.0);
  CHECK(std::abs(KappaLimit::from_window(12345).c - std::complex<double>(std::cos(c), std::sin(c))) < 1e-15);
}

TEST_CASE("empirical fourier coefficients") {
  CHECK(fourier_coeff_empirical(0, 1000) == std::complex<double>(1, 0));
  const std::uint64_t N = 1'000'000;
  const auto e1 = fourier_coeff_empirical(1, N);
  CHECK(std::abs(e1 - closed_form(1, N)) <= 1e-3);
  CHECK(std::abs(fourier_coeff_empirical(-1, N) - std::conj(e1)) < 1e-12);
  CHECK(std::abs(fourier_coeff_empirical(1, 5000, 2) - fourier_coeff_empirical(2, 5000)) < 1e-15);
  CHECK_THROWS_AS(fourier_coeff_empirical(1, 0), ArgumentError);
}

TEST_CASE("fourier error decays like (1 + |k|) / N") {
  double C = 0;
  for (std::uint64_t N : {1000, 10000, 100000})
    for (long k = -5; k <= 5; ++k) {
      if (k == 0) continue;
      const double err = std::abs(fourier_coeff_empirical(k, N) - closed_form(k, N));
      C = std::max(C, err * static_cast<double>(N) / (1.0 + std::abs(static_cast<double>(k))));
    }
  MESSAGE("fitted C = " << C);
  CHECK(C < 1.0);
}

TEST_CASE("density g") {
  constexpr double tau = 2 * std::numbers::pi;
  CHECK(density_g(0) == doctest::Approx(tau / (std::exp(tau) - 1)).epsilon(1e-15));
  CHECK(density_g(0) == doctest::Approx(0.0117554).epsilon(1e-5));
  CHECK(density_g(1.25) == density_g(0.25));
  CHECK(density_g(-0.75) == doctest::Approx(density_g(0.25)).epsilon(1e-15));
  using boost::math::quadrature::gauss_kronrod;
  double err = 0;
  const double mass = gauss_kronrod<double, 61>::integrate(density_g, 0.0, 1.0, 15, 1e-14, &err);
  CHECK(std::fabs(mass - 1) < 1e-9);
  for (long k = -20; k <= 20; ++k) {
    auto re = [k](double x) { return density_g(x) * std::cos(tau * k * x); };
    auto im = [k](double x) { return density_g(x) * std::sin(tau * k * x); };
    const std::complex<double> v(gauss_kronrod<double, 61>::integrate(re, 0.0, 1.0, 15, 1e-14),
                                 gauss_kronrod<double, 61>::integrate(im, 0.0, 1.0, 15, 1e-14));
    CHECK(std::abs(v - 1.0 / std::complex<double>(1, static_cast<double>(k))) < 1e-9);
  }
}

TEST_CASE("rotation family") {
  auto rep = rotation_family_check({1'000'000}, 5);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].max_deviation <= 1e-2);
  CHECK(rep.rows[0].deviations.size() == 11);
  CHECK(rep.rows[0].deviations[5] == 0.0);
  // N and N e^{2 pi} give nearly the same rotation
  const auto N2 = static_cast<std::uint64_t>(std::llround(1000 * std::exp(2 * std::numbers::pi)));
  auto pair = rotation_family_check({1000, N2}, 1);
  CHECK(std::abs(pair.rows[0].c - pair.rows[1].c) <= 1e-2);
  CHECK_THROWS_AS(rotation_family_check({10}, -1), ArgumentError);
}

TEST_CASE("sarnak v on the toy stage") {
  auto sv = SarnakV::from_params(two_stage(2, 9, 81));
  CHECK(sv.r[2] == 27);
  for (std::uint64_t n = 3; n <= 27; ++n) CHECK(sarnak_v(sv, n) == Turns());
  CHECK(sarnak_v(sv, 28) == phase_at(LogCombination::single_log(9), 28));
  CHECK_THROWS_AS(sarnak_v(sv, 2), ArgumentError);
  CHECK_THROWS_AS(sarnak_v(sv, 82), ArgumentError);
  SarnakSequence seq(sv);
  CHECK(seq.phase(1) == Turns());
  CHECK(seq.phase(2) == Turns());
  std::vector<Turns> ph(81);
  seq.phases(1, ph);
  for (std::uint64_t n = 1; n <= 81; ++n) CHECK(std::fabs((ph[n - 1] - seq.phase(n)).centered()) < 0x1p-40);
  CHECK_THROWS_AS(SarnakV::from_params(two_stage(2, 9, 80)), InvariantError);
}

TEST_CASE("sarnak v varies slowly inside a stage") {
  const std::uint64_t s = 1'000'000;
  auto sv = SarnakV::from_params(two_stage(1000, s, s * s));
  const std::uint64_t r = sv.r[2];
  CHECK(r == 1'000'000'000);
  SarnakSequence seq(sv);
  const std::uint64_t lo = r - 100'000, hi = r + 100'000;
  std::vector<Turns> ph(hi - lo + 2);
  seq.phases(lo, ph);
  std::vector<double> jump(ph.size() - 1), prefix(ph.size(), 0.0);
  for (std::size_t i = 0; i + 1 < ph.size(); ++i) {
    jump[i] = chord(ph[i + 1], ph[i]);
    prefix[i + 1] = prefix[i] + jump[i];
    REQUIRE(jump[i] <= 2.0);
    if (lo + i > r) REQUIRE(jump[i] <= 1.0 / std::sqrt(static_cast<double>(s)));
  }
  // windows of length 400 never average more than 0.01
  const std::size_t L = 400;
  double worst = 0;
  for (std::size_t i = 0; i + L < prefix.size(); ++i) worst = std::max(worst, (prefix[i + L] - prefix[i]) / L);
  CHECK(worst < 0.01);
}

TEST_CASE("correlations") {
  auto table = std::make_shared<const PrimeTable>(PrimeTable::sieve(1000));
  auto fn = std::make_shared<const MrtFunction>(extend_stage(MrtFunction::initial(2, table), 81, 9));
  auto sv = SarnakV::from_params(fn->params());
  MrtSequence u(fn);
  auto c = correlation_uv(u, sv, 1);
  CHECK(c.explicit_terms == 81);
  CHECK(c.error_radius == 0.0);
  CHECK(c.value.real() == doctest::Approx(0.647183).epsilon(1e-5));
  CHECK(c.value.imag() == doctest::Approx(0.024839).epsilon(1e-4));
  const double D = mean_surrogate_deviation(*fn, 1, 81);
  CHECK(c.value.real() >= 1 - 27.0 / 81 - D);
  CHECK_THROWS_AS(correlation_uv(u, sv, 1, 80), ResourceError);
  CHECK_THROWS_AS(correlation_uv(u, sv, 2), ArgumentError);

  // surrogate u: explicit and split evaluations agree
  auto sv2 = SarnakV::from_params(two_stage(100, 1000, 1'000'000));
  SurrogateFunction sur(1000, 1'000'000);
  auto direct = correlation_uv(sur, sv2, 1);
  auto split = correlation_uv_surrogate(sv2, 1);
  CHECK(split.surrogate);
  CHECK(split.error_radius == 0.0);
  CHECK(std::abs(direct.value - split.value) < 1e-9);
  auto bounded = correlation_uv_surrogate(sv2, 1, 5000);
  CHECK(bounded.error_radius > 0);
  CHECK(std::abs(bounded.value - direct.value) <= bounded.error_radius + 1e-9);
  // u conj(v) = 1 on (r, t]
  CHECK(direct.value.real() >= (1'000'000.0 - sv2.r[2]) / 1'000'000.0 - sv2.r[2] / 1'000'000.0);
}
