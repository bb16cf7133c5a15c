#include <cmath>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "mrtlab/error.hpp"
#include "mrtlab/poly_family.hpp"
#include "mrtlab/rng.hpp"

using namespace mrtlab;

namespace {

IntPoly product_of(const std::vector<std::pair<long, unsigned long>>& factors) {
  IntPoly p = IntPoly::constant(1);
  for (auto [j, m] : factors) p = p * IntPoly::linear_power(j, m);
  return p;
}

std::vector<std::string> low_first(const IntPoly& p) {
  std::vector<std::string> out;
  for (const auto& c : p.coeffs()) out.push_back(c.get_str());
  return out;
}

mpq_class eval(const RationalFunction& f, const mpq_class& x) { return f.num(x) / f.den(x); }

}  // namespace

TEST_CASE("pi_pair examples") {
  auto [p0, q0] = pi_pair(0);
  CHECK(p0.exponents == std::vector<unsigned long>{1});
  CHECK(q0.total() == 0);
  auto [p2, q2] = pi_pair(2);
  CHECK(p2.exponents == std::vector<unsigned long>{1, 0, 1});
  CHECK(q2.exponents == std::vector<unsigned long>{0, 2, 0});
  auto [p4, q4] = pi_pair(4);
  CHECK(p4.exponents == std::vector<unsigned long>{1, 0, 6, 0, 1});
  CHECK(q4.exponents == std::vector<unsigned long>{0, 4, 0, 4, 0});
  CHECK(phi_exponents(2) == std::vector<long>{1, -2, 1});
  CHECK_THROWS_AS(pi_pair(31), ResourceError);
  CHECK_THROWS_AS(pi_pair(-1), ArgumentError);
}

TEST_CASE("phi telescopes") {
  double worst = 0;
  for (int d = 0; d <= 6; ++d)
    for (std::uint64_t trial = 0; trial < 1000; ++trial) {
      std::vector<std::complex<double>> z(static_cast<std::size_t>(d) + 2);
      for (std::size_t j = 0; j < z.size(); ++j)
        z[j] = uniform_turns(static_cast<std::uint64_t>(d), trial, j).unit();
      std::span<const std::complex<double>> all(z);
      const auto lhs = phi_value(d + 1, all);
      const auto rhs = phi_value(d, all.subspan(1)) / phi_value(d, all.first(static_cast<std::size_t>(d) + 1));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  CHECK(worst <= 1e-12);
}

TEST_CASE("pq_polynomials examples") {
  auto t3 = pq_polynomials(3);
  CHECK(t3.P == IntPoly::linear_power(1, 3) * IntPoly::linear_power(3, 1));
  CHECK(t3.Q == IntPoly::linear_power(0, 1) * IntPoly::linear_power(2, 3));
  CHECK(pq_polynomials(1).R == IntPoly::constant(-1));
  CHECK(pq_polynomials(6).R.degree() == 26);
}

TEST_CASE("degree law for d = 1..12") {
  for (int d = 1; d <= 12; ++d) {
    auto t = pq_polynomials(d);
    CHECK(t.P.degree() == (1 << (d - 1)));
    CHECK(t.Q.degree() == (1 << (d - 1)));
    CHECK(t.R.degree() == (1 << (d - 1)) - d);
    CHECK(t.R == t.Q - t.P);
  }
}

TEST_CASE("factored and recurrence expansions agree") {
  for (int d = 1; d <= 12; ++d) {
    auto a = pq_polynomials(d);
    auto b = pq_via_recurrence(d);
    CHECK(a.P == b.P);
    CHECK(a.Q == b.Q);
    CHECK(product_of(a.P_factors) == a.P);
    CHECK(product_of(a.Q_factors) == a.Q);
    // one step of the recurrence from the expanded form
    auto next = pq_polynomials(d + 1);
    CHECK(next.P == a.P.shifted(1) * a.Q);
    CHECK(next.Q == a.Q.shifted(1) * a.P);
  }
}

TEST_CASE("golden polynomials d = 1..5") {
  for (int d = 1; d <= 5; ++d) {
    std::ifstream in(std::string(MRTLAB_GOLDEN_DIR) + "/poly_d" + std::to_string(d) + ".json");
    REQUIRE(in);
    auto g = nlohmann::json::parse(in);
    auto t = pq_polynomials(d);
    CHECK(low_first(t.P) == g["P"].get<std::vector<std::string>>());
    CHECK(low_first(t.Q) == g["Q"].get<std::vector<std::string>>());
    CHECK(low_first(t.R) == g["R"].get<std::vector<std::string>>());
    std::vector<std::vector<long>> pf, qf;
    for (auto [j, m] : t.P_factors) pf.push_back({j, static_cast<long>(m)});
    for (auto [j, m] : t.Q_factors) qf.push_back({j, static_cast<long>(m)});
    CHECK(pf == g["P_factors"].get<std::vector<std::vector<long>>>());
    CHECK(qf == g["Q_factors"].get<std::vector<std::vector<long>>>());
    auto k = asymptotic_constants(t);
    CHECK(k.K.get_str() == g["K"].get<std::string>());
    CHECK(k.L.get_str() == g["L"].get<std::string>());
  }
}

TEST_CASE("asymptotic constants") {
  CHECK(asymptotic_constants(pq_polynomials(1)).K == 1);
  CHECK(asymptotic_constants(pq_polynomials(2)).K == -1);
  for (int d = 1; d <= 8; ++d) {
    auto k = asymptotic_constants(pq_polynomials(d));
    CHECK(k.L == -d * k.K);
  }
  CHECK_THROWS_AS(asymptotic_constants(pq_polynomials(0)), ArgumentError);
}

TEST_CASE("fd_eval") {
  auto pf0 = make_phase_function(0);
  CHECK(fd_eval(pf0, 7.5, 128).to_double() == doctest::Approx(std::log(7.5)).epsilon(1e-15));
  auto pf2 = make_phase_function(2);
  CHECK(fd_eval(pf2, mpq_class(4), 128).to_double() == doctest::Approx(-0.04082199452025513).epsilon(1e-15));
  CHECK_THROWS_AS(fd_eval(pf2, 0.0, 128), DomainError);
  CHECK_THROWS_AS(fd_eval(pf2, -3.0, 128), DomainError);
  for (int d = 1; d <= 5; ++d) {
    auto pf = make_phase_function(d);
    const double K = pf.K->get_d();
    double prev = INFINITY;
    for (int k = 4; k <= 40; k += 4) {
      const double x = std::ldexp(1.0, k);
      const double err = std::fabs(fd_eval(pf, x, 256).to_double() * std::pow(x, d) - K);
      CHECK(err * x < 20.0 * (1 << d) * std::fabs(K) + 10);
      CHECK(err < prev);
      prev = err;
    }
  }
  auto pf1 = make_phase_function(1);
  const double x = 1e6;
  CHECK(x * x * fd_eval(pf2, x, 256).to_double() == doctest::Approx(-1.0).epsilon(1e-5));
  CHECK(fd_eval(pf1, x, 256).to_double() == doctest::Approx(std::log1p(1 / x)).epsilon(1e-14));
}

TEST_CASE("fd_derivative") {
  auto d0 = fd_derivative(make_phase_function(0));
  auto d1 = fd_derivative(make_phase_function(1));
  for (long k = 1; k <= 20; ++k) {
    mpq_class x(k * 7, 3);
    x.canonicalize();
    CHECK(eval(d0, x) == 1 / x);
    CHECK(eval(d1, x) == -1 / (x * (x + 1)));
  }
  // central difference against fd_eval for d = 3
  auto pf3 = make_phase_function(3);
  auto d3 = fd_derivative(pf3);
  const double h = 1e-4;
  for (double x : {2.5, 10.0, 77.0}) {
    const double num = (fd_eval(pf3, x + h, 256).to_double() - fd_eval(pf3, x - h, 256).to_double()) / (2 * h);
    CHECK(num == doctest::Approx(eval(d3, mpq_class(x)).get_d()).epsilon(1e-6));
  }
}

TEST_CASE("monotone threshold") {
  CHECK(monotone_threshold(make_phase_function(0)) == 0.0);
  CHECK(monotone_threshold(make_phase_function(1)) == 0.0);
  for (int d = 2; d <= 4; ++d) {
    auto pf = make_phase_function(d);
    const double H = monotone_threshold(pf);
    CHECK(std::isfinite(H));
    CHECK(H == pf.H);
    // f' strictly monotone on a grid beyond H
    int direction = 0;
    mpq_class prev = eval(pf.derivative, mpq_class(H + 1e-3));
    for (int i = 1; i <= 400; ++i) {
      mpq_class x(H + 1e-3 + 0.05 * i);
      mpq_class cur = eval(pf.derivative, x);
      const int sgn = cmp(cur, prev) > 0 ? 1 : -1;
      if (direction == 0) direction = sgn;
      REQUIRE(sgn == direction);
      prev = cur;
    }
  }
}

TEST_CASE("real root upper bound") {
  IntPoly p({mpz_class(-3), mpz_class(-2), mpz_class(1)});  // (x - 3)(x + 1)
  auto c = real_root_upper_bound(p);
  CHECK(c >= 3);
  CHECK(c <= mpq_class(3) + mpq_class(1, 1024));
  IntPoly q({mpz_class(1), mpz_class(0), mpz_class(1)});  // x^2 + 1
  CHECK(real_root_upper_bound(q) == 0);
}

TEST_CASE("degree of the twisted difference") {
  CounterRng rng(42, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = static_cast<int>(rng() % 8), r = static_cast<int>(rng() % 8);
    if (p == r) continue;
    auto random_poly = [&](int deg) {
      std::vector<mpz_class> c(static_cast<std::size_t>(deg) + 1);
      for (auto& x : c) x = static_cast<long>(rng() % 41) - 20;
      if (c.back() == 0) c.back() = 1;
      return IntPoly(c);
    };
    IntPoly P = random_poly(p), R = random_poly(r);
    IntPoly diff = R.shifted(1) * P - R * P.shifted(1);
    CHECK(diff.degree() == r + p - 1);
  }
}
