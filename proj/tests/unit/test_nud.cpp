#include <cmath>
#include <map>

#include "doctest.h"
#include "mrtlab/error.hpp"
#include "mrtlab/moment_spec.hpp"
#include "mrtlab/nud.hpp"
#include "mrtlab/poly_family.hpp"
#include "mrtlab/rng.hpp"

using namespace mrtlab;

namespace {

TorusPoint random_point(int d, std::uint64_t seed) {
  TorusPoint p;
  for (int j = 0; j <= d; ++j) p.coords.push_back(uniform_turns(seed, 99, static_cast<std::uint64_t>(j)));
  return p;
}

Turns spec_phase(std::span<const Turns> path, const MomentSpec& spec, std::size_t shift = 0) {
  Turns acc;
  for (const auto& t : spec.terms()) acc += t.exponent * path[t.lag + shift];
  return acc;
}

}  // namespace

TEST_CASE("td_apply on two coordinates") {
  const Turns a = Turns::from_double(0.125), b = Turns::from_double(0.5);
  TorusPoint p{{a, b}};
  CHECK(td_apply(p) == TorusPoint{{a, a + b}});
  TorusPoint one{{a}};
  CHECK(td_apply(one) == one);
}

TEST_CASE("td_power against iterated td_apply") {
  for (int d = 0; d <= 5; ++d) {
    const TorusPoint p = random_point(d, static_cast<std::uint64_t>(d));
    CHECK(td_power(p, 0) == p);
    CHECK(td_power(p, 1) == td_apply(p));
    TorusPoint q = p;
    for (std::uint64_t r = 1; r <= 60; ++r) {
      q = td_apply(q);
      REQUIRE(td_power(p, r) == q);
    }
    const std::uint64_t r1 = 123'456'789'012ULL, r2 = 987'654'321ULL;
    CHECK(td_power(td_power(p, r1), r2) == td_power(p, r1 + r2));
  }
}

TEST_CASE("binomials mod 2^128") {
  CHECK(binomial_mod_2_128(5, 2) == 10);
  CHECK(binomial_mod_2_128(3, 4) == 0);
  CHECK(binomial_mod_2_128(0, 0) == 1);
  for (std::uint64_t n = 1; n <= 300; ++n)
    for (std::uint64_t k = 1; k <= n; ++k)
      REQUIRE(binomial_mod_2_128(n, k) == binomial_mod_2_128(n - 1, k - 1) + binomial_mod_2_128(n - 1, k));
}

TEST_CASE("sample paths") {
  auto z0 = sample_nu_d(0, 50, 3);
  for (auto t : z0) CHECK(t == z0[0]);
  CHECK(z0[0] == uniform_turns(3, 0, 0));
  // Z_n = e(sum_j C(n, j) X_j)
  const int d = 3;
  auto z = sample_nu_d(d, 200, 17, 4);
  for (std::uint64_t n = 0; n < 200; ++n) {
    Turns want;
    for (int j = 0; j <= d; ++j) want += binomial_mod_2_128(n, static_cast<std::uint64_t>(j)) * uniform_turns(17, 4, static_cast<std::uint64_t>(j));
    REQUIRE(z[n] == want);
  }
  // phi_{d+1} = 1 exactly along the path
  for (int dd = 0; dd <= 4; ++dd) {
    auto path = sample_nu_d(dd, 100, 5);
    std::vector<MomentTerm> terms;
    auto ex = phi_exponents(dd + 1);
    for (std::size_t j = 0; j < ex.size(); ++j) terms.push_back({j, ex[j]});
    const MomentSpec s(terms);
    for (std::size_t n = 0; n + ex.size() <= path.size(); ++n) REQUIRE(spec_phase(path, s, n) == Turns());
  }
  CHECK_THROWS_AS(sample_nu_d(-1, 5, 1), ArgumentError);
  CHECK_THROWS_AS(sample_nu_d(1, 0, 1), ArgumentError);
  auto set = sample_set(2, 4, 10, 8);
  CHECK(set.phases.size() == 40);
  CHECK(std::vector<Turns>(set.path(2).begin(), set.path(2).end()) == sample_nu_d(2, 10, 8, 2));
}

TEST_CASE("nu_d oracle examples") {
  const auto phi2 = MomentSpec::from_pairs({{0, 1}, {1, -2}, {2, 1}});
  CHECK(nu_d_moment({1}, phi2) == 1.0);
  CHECK(nu_d_moment({1}, MomentSpec::from_pairs({{0, -1}, {1, 1}})) == 0.0);
  for (int d = 0; d <= 4; ++d) CHECK(nu_d_moment({d}, MomentSpec::from_pairs({{0, 1}})) == 0.0);
  CHECK(nu_d_moment({3}, MomentSpec()) == 1.0);
  CHECK(NuDOracle{2}.moment(phi2) == 0.0);
  CHECK(powersum_equivalent(MomentSpec(), 3));
  CHECK(powersum_equivalent(phi2, 1));
  CHECK(!powersum_equivalent(phi2, 2));
  CHECK_THROWS_AS(nu_d_moment({-1}, phi2), ArgumentError);
}

TEST_CASE("binomial and power-sum criteria agree on a small family") {
  auto family = spec_family(5, 3, 2);
  CHECK(family.size() == 6 * 4 + 15 * 16 + 20 * 64);
  for (int d = 0; d <= 4; ++d)
    for (const auto& s : family) REQUIRE((nu_d_moment({d}, s) == 1.0) == powersum_equivalent(s, d));
}

TEST_CASE("strong stationarity") {
  const auto phi2 = MomentSpec::from_pairs({{0, 1}, {1, -2}, {2, 1}});
  CHECK(strong_stationarity_check(1, phi2, 3));
  CHECK(nu_d_moment({1}, phi2.dilated(3)) == 1.0);
  CHECK(strong_stationarity_check(2, MomentSpec::from_pairs({{1, 2}, {4, -1}}), 1));
  CounterRng rng(5, 5);
  for (int i = 0; i < 2000; ++i) {
    std::vector<MomentTerm> terms;
    const int k = 1 + static_cast<int>(rng() % 4);
    for (int j = 0; j < k; ++j) terms.push_back({rng() % 9, static_cast<long>(rng() % 7) - 3});
    const std::uint64_t r = std::array<std::uint64_t, 3>{2, 3, 5}[rng() % 3];
    REQUIRE(strong_stationarity_check(static_cast<int>(rng() % 4), MomentSpec(terms), r));
  }
  CHECK_THROWS_AS(strong_stationarity_check(1, phi2, 0), ArgumentError);
}

TEST_CASE("quasi-eigenfunction relation") {
  CHECK(!first_powersum_mismatch({0, 3, 3}, {1, 1, 4}, 2).has_value());
  CHECK(first_powersum_mismatch({0, 3, 3}, {1, 1, 4}, 3) == 3);
  CHECK(first_powersum_mismatch({0, 1}, {0}, 2) == 0);
  auto z2 = sample_nu_d(2, 64, 21);
  CHECK(quasi_eigen_relation_check(z2, 2, {0, 3, 3}, {1, 1, 4}, 1e-9));
  auto z1 = sample_nu_d(1, 64, 22);
  CHECK(quasi_eigen_relation_check(z1, 1, {0, 2}, {1, 1}, 1e-9));
  auto iid = sample_iid(64, 23);
  CHECK(!quasi_eigen_relation_check(iid, 1, {0, 2}, {1, 1}, 1e-9));
  try {
    quasi_eigen_relation_check(z2, 2, {0, 3, 3}, {1, 1, 5}, 1e-9);
    FAIL("expected ArgumentError");
  } catch (const ArgumentError& e) {
    CHECK(std::string(e.what()).find("order 1") != std::string::npos);
  }
}

TEST_CASE("ensemble moments") {
  auto set = sample_set(1, 20000, 6, 31);
  EnsembleAverager avg(set);
  CHECK(std::abs(avg.moment(MomentSpec::from_pairs({{0, 1}, {1, -2}, {2, 1}})) - 1.0) < 1e-12);
  CHECK(std::abs(avg.moment(MomentSpec::from_pairs({{0, 1}}))) < 0.05);
  CHECK(avg.moment(MomentSpec()) == 1.0);
  CHECK_THROWS_AS(avg.moment(MomentSpec::from_pairs({{6, 1}})), ArgumentError);
  std::map<std::string, std::complex<double>> seen;
  for_each_spec_moment(set, 4, 3, 2, [&](const MomentSpec& s, std::complex<double> v) { seen[s.to_string()] = v; });
  auto family = spec_family(4, 3, 2);
  CHECK(seen.size() == family.size());
  double worst = 0;
  for (const auto& s : family) worst = std::max(worst, std::abs(seen.at(s.to_string()) - avg.moment(s)));
  CHECK(worst < 1e-12);
  CHECK_THROWS_AS(for_each_spec_moment(set, 6, 2, 1, [](const MomentSpec&, std::complex<double>) {}),
                  ArgumentError);
}

TEST_CASE("independence report") {
  auto set = sample_set(2, 20000, 4, 77);
  auto ok = independence_report(set, 3, 2, 0.05);
  CHECK(ok.passed);
  CHECK(ok.entries.size() == 5 * 5 * 5 - 1);
  CHECK(ok.max_magnitude < 0.05);
  auto vac = independence_report(set, 3, 0, 0.05);
  CHECK(vac.passed);
  CHECK(vac.entries.empty());
  CHECK_THROWS_AS(independence_report(set, 4, 2, 0.05), ArgumentError);
  // one step past the range Z_3 is determined by Z_0..Z_2
  EnsembleAverager avg(set);
  CHECK(std::abs(avg.moment(MomentSpec::from_pairs({{0, -1}, {1, 3}, {2, -3}, {3, 1}})) - 1.0) < 1e-12);
}
