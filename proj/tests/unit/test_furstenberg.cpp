#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

#include "doctest.h"
#include "mrtlab/error.hpp"
#include "mrtlab/expsum.hpp"
#include "mrtlab/furstenberg.hpp"
#include "mrtlab/mrt.hpp"
#include "mrtlab/nud.hpp"
#include "mrtlab/rng.hpp"

using namespace mrtlab;

namespace {

MomentEvaluator ensemble(const SampleSet& set) {
  auto avg = std::make_shared<EnsembleAverager>(set);
  return [avg](const MomentSpec& s) { return avg->moment(s); };
}

MomentEvaluator oracle(int d) {
  return [d](const MomentSpec& s) { return nu_d_moment(NuDOracle{d}, s); };
}

}  // namespace

TEST_CASE("empirical moments") {
  auto path = sample_nu_d(1, 2000, 9);
  PhaseVectorSource u(path);
  EmpiricalAverager avg(u, 1000, 8);
  CHECK(avg.exact_phases());
  CHECK(empirical_moment(avg, MomentSpec()) == 1.0);
  CHECK(std::abs(empirical_moment(avg, MomentSpec::from_pairs({{0, 1}, {1, -2}, {2, 1}})) - 1.0) < 1e-12);
  CHECK_THROWS_AS(avg.moment(MomentSpec::from_pairs({{9, 1}})), ArgumentError);

  const Turns theta = Turns::from_double(0.137);
  RotationSource rot(theta);
  EmpiricalAverager ravg(rot, 5000, 1);
  CHECK(std::abs(ravg.moment(MomentSpec::from_pairs({{0, 1}, {1, -1}})) - (-theta).unit()) < 1e-12);
  CHECK_THROWS_AS(EmpiricalAverager(rot, 0, 1), ArgumentError);
}

TEST_CASE("logarithmic averages by summation by parts") {
  CounterRng rng(3, 3);
  std::vector<std::complex<double>> vals(3000);
  for (auto& v : vals) v = {rng.uniform() * 2 - 1, rng.uniform() * 2 - 1};
  ComplexVectorSource u(vals);
  const std::uint64_t N = 2500;
  EmpiricalAverager logavg(u, N, 3, Weighting::logarithmic);
  for (const auto& spec : {MomentSpec::from_pairs({{0, 1}}), MomentSpec::from_pairs({{0, 2}, {3, -1}}),
                           MomentSpec::from_pairs({{1, 1}, {2, 1}})}) {
    auto prefix = logavg.cesaro_prefix_moments(spec);
    double L = 0;
    for (std::uint64_t n = 1; n <= N; ++n) L += 1.0 / static_cast<double>(n);
    std::complex<double> rhs = prefix[N - 1];
    for (std::uint64_t n = 1; n <= N - 1; ++n) rhs += prefix[n - 1] / static_cast<double>(n + 1);
    rhs /= L;
    CHECK(std::abs(logavg.moment(spec) - rhs) < 1e-12);
  }
}

TEST_CASE("streaming moments match the materialized averager") {
  SurrogateFunction sur(1000);
  std::vector<MomentSpec> specs{MomentSpec::from_pairs({{0, 1}}), MomentSpec::from_pairs({{0, 1}, {2, -1}})};
  for (auto w : {Weighting::cesaro, Weighting::logarithmic}) {
    EmpiricalAverager avg(sur, 50000, 2, w);
    ParallelOptions par{2, true, 4096};
    auto m = streaming_moments(sur, 50000, specs, w, par);
    for (std::size_t i = 0; i < specs.size(); ++i) CHECK(std::abs(m[i] - avg.moment(specs[i])) < 1e-9);
  }
}

TEST_CASE("phi statistic") {
  SurrogateFunction sur(1'000'000);
  CHECK(phi_statistic(sur, 1, 0, 1000) == 1.0);
  auto one = RotationSource::constant_one();
  for (long l : {1, 2, 3}) CHECK(std::abs(phi_statistic(one, 1, l, 1000) - 1.0) < 1e-15);
  // on a surrogate the statistic is the exponential sum of l s f_d
  auto pf = std::make_shared<const PhaseFunction>(make_phase_function(2));
  ExpSumSpec sp;
  sp.phase = pf;
  sp.s = 1'000'000;
  sp.ell = 2;
  sp.a = 1;
  sp.b = 20000;
  CHECK(std::abs(phi_statistic(sur, 2, 2, 20000) - exp_sum(sp).value) < 1e-9);
  ComplexVectorSource bad(std::vector<std::complex<double>>(100, {2, 0}));
  CHECK_THROWS_AS(phi_statistic(bad, 1, 1, 50), DomainError);
  CHECK(phi_spec(2, 1) == MomentSpec::from_pairs({{0, 1}, {1, -2}, {2, 1}}));
  CHECK(phi_spec(2, -3) == phi_spec(2, 1).powered(-3));
}

TEST_CASE("criterion check") {
  auto one = RotationSource::constant_one();
  auto r1 = criterion_check(one, 1, 1000, 3, 0.05);
  CHECK(r1.next_pass);
  CHECK(!r1.powers_pass);
  CHECK(!r1.passed);
  SurrogateFunction sur(10'000'000);
  auto r2 = criterion_check(sur, 1, 177'827, 3, 0.05);
  CHECK(r2.passed);
  CHECK(r2.powers.size() == 3);
  // a single nu_1 path is exactly phi_2 = 1 but its phi_1 average is a unit constant
  PhaseVectorSource path(sample_nu_d(1, 1100, 4));
  auto r3 = criterion_check(path, 1, 1000, 3, 0.05);
  CHECK(r3.next_deviation < 1e-12);
  CHECK(std::abs(r3.powers[0]) == doctest::Approx(1.0));
}

TEST_CASE("delta specs follow height order") {
  std::vector<MomentSpec> brute;
  std::vector<MomentTerm> cur;
  std::function<void(std::uint64_t)> rec = [&](std::uint64_t lag) {
    if (lag == 5) {
      if (!cur.empty()) brute.emplace_back(cur);
      return;
    }
    rec(lag + 1);
    for (long e = -4; e <= 4; ++e) {
      if (e == 0) continue;
      cur.push_back({lag, e});
      rec(lag + 1);
      cur.pop_back();
    }
  };
  rec(0);
  auto height = [](const MomentSpec& s) { return s.max_lag() + s.total_abs_exponent(); };
  std::sort(brute.begin(), brute.end(), [&](const MomentSpec& a, const MomentSpec& b) {
    if (height(a) != height(b)) return height(a) < height(b);
    return canonical_less(a, b);
  });
  auto ds = delta_specs(40);
  REQUIRE(ds.size() == 40);
  for (std::size_t i = 0; i < 40; ++i) CHECK(ds[i] == brute[i]);
  CHECK(ds[0] == MomentSpec::from_pairs({{0, -1}}));
  CHECK(height(ds[39]) == 4);
}

TEST_CASE("delta is a bounded pseudometric") {
  auto s0 = sample_set(0, 5000, 12, 1);
  auto s1 = sample_set(1, 5000, 12, 2);
  std::vector<MomentEvaluator> ev{oracle(0), oracle(1), oracle(3), ensemble(s0), ensemble(s1)};
  for (auto& a : ev) {
    CHECK(delta_distance(a, a).value == 0.0);
    for (auto& b : ev) {
      const auto ab = delta_distance(a, b);
      CHECK(ab.value == doctest::Approx(delta_distance(b, a).value));
      CHECK(ab.value <= 2.0 + ab.tail_bound);
      for (auto& c : ev) CHECK(ab.value <= delta_distance(a, c).value + delta_distance(c, b).value + 1e-12);
    }
  }
  // convex combinations
  const double lam = 0.3;
  MomentEvaluator mix = [&](const MomentSpec& s) { return lam * ev[0](s) + (1 - lam) * ev[1](s); };
  for (auto& c : ev)
    CHECK(delta_distance(mix, c).value <=
          lam * delta_distance(ev[0], c).value + (1 - lam) * delta_distance(ev[1], c).value + 1e-12);
  auto same = delta_distance(ensemble(s1), oracle(1));
  CHECK(same.value <= 0.05 + same.tail_bound);
  CHECK(same.tail_bound == std::ldexp(1.0, -39));
}

TEST_CASE("log mixture oracle") {
  for (std::uint64_t D1 : {1, 2, 5, 17}) {
    double w = 0;
    for (std::uint64_t d = D1; d <= 1'000'000; ++d) w += log_mixture_weight(D1, d);
    CHECK(w + static_cast<double>(D1) / 1'000'001.0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(log_mixture_weight(D1, D1 - 1) == 0.0);
    CHECK(log_mixture_oracle(D1, std::nullopt, MomentSpec()).weight_total == doctest::Approx(1.0).epsilon(1e-15));
    auto fin = log_mixture_oracle(D1, D1 + 9, MomentSpec());
    CHECK(fin.weight_total + fin.tail_bound == doctest::Approx(1.0).epsilon(1e-15));
    // any window of length D1 + 1 is uniform under every nu_d, d >= D1
    CounterRng rng(D1, 0);
    for (int i = 0; i < 200; ++i) {
      std::vector<MomentTerm> terms;
      for (std::uint64_t lag = 0; lag <= D1; ++lag) terms.push_back({lag, static_cast<long>(rng() % 7) - 3});
      MomentSpec s(terms);
      if (s.is_constant()) continue;
      REQUIRE(log_mixture_oracle(D1, std::nullopt, s).value == 0.0);
    }
    // phi_{D1+1} has moment 1 only under nu_{D1}
    const auto phi = phi_spec(static_cast<int>(D1) + 1, 1);
    CHECK(log_mixture_oracle(D1, std::nullopt, phi).value.real() ==
          doctest::Approx(1.0 / static_cast<double>(D1 + 1)).epsilon(1e-14));
    std::complex<double> termwise = 0;
    for (std::uint64_t d = D1; d <= D1 + 30; ++d)
      termwise += log_mixture_weight(D1, d) * nu_d_moment(NuDOracle{static_cast<int>(d)}, phi);
    CHECK(std::abs(log_mixture_oracle(D1, D1 + 30, phi).value - termwise) < 1e-14);
  }
  CHECK_THROWS_AS(log_mixture_oracle(0, std::nullopt, MomentSpec()), ArgumentError);
  CHECK_THROWS_AS(log_mixture_oracle(5, 4, MomentSpec()), ArgumentError);
}

TEST_CASE("short interval statistic") {
  CHECK(short_interval_stat(RotationSource::constant_one(), 1000, 7) == doctest::Approx(1.0));
  CHECK(short_interval_stat(RotationSource::alternating(), 1000, 8) < 1e-12);
  CHECK(short_interval_stat(SurrogateFunction(2), 100000, 20) > 0.95);
  CHECK_THROWS_AS(short_interval_stat(RotationSource::constant_one(), 0, 5), ArgumentError);
}

TEST_CASE("mean slow variation") {
  CHECK(mean_slow_variation_stat(RotationSource::constant_one(), 1000) == 0.0);
  CHECK(mean_slow_variation_stat(RotationSource::alternating(), 1000) == doctest::Approx(2.0));
  const std::uint64_t N = 100000;
  const double v = mean_slow_variation_stat(SurrogateFunction(1), N);
  // direct long double summation of 2 sin(log(1 + 1/n) / 2)
  CHECK(v == doctest::Approx(0.00011494088046945855).epsilon(1e-9));
  CHECK(v <= (std::log(static_cast<double>(N)) + 1) / static_cast<double>(N) * (1 + 1e-3));
}

TEST_CASE("slowly varying sequences collapse lags") {
  SurrogateFunction u(1);
  const auto spec = MomentSpec::from_pairs({{0, 1}, {3, 2}, {5, -1}});
  const auto collapsed = MomentSpec::from_pairs({{0, 2}});
  double prev = INFINITY;
  for (std::uint64_t N : {1000, 10000, 100000}) {
    EmpiricalAverager avg(u, N, 5);
    const double gap = std::abs(avg.moment(spec) - avg.moment(collapsed));
    CHECK(gap < prev);
    CHECK(gap <= 20 * (std::log(static_cast<double>(N)) + 1) / static_cast<double>(N));
    prev = gap;
  }
}
