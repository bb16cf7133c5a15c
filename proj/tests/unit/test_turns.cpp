#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "mrtlab/error.hpp"
#include "mrtlab/moment_spec.hpp"
#include "mrtlab/rng.hpp"
#include "mrtlab/sequence.hpp"
#include "mrtlab/summation.hpp"
#include "mrtlab/turns.hpp"

using namespace mrtlab;

TEST_CASE("turns arithmetic is exact mod 1") {
  Turns a = Turns::from_double(0.75), b = Turns::from_double(0.5);
  CHECK((a + b) == Turns::from_double(0.25));
  CHECK((b - a) == Turns::from_double(0.75));
  CHECK((4 * a) == Turns());
  CHECK((-1 * a) == -a);
  CHECK(Turns::from_double(-1e-300) == Turns());
  CHECK(Turns::from_double(-0.25).fraction() == 0.75);
  CHECK(Turns::from_double(0.75).centered() == -0.25);
  // Z_0 Z_2 = Z_1^2 for an arithmetic progression of phases
  Turns x = uniform_turns(7, 0, 0), y = uniform_turns(7, 0, 1);
  CHECK((x + (x + 2 * y)) == 2 * (x + y));
}

TEST_CASE("turns unit matches libm to 3e-16") {
  CounterRng rng(11, 0);
  double worst = 0;
  for (int i = 0; i < 20000; ++i) {
    Turns t(random_bits(3, 1, static_cast<std::uint64_t>(i)));
    const long double a = 2.0L * std::numbers::pi_v<long double> * t.fraction_ld();
    const std::complex<double> ref(static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a)));
    worst = std::max(worst, std::abs(t.unit() - ref));
  }
  CHECK(worst < 3e-16);
  CHECK(Turns().unit() == std::complex<double>(1, 0));
}

TEST_CASE("turns hex round trip") {
  Turns t(random_bits(1, 2, 3));
  CHECK(t.hex().size() == 32);
  CHECK(Turns::from_hex(t.hex()) == t);
  CHECK_THROWS_AS(Turns::from_hex("xyz"), std::invalid_argument);
}

TEST_CASE("chord") {
  CHECK(chord(Turns::from_double(0.5), Turns()) == doctest::Approx(2.0));
  CHECK(chord(Turns::from_double(0.25), Turns()) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("philox4x32-10 known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("counter rng is a pure function of its coordinates") {
  CHECK(random_bits(5, 6, 7) == random_bits(5, 6, 7));
  CHECK(random_bits(5, 6, 7) != random_bits(5, 6, 8));
  CHECK(random_bits(5, 6, 7) != random_bits(5, 7, 7));
  CounterRng a(9, 1), b(9, 1);
  for (int i = 0; i < 10; ++i) CHECK(a() == b());
  double mean = 0;
  CounterRng c(9, 2);
  for (int i = 0; i < 100000; ++i) mean += c.uniform();
  CHECK(mean / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("compensated sums") {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1000.0);
  BatchedComplexSum b;
  ComplexSum c;
  for (int i = 1; i <= 10000; ++i) {
    std::complex<double> z(1.0 / i, -1.0 / (i * 3.0));
    b.add(z);
    c.add(z);
  }
  CHECK(std::abs(b.value() - c.value()) < 1e-14);
}

TEST_CASE("chunked_map is independent of the thread count") {
  auto body = std::function<double(std::size_t, std::uint64_t, std::uint64_t)>(
      [](std::size_t, std::uint64_t a, std::uint64_t b) {
        double s = 0;
        for (std::uint64_t n = a; n <= b; ++n) s += 1.0 / static_cast<double>(n);
        return s;
      });
  ParallelOptions one{1, true, 1000}, four{4, true, 1000};
  auto r1 = chunked_map<double>(1, 100000, one, body);
  auto r4 = chunked_map<double>(1, 100000, four, body);
  CHECK(r1 == r4);
  CHECK(r1.size() == 100);
  CHECK(chunked_map<double>(5, 4, one, body).empty());
}

TEST_CASE("moment spec normal form") {
  auto s = MomentSpec::from_pairs({{3, 1}, {0, 2}, {3, -1}, {1, 0}, {0, -1}});
  CHECK(s == MomentSpec::from_pairs({{0, 1}}));
  CHECK(MomentSpec::from_pairs({{0, 0}}).is_constant());
  auto phi2 = MomentSpec::from_lags({0, 2}, {1, 1});
  CHECK(phi2.to_string() == "Z0*Z1^-2*Z2");
  CHECK(phi2.max_lag() == 2);
  CHECK(phi2.total_abs_exponent() == 4);
  CHECK(phi2.total_exponent() == 0);
  CHECK(phi2.dilated(3) == MomentSpec::from_pairs({{0, 1}, {3, -2}, {6, 1}}));
  CHECK(phi2.shifted(1) == MomentSpec::from_pairs({{1, 1}, {2, -2}, {3, 1}}));
  CHECK(phi2.conjugate() == phi2.powered(-1));
  CHECK(MomentSpec().to_string() == "1");
  CHECK(canonical_less(MomentSpec::from_pairs({{1, 1}}), MomentSpec::from_pairs({{2, 1}})));
  CHECK(canonical_less(MomentSpec::from_pairs({{1, 1}}), MomentSpec::from_pairs({{1, 2}})));
  CHECK(!canonical_less(phi2, phi2));
}

TEST_CASE("sequence sources") {
  auto alt = RotationSource::alternating();
  CHECK(std::abs(alt.value(3) + 1.0) < 1e-15);
  CHECK(std::abs(alt.value(4) - 1.0) < 1e-15);
  CHECK(RotationSource::constant_one().phase(99) == Turns());

  PhaseVectorSource pv({Turns::from_double(0.25), Turns::from_double(0.5)});
  CHECK(pv.last_index() == 2u);
  CHECK(pv.phase(2) == Turns::from_double(0.5));
  CHECK_THROWS_AS(pv.require_range(3, "test"), ArgumentError);

  ComplexVectorSource cv(std::vector<std::complex<double>>{{2, 0}, {0, 1}});
  CHECK(!cv.has_phases());
  CHECK_THROWS_AS(cv.phase(1), StateError);

  FunctionSource fs([](std::uint64_t n) { return std::complex<double>(static_cast<double>(n), 0); }, "id");
  Materialized m(fs, 5);
  CHECK(m.value(5) == std::complex<double>(5, 0));
  CHECK(!m.has_phases());
  Materialized mp(alt, 4);
  CHECK(mp.has_phases());
  CHECK(mp.phase(3) == alt.phase(3));
}
