#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "mrtlab/turns.hpp"

namespace mrtlab {

// Philox4x32-10 (Salmon et al., SC'11): a counter-based generator, so the
// output for (seed, stream, index) is a pure function and sample paths can be
// produced in any order or in parallel.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t M0 = 0xD2511F53, M1 = 0xCD9E8D57;
  constexpr std::uint32_t W0 = 0x9E3779B9, W1 = 0xBB67AE85;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += W0;
    key[1] += W1;
  }
  return ctr;
}

// 128 random bits for (seed, stream, index).
inline u128 random_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  auto r = philox4x32({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                       static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)},
                      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  return (static_cast<u128>(r[0]) << 96) | (static_cast<u128>(r[1]) << 64) | (static_cast<u128>(r[2]) << 32) | r[3];
}

// Uniform point of R/Z on the 2^-128 grid.
inline Turns uniform_turns(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return Turns(random_bits(seed, stream, index));
}

// UniformRandomBitGenerator over one (seed, stream) pair, for use with
// <random> distributions.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() {
    if (!have_low_) {
      block_ = random_bits(seed_, stream_, counter_++);
      have_low_ = true;
      return static_cast<result_type>(block_ >> 64);
    }
    have_low_ = false;
    return static_cast<result_type>(block_);
  }
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1p-53; }

 private:
  std::uint64_t seed_, stream_;
  std::uint64_t counter_ = 0;
  u128 block_ = 0;
  bool have_low_ = false;
};

}  // namespace mrtlab
