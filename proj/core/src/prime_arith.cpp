#include "mrtlab/prime_arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "mrtlab/error.hpp"

namespace mrtlab {
namespace {

constexpr char kMagic[8] = {'M', 'R', 'T', 'S', 'P', 'F', '0', '1'};

void check_budget(std::uint64_t limit, std::uint64_t budget_bytes) {
  if (limit < 2) throw ArgumentError("sieve: limit must be >= 2");
  if (limit >= (1ULL << 32))
    throw ResourceError("sieve: limit " + std::to_string(limit) + " exceeds 32-bit spf entries");
  const std::uint64_t bytes = (limit + 1) * sizeof(std::uint32_t);
  if (bytes > budget_bytes)
    throw ResourceError("sieve: limit " + std::to_string(limit) + " needs " + std::to_string(bytes) +
                        " bytes, budget is " + std::to_string(budget_bytes));
}

}  // namespace

PrimeTable PrimeTable::sieve(std::uint64_t limit, std::uint64_t budget_bytes) {
  check_budget(limit, budget_bytes);
  PrimeTable t;
  t.limit_ = limit;
  t.spf_.assign(limit + 1, 0);
  t.primes_.reserve(static_cast<std::size_t>(1.3 * static_cast<double>(limit) /
                                             std::max(1.0, std::log(static_cast<double>(limit)))) + 16);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (t.spf_[i] == 0) {
      t.spf_[i] = static_cast<std::uint32_t>(i);
      t.primes_.push_back(static_cast<std::uint32_t>(i));
    }
    const std::uint32_t si = t.spf_[i];
    for (std::uint32_t p : t.primes_) {
      if (p > si) break;
      const std::uint64_t m = i * p;
      if (m > limit) break;
      t.spf_[m] = p;
    }
  }
  return t;
}

void PrimeTable::rebuild_primes() {
  primes_.clear();
  for (std::uint64_t i = 2; i <= limit_; ++i)
    if (spf_[i] == i) primes_.push_back(static_cast<std::uint32_t>(i));
}

std::uint64_t PrimeTable::prime_count(std::uint64_t x) const {
  if (x > limit_) throw ArgumentError("prime_count: x beyond sieve limit");
  return static_cast<std::uint64_t>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

void PrimeTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const std::uint32_t width = sizeof(std::uint32_t);
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&limit_), sizeof limit_);
  out.write(reinterpret_cast<const char*>(&width), sizeof width);
  out.write(reinterpret_cast<const char*>(spf_.data()),
            static_cast<std::streamsize>(spf_.size() * sizeof(std::uint32_t)));
  if (!out) throw IoError("short write to " + path.string());
}

PrimeTable PrimeTable::load(const std::filesystem::path& path, std::uint64_t budget_bytes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8];
  std::uint64_t limit = 0;
  std::uint32_t width = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&limit), sizeof limit);
  in.read(reinterpret_cast<char*>(&width), sizeof width);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw IoError(path.string() + ": not an spf cache");
  if (width != sizeof(std::uint32_t))
    throw IoError(path.string() + ": unsupported entry width " + std::to_string(width));
  check_budget(limit, budget_bytes);
  PrimeTable t;
  t.limit_ = limit;
  t.spf_.resize(limit + 1);
  in.read(reinterpret_cast<char*>(t.spf_.data()),
          static_cast<std::streamsize>(t.spf_.size() * sizeof(std::uint32_t)));
  if (!in) throw IoError(path.string() + ": truncated spf cache");
  t.rebuild_primes();
  return t;
}

std::vector<PrimePower> factorize(std::uint64_t n, const PrimeTable& table) {
  if (n == 0) throw ArgumentError("factorize: n must be >= 1");
  if (n > table.limit()) throw ArgumentError("factorize: n=" + std::to_string(n) + " beyond sieve limit");
  std::vector<PrimePower> out;
  while (n > 1) {
    const std::uint64_t p = table.spf(n);
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  return out;
}

unsigned count_small_prime_factors(std::uint64_t n, std::uint64_t t, const PrimeTable& table) {
  if (n == 0) throw ArgumentError("count_small_prime_factors: n must be >= 1");
  if (n > table.limit())
    throw ArgumentError("count_small_prime_factors: n=" + std::to_string(n) +
                        " beyond sieve limit; supply a factorization");
  unsigned count = 0;
  // spf order is ascending, so stop at the first prime above t.
  while (n > 1) {
    const std::uint64_t p = table.spf(n);
    if (p > t) break;
    n /= p;
    ++count;
  }
  return count;
}

unsigned count_small_prime_factors(std::span<const PrimePower> factorization, std::uint64_t t) {
  unsigned count = 0;
  for (const auto& pp : factorization)
    if (pp.prime <= t) count += pp.exponent;
  return count;
}

bool in_Bt(std::uint64_t n, std::uint64_t t, const PrimeTable& table) {
  return count_small_prime_factors(n, t, table) >= t;
}

EpsilonBound epsilon_t_bound(std::uint64_t t, const PrimeTable& table, std::uint64_t cutoff) {
  if (t < 2) throw DomainError("epsilon_t_bound: pi(t) = 0 for t < 2; k_t undefined");
  if (t > table.limit()) throw ArgumentError("epsilon_t_bound: t beyond sieve limit");
  if (cutoff == 0) cutoff = table.limit();
  if (cutoff > table.limit()) throw ArgumentError("epsilon_t_bound: cutoff beyond sieve limit");
  const std::uint64_t pi_t = table.prime_count(t);
  EpsilonBound b;
  b.k = static_cast<unsigned>(t / pi_t);
  if (b.k <= 1)
    throw DomainError("epsilon_t_bound: k_t = floor(t/pi(t)) = " + std::to_string(b.k) + " at t=" +
                      std::to_string(t) + "; the prime sum diverges and the bound is vacuous");
  // Sum small terms first.
  long double sum = 0;
  auto primes = table.primes();
  auto end = std::upper_bound(primes.begin(), primes.end(), cutoff);
  for (auto it = end; it != primes.begin();) {
    --it;
    sum += std::pow(static_cast<long double>(*it), -static_cast<long double>(b.k));
  }
  // Rounding of the partial sum is far below the tail term; nudge upward anyway.
  b.partial_sum = std::nextafter(static_cast<double>(sum), 1.0);
  b.tail_bound = std::nextafter(
      static_cast<double>(std::pow(static_cast<long double>(cutoff), 1.0L - b.k) / (b.k - 1)), 1.0);
  return b;
}

double epsilon_t_empirical(std::uint64_t t, std::uint64_t N, const PrimeTable& table) {
  if (N == 0) throw ArgumentError("epsilon_t_empirical: N must be >= 1");
  if (N > table.limit()) throw ArgumentError("epsilon_t_empirical: N beyond sieve limit");
  std::uint64_t hits = 0;
  for (std::uint64_t n = 1; n <= N; ++n) hits += in_Bt(n, t, table) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(N);
}

double epsilon_t_empirical_sup(std::uint64_t t, std::span<const std::uint64_t> grid,
                               const PrimeTable& table) {
  if (grid.empty()) return 0;
  std::vector<std::uint64_t> sorted(grid.begin(), grid.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == 0) throw ArgumentError("epsilon_t_empirical_sup: grid contains 0");
  if (sorted.back() > table.limit()) throw ArgumentError("epsilon_t_empirical_sup: grid beyond sieve limit");
  double best = 0;
  std::uint64_t hits = 0;
  std::uint64_t n = 0;
  for (std::uint64_t N : sorted) {
    for (; n < N;) {
      ++n;
      hits += in_Bt(n, t, table) ? 1 : 0;
    }
    best = std::max(best, static_cast<double>(hits) / static_cast<double>(N));
  }
  return best;
}

}  // namespace mrtlab
