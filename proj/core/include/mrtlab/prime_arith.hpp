#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace mrtlab {

// Smallest-prime-factor table and the ascending list of primes up to `limit`.
// Immutable after construction; safe to share between threads.
class PrimeTable {
 public:
  // Default memory budget for the spf table: 1 GiB.
  static constexpr std::uint64_t kDefaultBudgetBytes = 1ULL << 30;

  // Linear sieve. Throws ArgumentError for limit < 2 and ResourceError when
  // the table would exceed budget_bytes.
  static PrimeTable sieve(std::uint64_t limit, std::uint64_t budget_bytes = kDefaultBudgetBytes);

  std::uint64_t limit() const { return limit_; }
  std::span<const std::uint32_t> primes() const { return primes_; }
  // Smallest prime factor of n, 2 <= n <= limit.
  std::uint32_t spf(std::uint64_t n) const { return spf_[n]; }
  bool is_prime(std::uint64_t n) const { return n >= 2 && n <= limit_ && spf_[n] == n; }
  // pi(x) for x <= limit.
  std::uint64_t prime_count(std::uint64_t x) const;

  // Binary cache: magic "MRTSPF01", u64 limit, u32 entry width, then spf[0..limit].
  void save(const std::filesystem::path& path) const;
  static PrimeTable load(const std::filesystem::path& path,
                         std::uint64_t budget_bytes = kDefaultBudgetBytes);

 private:
  PrimeTable() = default;
  void rebuild_primes();

  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

// Prime factorization as (p, alpha_p) pairs, ascending in p.
struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};
std::vector<PrimePower> factorize(std::uint64_t n, const PrimeTable& table);

// Sum of alpha_p(n) over primes p <= t.
unsigned count_small_prime_factors(std::uint64_t n, std::uint64_t t, const PrimeTable& table);
// Same count from a caller-supplied factorization (for n beyond the table).
unsigned count_small_prime_factors(std::span<const PrimePower> factorization, std::uint64_t t);

// n lies in B_t: at least t prime factors <= t, with multiplicity.
bool in_Bt(std::uint64_t n, std::uint64_t t, const PrimeTable& table);

// Certified upper bound for the upper density eps_t of B_t:
//   sum_{p <= cutoff} p^{-k} + cutoff^{1-k}/(k-1),   k = floor(t / pi(t)),
// where the second term bounds the prime tail by the integral of x^{-k}.
// cutoff defaults to the table limit. Throws DomainError when k <= 1.
struct EpsilonBound {
  unsigned k = 0;
  double partial_sum = 0;
  double tail_bound = 0;
  double value() const { return partial_sum + tail_bound; }
};
EpsilonBound epsilon_t_bound(std::uint64_t t, const PrimeTable& table, std::uint64_t cutoff = 0);

// (1/N) #{n <= N : n in B_t}.
double epsilon_t_empirical(std::uint64_t t, std::uint64_t N, const PrimeTable& table);
// Running version over a grid: max over N in grid of the empirical density.
double epsilon_t_empirical_sup(std::uint64_t t, std::span<const std::uint64_t> grid,
                               const PrimeTable& table);

}  // namespace mrtlab
