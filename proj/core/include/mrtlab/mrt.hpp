#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mrtlab/prime_arith.hpp"
#include "mrtlab/sequence.hpp"
#include "mrtlab/turns.hpp"

namespace mrtlab {

struct MrtStage {
  std::uint64_t t = 0;
  std::uint64_t s = 0;  // unused (0) for the first stage
  friend bool operator==(const MrtStage&, const MrtStage&) = default;
};

struct TPolicy {
  enum class Kind { square, explicit_value, exponent };
  Kind kind = Kind::square;
  std::uint64_t value = 0;  // explicit_value
  unsigned exponent = 2;    // exponent
  friend bool operator==(const TPolicy&, const TPolicy&) = default;
};

struct MrtParams {
  std::vector<MrtStage> stages;
  bool aperiodic_mode = false;
  TPolicy policy;
  // Stage-1 prime values u(p), p <= t_1, as phases; primes not listed get u(p) = 1.
  std::map<std::uint64_t, Turns> initial_values;

  // t_m < s_{m+1}, s_{m+1}^2 <= t_{m+1}, (t_m) and (s_m) strictly increasing.
  // Throws InvariantError naming the offending stage.
  void validate() const;
  std::string to_json() const;
  static MrtParams from_json(const std::string& text);
  friend bool operator==(const MrtParams&, const MrtParams&) = default;
};

// A completely multiplicative u: N -> S^1 given by its phases at primes
// p <= t_M for the last stage M. Immutable; extend_stage returns a new value.
class MrtFunction {
 public:
  // Stage 1 only: t_1 >= 2 and u(p) from params.initial_values.
  static MrtFunction initial(std::uint64_t t1, std::shared_ptr<const PrimeTable> table,
                             std::map<std::uint64_t, Turns> initial_values = {},
                             bool aperiodic_mode = false, TPolicy policy = {});

  const MrtParams& params() const { return params_; }
  const PrimeTable& table() const { return *table_; }
  std::shared_ptr<const PrimeTable> table_ptr() const { return table_; }
  std::size_t stage_count() const { return params_.stages.size(); }
  // 1-based stage accessors.
  std::uint64_t t(std::size_t m) const { return params_.stages.at(m - 1).t; }
  std::uint64_t s(std::size_t m) const { return params_.stages.at(m - 1).s; }
  std::uint64_t last_t() const { return params_.stages.back().t; }

  // Stored primes p <= last_t() in increasing order with their phases.
  std::span<const std::uint32_t> primes() const;
  std::span<const Turns> prime_phases() const { return phases_; }
  Turns prime_phase(std::uint64_t p) const;

  // Phase of u(n) = sum alpha_p(n) phase(u(p)), exact mod 1.
  Turns phase(std::uint64_t n) const;
  std::complex<double> value(std::uint64_t n) const { return phase(n).unit(); }

  // "p hex-phase" lines, one per stored prime.
  std::string prime_values_text() const;
  // Rebuilds from params plus a verified prime-value cache.
  static MrtFunction from_cache(const MrtParams& params, std::shared_ptr<const PrimeTable> table,
                                const std::string& prime_values_text);

 private:
  friend MrtFunction extend_stage(const MrtFunction&, std::uint64_t, std::uint64_t);
  MrtParams params_;
  std::shared_ptr<const PrimeTable> table_;
  std::vector<Turns> phases_;  // aligned with table_->primes()
};

// Smallest s in (t_m, search_cap] (s > e^{t_m} in aperiodic mode) with
// |u(p) - p^{is}| < 1/t_m^2 for every prime p <= t_m. Throws SearchExhausted
// with the best candidate otherwise.
std::uint64_t find_next_s(const MrtFunction& fn, std::uint64_t search_cap);

std::uint64_t next_t(std::uint64_t s_next, const TPolicy& policy);

// Appends stage (new_t, s_next) and sets u(p) = p^{i s_next} for t_m < p <= new_t.
MrtFunction extend_stage(const MrtFunction& fn, std::uint64_t new_t, std::uint64_t s_next);

// Runs find_next_s / next_t / extend_stage `stages - 1` times from t_1.
MrtFunction build_mrt(std::uint64_t t1, std::size_t stages, std::shared_ptr<const PrimeTable> table,
                      std::uint64_t search_cap, const MrtParams& base = {});

// max_{p <= t_m} |u(p) - p^{i s_{m+1}}|.
double stage_prime_deviation(const MrtFunction& fn, std::size_t m);

// Fraction of n <= N with |u(n) - n^{i s_{m+1}}| > 1/t_m; N <= t_{m+1}.
double surrogate_discrepancy(const MrtFunction& fn, std::size_t m, std::uint64_t N);
// (1/N) sum_{n <= N} |u(n) - n^{i s_{m+1}}|.
double mean_surrogate_deviation(const MrtFunction& fn, std::size_t m, std::uint64_t N);

class MrtSequence final : public SequenceSource {
 public:
  explicit MrtSequence(std::shared_ptr<const MrtFunction> fn) : fn_(std::move(fn)) {}
  std::complex<double> value(std::uint64_t n) const override { return fn_->value(n); }
  bool has_phases() const override { return true; }
  Turns phase(std::uint64_t n) const override { return fn_->phase(n); }
  std::optional<std::uint64_t> last_index() const override { return fn_->table().limit(); }
  std::string describe() const override;
  void phases(std::uint64_t first, std::span<Turns> out) const override;

 private:
  std::shared_ptr<const MrtFunction> fn_;
};

// n^{is}, the Archimedean character that u tracks on the active stage.
class SurrogateFunction final : public SequenceSource {
 public:
  explicit SurrogateFunction(std::uint64_t s, std::optional<std::uint64_t> last = std::nullopt)
      : s_(s), last_(last) {}
  std::uint64_t s() const { return s_; }
  std::complex<double> value(std::uint64_t n) const override { return phase(n).unit(); }
  bool has_phases() const override { return true; }
  Turns phase(std::uint64_t n) const override;
  std::optional<std::uint64_t> last_index() const override { return last_; }
  std::string describe() const override;
  void phases(std::uint64_t first, std::span<Turns> out) const override;

 private:
  std::uint64_t s_;
  std::optional<std::uint64_t> last_;
};

}  // namespace mrtlab
