#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mrtlab {

struct MomentTerm {
  std::uint64_t lag;
  long exponent;
  friend bool operator==(const MomentTerm&, const MomentTerm&) = default;
};

// The monomial prod_k Z_{lag_k}^{exp_k} of the coordinate process, kept in
// normal form: lags strictly increasing, duplicates merged by summing their
// exponents, zero exponents dropped. The empty spec is the constant 1.
class MomentSpec {
 public:
  MomentSpec() = default;
  explicit MomentSpec(std::vector<MomentTerm> terms);
  static MomentSpec from_pairs(std::initializer_list<std::pair<std::uint64_t, long>> pairs);
  // One factor Z_l for every l in the multiset, divided by one Z_l for every
  // l in `denominator`.
  static MomentSpec from_lags(const std::vector<std::uint64_t>& numerator,
                              const std::vector<std::uint64_t>& denominator = {});

  const std::vector<MomentTerm>& terms() const { return terms_; }
  bool is_constant() const { return terms_.empty(); }
  std::uint64_t max_lag() const { return terms_.empty() ? 0 : terms_.back().lag; }
  std::uint64_t total_abs_exponent() const;
  long total_exponent() const;

  MomentSpec dilated(std::uint64_t r) const;    // lags multiplied by r
  MomentSpec shifted(std::uint64_t h) const;    // lags increased by h
  MomentSpec conjugate() const;                 // exponents negated
  MomentSpec powered(long ell) const;           // exponents multiplied by ell

  std::string to_string() const;
  friend bool operator==(const MomentSpec&, const MomentSpec&) = default;
  // (max lag, total |exponent|, lexicographic on (lag, exponent) pairs).
  friend bool canonical_less(const MomentSpec& a, const MomentSpec& b);

 private:
  std::vector<MomentTerm> terms_;
};

bool canonical_less(const MomentSpec& a, const MomentSpec& b);

}  // namespace mrtlab
