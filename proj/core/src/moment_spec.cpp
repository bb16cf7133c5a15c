#include "mrtlab/moment_spec.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <tuple>

namespace mrtlab {

MomentSpec::MomentSpec(std::vector<MomentTerm> terms) {
  std::stable_sort(terms.begin(), terms.end(),
                   [](const MomentTerm& a, const MomentTerm& b) { return a.lag < b.lag; });
  for (const auto& t : terms) {
    if (!terms_.empty() && terms_.back().lag == t.lag) terms_.back().exponent += t.exponent;
    else terms_.push_back(t);
  }
  std::erase_if(terms_, [](const MomentTerm& t) { return t.exponent == 0; });
}

MomentSpec MomentSpec::from_pairs(std::initializer_list<std::pair<std::uint64_t, long>> pairs) {
  std::vector<MomentTerm> terms;
  for (auto [lag, e] : pairs) terms.push_back({lag, e});
  return MomentSpec(std::move(terms));
}

MomentSpec MomentSpec::from_lags(const std::vector<std::uint64_t>& numerator,
                                 const std::vector<std::uint64_t>& denominator) {
  std::vector<MomentTerm> terms;
  for (auto l : numerator) terms.push_back({l, 1});
  for (auto l : denominator) terms.push_back({l, -1});
  return MomentSpec(std::move(terms));
}

std::uint64_t MomentSpec::total_abs_exponent() const {
  std::uint64_t s = 0;
  for (const auto& t : terms_) s += static_cast<std::uint64_t>(std::labs(t.exponent));
  return s;
}

long MomentSpec::total_exponent() const {
  long s = 0;
  for (const auto& t : terms_) s += t.exponent;
  return s;
}

MomentSpec MomentSpec::dilated(std::uint64_t r) const {
  std::vector<MomentTerm> out = terms_;
  for (auto& t : out) t.lag *= r;
  return MomentSpec(std::move(out));
}

MomentSpec MomentSpec::shifted(std::uint64_t h) const {
  MomentSpec out = *this;
  for (auto& t : out.terms_) t.lag += h;
  return out;
}

MomentSpec MomentSpec::conjugate() const { return powered(-1); }

MomentSpec MomentSpec::powered(long ell) const {
  std::vector<MomentTerm> out = terms_;
  for (auto& t : out) t.exponent *= ell;
  return MomentSpec(std::move(out));
}

std::string MomentSpec::to_string() const {
  if (terms_.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << '*';
    os << 'Z' << terms_[i].lag;
    if (terms_[i].exponent != 1) os << '^' << terms_[i].exponent;
  }
  return os.str();
}

bool canonical_less(const MomentSpec& a, const MomentSpec& b) {
  auto key = [](const MomentSpec& s) { return std::make_tuple(s.max_lag(), s.total_abs_exponent()); };
  if (key(a) != key(b)) return key(a) < key(b);
  return std::lexicographical_compare(
      a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(),
      [](const MomentTerm& x, const MomentTerm& y) {
        return std::tie(x.lag, x.exponent) < std::tie(y.lag, y.exponent);
      });
}

}  // namespace mrtlab
