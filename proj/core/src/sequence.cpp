#include "mrtlab/sequence.hpp"

#include <sstream>

#include "mrtlab/error.hpp"

namespace mrtlab {

Turns SequenceSource::phase(std::uint64_t) const {
  throw StateError(describe() + ": source does not expose exact phases");
}

void SequenceSource::values(std::uint64_t first, std::span<std::complex<double>> out) const {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = value(first + i);
}

void SequenceSource::phases(std::uint64_t first, std::span<Turns> out) const {
  if (!has_phases()) throw StateError(describe() + ": source does not expose exact phases");
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = phase(first + i);
}

void SequenceSource::require_range(std::uint64_t last, const char* who) const {
  if (auto li = last_index(); li && *li < last) {
    std::ostringstream os;
    os << who << ": source '" << describe() << "' is defined up to " << *li << ", need " << last;
    throw ArgumentError(os.str());
  }
}

std::string RotationSource::describe() const {
  std::ostringstream os;
  os << "rotation(step=" << step_.fraction() << ")";
  return os.str();
}

Turns PhaseVectorSource::phase(std::uint64_t n) const {
  if (n < first_ || n - first_ >= phases_.size()) throw ArgumentError(label_ + ": index out of range");
  return phases_[n - first_];
}

void PhaseVectorSource::phases(std::uint64_t first, std::span<Turns> out) const {
  if (first < first_ || first - first_ + out.size() > phases_.size())
    throw ArgumentError(label_ + ": range out of bounds");
  std::copy_n(phases_.begin() + static_cast<std::ptrdiff_t>(first - first_), out.size(), out.begin());
}

std::complex<double> ComplexVectorSource::value(std::uint64_t n) const {
  if (n == 0 || n > values_.size()) throw ArgumentError(label_ + ": index out of range");
  return values_[n - 1];
}

Materialized::Materialized(const SequenceSource& src, std::uint64_t size) : label_(src.describe()) {
  src.require_range(size, "Materialized");
  if (src.has_phases()) {
    phases_.resize(size);
    src.phases(1, phases_);
    values_.resize(size);
    for (std::size_t i = 0; i < size; ++i) values_[i] = phases_[i].unit();
  } else {
    values_.resize(size);
    src.values(1, values_);
  }
}

Turns Materialized::phase(std::uint64_t n) const {
  if (phases_.empty()) throw StateError(label_ + ": no exact phases");
  return phases_.at(n - 1);
}

}  // namespace mrtlab
