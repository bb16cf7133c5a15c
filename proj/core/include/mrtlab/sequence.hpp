#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrtlab/turns.hpp"

namespace mrtlab {

// Pull-based access to an arithmetic function u(1), u(2), ... MRT functions,
// surrogates n^{is}, nu_d sample paths and synthetic test sequences all sit
// behind this interface. Sources that know u(n) = e^{2 pi i theta_n} exactly
// report the phase, which keeps multiplicative identities exact downstream.
class SequenceSource {
 public:
  virtual ~SequenceSource() = default;

  virtual std::complex<double> value(std::uint64_t n) const = 0;
  virtual bool has_phases() const { return false; }
  // Requires has_phases().
  virtual Turns phase(std::uint64_t n) const;
  // Largest valid index, or nullopt for unbounded sources.
  virtual std::optional<std::uint64_t> last_index() const { return std::nullopt; }
  virtual std::string describe() const = 0;

  // Bulk access: out[i] = u(first + i). Sources override these when a range
  // can be produced faster than pointwise.
  virtual void values(std::uint64_t first, std::span<std::complex<double>> out) const;
  virtual void phases(std::uint64_t first, std::span<Turns> out) const;

  // Throws ArgumentError unless u is defined on [1, last].
  void require_range(std::uint64_t last, const char* who) const;
};

// u(n) = e^{2 pi i (offset + n * step)}; constant when step = 0, (-1)^n when
// step = 1/2.
class RotationSource final : public SequenceSource {
 public:
  RotationSource(Turns step, Turns offset = Turns()) : step_(step), offset_(offset) {}
  static RotationSource constant_one() { return RotationSource(Turns()); }
  static RotationSource alternating() { return RotationSource(Turns(u128(1) << 127)); }

  std::complex<double> value(std::uint64_t n) const override { return phase(n).unit(); }
  bool has_phases() const override { return true; }
  Turns phase(std::uint64_t n) const override { return offset_ + n * step_; }
  std::string describe() const override;

 private:
  Turns step_;
  Turns offset_;
};

// Materialized phases for u(first), ..., u(first + size - 1), first = 1 by
// default. Sample paths of nu_d are stored this way with Z_k = u(k + 1).
class PhaseVectorSource final : public SequenceSource {
 public:
  explicit PhaseVectorSource(std::vector<Turns> phases, std::uint64_t first = 1, std::string label = "phases")
      : phases_(std::move(phases)), first_(first), label_(std::move(label)) {}

  std::complex<double> value(std::uint64_t n) const override { return phase(n).unit(); }
  bool has_phases() const override { return true; }
  Turns phase(std::uint64_t n) const override;
  std::optional<std::uint64_t> last_index() const override { return first_ + phases_.size() - 1; }
  std::string describe() const override { return label_; }
  void phases(std::uint64_t first, std::span<Turns> out) const override;
  const std::vector<Turns>& data() const { return phases_; }

 private:
  std::vector<Turns> phases_;
  std::uint64_t first_;
  std::string label_;
};

// Arbitrary complex values (not necessarily unimodular), u(1..size).
class ComplexVectorSource final : public SequenceSource {
 public:
  explicit ComplexVectorSource(std::vector<std::complex<double>> values, std::string label = "values")
      : values_(std::move(values)), label_(std::move(label)) {}
  std::complex<double> value(std::uint64_t n) const override;
  std::optional<std::uint64_t> last_index() const override { return values_.size(); }
  std::string describe() const override { return label_; }

 private:
  std::vector<std::complex<double>> values_;
  std::string label_;
};

// Wraps a callable u(n).
class FunctionSource final : public SequenceSource {
 public:
  FunctionSource(std::function<std::complex<double>(std::uint64_t)> f, std::string label)
      : f_(std::move(f)), label_(std::move(label)) {}
  std::complex<double> value(std::uint64_t n) const override { return f_(n); }
  std::string describe() const override { return label_; }

 private:
  std::function<std::complex<double>(std::uint64_t)> f_;
  std::string label_;
};

// Values (and phases when available) of u on [1, size], materialized once so
// repeated statistics do not re-evaluate an expensive source.
class Materialized final : public SequenceSource {
 public:
  Materialized(const SequenceSource& src, std::uint64_t size);

  std::complex<double> value(std::uint64_t n) const override { return values_.at(n - 1); }
  bool has_phases() const override { return !phases_.empty(); }
  Turns phase(std::uint64_t n) const override;
  std::optional<std::uint64_t> last_index() const override { return values_.size(); }
  std::string describe() const override { return label_; }
  std::span<const std::complex<double>> value_span() const { return values_; }
  std::span<const Turns> phase_span() const { return phases_; }

 private:
  std::vector<std::complex<double>> values_;
  std::vector<Turns> phases_;
  std::string label_;
};

}  // namespace mrtlab
