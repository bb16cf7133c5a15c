#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace mrtlab {

// Neumaier-compensated accumulator for real and imaginary parts.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

class ComplexSum {
 public:
  void add(std::complex<double> z) { re_.add(z.real()); im_.add(z.imag()); }
  void add(const ComplexSum& other) { add(other.value()); }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

// Plain accumulation over runs of 128 terms, each run flushed into a
// compensated total: nearly the accuracy of ComplexSum at a fraction of the cost.
class BatchedComplexSum {
 public:
  void add(std::complex<double> z) {
    re_ += z.real();
    im_ += z.imag();
    if (++count_ == 128) flush();
  }
  std::complex<double> value() const {
    ComplexSum t = total_;
    t.add({re_, im_});
    return t.value();
  }
  ComplexSum sum() const {
    ComplexSum t = total_;
    t.add({re_, im_});
    return t;
  }

 private:
  void flush() {
    total_.add({re_, im_});
    re_ = im_ = 0;
    count_ = 0;
  }
  ComplexSum total_;
  double re_ = 0, im_ = 0;
  int count_ = 0;
};

// Range parallelism with a chunk partition that depends only on the range and
// chunk size, never on the thread count; per-chunk results are merged in
// chunk order, so reductions are bit-identical for any number of threads.
struct ParallelOptions {
  unsigned threads = 1;
  bool reproducible = true;
  std::uint64_t chunk = 1ULL << 16;
};

// Calls body(chunk_index, first, last) for consecutive chunks covering
// [first, last] and returns the results in chunk order.
template <class R>
std::vector<R> chunked_map(std::uint64_t first, std::uint64_t last, const ParallelOptions& opt,
                           const std::function<R(std::size_t, std::uint64_t, std::uint64_t)>& body) {
  std::vector<R> out;
  if (last < first) return out;
  const std::uint64_t chunk = std::max<std::uint64_t>(1, opt.chunk);
  const std::uint64_t count = (last - first) / chunk + 1;
  out.resize(count);
  auto run = [&](std::uint64_t c) {
    const std::uint64_t a = first + c * chunk;
    const std::uint64_t b = std::min(last, a + chunk - 1);
    out[c] = body(c, a, b);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(count)));
  if (threads == 1) {
    for (std::uint64_t c = 0; c < count; ++c) run(c);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::uint64_t c = t; c < count; c += threads) run(c);
    });
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace mrtlab
