#pragma once

#include <stdexcept>
#include <string>

namespace mrtlab {

// Every failure raised by the library derives from Error. The CLI maps each
// category to its own exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied value violates an operation's precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A value lies outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A table, sieve or computation budget would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Requested accuracy cannot be certified at the permitted precision.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

// An object is missing data the operation needs.
class StateError : public Error {
 public:
  using Error::Error;
};

// A structural invariant (such as the MRT stage inequalities) is violated.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// A Kusmin-Landau certificate cannot be issued on the requested range.
class CertificateRefused : public Error {
 public:
  using Error::Error;
};

// No admissible s was found below the search cap.
class SearchExhausted : public Error {
 public:
  SearchExhausted(const std::string& what, long long best_candidate, double best_deviation)
      : Error(what), best_candidate_(best_candidate), best_deviation_(best_deviation) {}
  long long best_candidate() const { return best_candidate_; }
  // Largest |u(p) - p^{i s}| over the stage primes at best_candidate().
  double best_deviation() const { return best_deviation_; }

 private:
  long long best_candidate_;
  double best_deviation_;
};

// Filesystem or serialization failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mrtlab
