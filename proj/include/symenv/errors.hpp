#pragma once

#include <stdexcept>
#include <string>

namespace symenv {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AllZero : Error {
  AllZero() : Error("all homogeneous coordinates are zero") {}
};

struct ShapeMismatch : Error {
  explicit ShapeMismatch(const std::string& what) : Error(what) {}
};

struct ChartUndefined : Error {
  explicit ChartUndefined(int chart)
      : Error("coordinate z_" + std::to_string(chart) + " vanishes; chart undefined") {}
};

struct CrossTupleSwap : Error {
  CrossTupleSwap(int p, int q)
      : Error("gamma(" + std::to_string(p) + "," + std::to_string(q) +
              ") spans two different n-tuples") {}
};

struct InvalidCount : Error {
  explicit InvalidCount(const std::string& what) : Error(what) {}
};

struct EvaluationFailed : Error {
  explicit EvaluationFailed(const std::string& what) : Error(what) {}
};

struct ZeroTuple : Error {
  explicit ZeroTuple(int h)
      : Error("tuple " + std::to_string(h) + " is entirely zero") {}
};

struct NonFiniteSample : Error {
  explicit NonFiniteSample(const std::string& what) : Error(what) {}
};

struct NotHermitian : Error {
  NotHermitian() : Error("matrix violates the Hermitian symmetry invariant") {}
};

struct OutOfRange : Error {
  explicit OutOfRange(const std::string& what) : Error(what) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(what) {}
};

struct AlphaOutOfRange : Error {
  explicit AlphaOutOfRange(double alpha)
      : Error("alpha = " + std::to_string(alpha) + " outside required range") {}
};

struct InvalidSpec : Error {
  explicit InvalidSpec(const std::string& what) : Error(what) {}
};

struct NeverAdmissible : Error {
  NeverAdmissible()
      : Error("admissibility fails even at epsilon = 0; metric is not positive") {}
};

struct UnsupportedDimension : Error {
  explicit UnsupportedDimension(const std::string& what) : Error(what) {}
};

}  // namespace symenv
