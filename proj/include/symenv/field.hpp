#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include "symenv/projective.hpp"

namespace symenv {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Real function of chart coordinates, possibly -inf (a value, not an error).
// Evaluation must be deterministic: same point, bit-identical result.
class ScalarField {
 public:
  using Eval = std::function<double(const ChartPoint&)>;

  ScalarField() = default;
  explicit ScalarField(Eval eval) : eval_(std::move(eval)) {}

  double operator()(const ChartPoint& p) const { return eval_(p); }

  static ScalarField constant(double c) {
    return ScalarField([c](const ChartPoint&) { return c; });
  }

  ScalarField scaled(double a) const {
    Eval f = eval_;
    return ScalarField([f, a](const ChartPoint& p) { return a * f(p); });
  }

  ScalarField shifted(double c) const {
    Eval f = eval_;
    return ScalarField([f, c](const ChartPoint& p) { return f(p) + c; });
  }

 private:
  Eval eval_;
};

// Evaluate a chart-0 field at a projective point.
inline double eval_in_chart0(const ScalarField& f, const ProjectivePoint& p) {
  try {
    return f(to_chart(p, 0));
  } catch (const ChartUndefined& e) {
    throw EvaluationFailed(e.what());
  }
}

// Max |f(q) - f(p)| over a random orbit sample; the caller compares to its
// own tolerance.
inline double check_invariance(const ScalarField& f, const ProjectivePoint& p, int count,
                               std::uint64_t seed) {
  const double base = eval_in_chart0(f, p);
  double worst = 0.0;
  for (const ProjectivePoint& q : orbit_sample(p, count, seed))
    worst = std::max(worst, std::abs(eval_in_chart0(f, q) - base));
  return worst;
}

}  // namespace symenv
