#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "symenv/errors.hpp"

namespace symenv {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on (0, 1) via Newton iteration on P_n.
inline QuadratureRule gauss_legendre01(int n) {
  if (n < 1) throw OutOfRange("quadrature needs at least one node");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

// Tensor-product integral of f over (0,1)^m; node count grows as n^m, the
// caller is responsible for keeping m small.
inline double tensor_integrate01(const std::function<double(const std::vector<double>&)>& f,
                                 int m, int nodes_per_axis) {
  const QuadratureRule rule = gauss_legendre01(nodes_per_axis);
  std::vector<int> idx(m, 0);
  std::vector<double> t(m);
  double sum = 0.0;
  while (true) {
    double w = 1.0;
    for (int i = 0; i < m; ++i) {
      t[i] = rule.nodes[idx[i]];
      w *= rule.weights[idx[i]];
    }
    sum += w * f(t);
    int axis = m - 1;
    while (axis >= 0 && ++idx[axis] == nodes_per_axis) idx[axis--] = 0;
    if (axis < 0) break;
  }
  return sum;
}

// Adaptive Simpson on [a, b]; brute-force oracle for 1-D cross-checks.
namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double eps,
                                   int depth) {
  const double m = 0.5 * (a + b);
  const double fl = f(0.5 * (a + m));
  const double fr = f(0.5 * (m + b));
  const double left = simpson(f, a, m, fa, fl, fm);
  const double right = simpson(f, m, b, fm, fr, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, fl, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, fr, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double eps = 1e-12, int max_depth = 40) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = detail::simpson(f, a, b, fa, fm, fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, eps, max_depth);
}

}  // namespace symenv
