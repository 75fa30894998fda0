#pragma once

#include <cmath>
#include <vector>

#include "symenv/envelope.hpp"
#include "symenv/geometry.hpp"
#include "symenv/grid.hpp"

namespace symenv {

// Smooth, G_{n,k}-invariant, g-admissible fields with sup = 0: the hypothesis
// class of the envelope theorem. Both families depend on the coordinates only
// through symmetric expressions in the |z_i|^2, so invariance holds by
// construction.
struct TestFunctionSpec {
  enum class Family { power_ratio, tuple_norm_mix };
  Family family = Family::power_ratio;
  int degree = 2;                  // power_ratio: exponent d >= 2
  std::vector<double> weights;     // tuple_norm_mix: weight of exponent j+2
  double epsilon = 0.1;            // overall scale
  TupleShape shape{2, 2};
  double a_m = 4.0;
};

// The unscaled profile F; phi_eps = eps * F, with sup F = 0 attained where a
// single coordinate (resp. tuple) carries all the mass.
inline ScalarField base_profile(const TestFunctionSpec& spec) {
  if (spec.family == TestFunctionSpec::Family::power_ratio) {
    const int d = spec.degree;
    if (d < 2) throw InvalidSpec("power_ratio needs degree >= 2");
    return ScalarField([d](const ChartPoint& p) {
      double sum_pow = 1.0;  // |z_0|^{2d} with z_0 = 1
      for (int i = 0; i < p.shape.m; ++i) sum_pow += std::pow(std::norm(p.affine[i]), d);
      return std::log(sum_pow) - d * std::log1p(p.affine.squaredNorm());
    });
  }
  const std::vector<double> w = spec.weights;
  if (w.empty()) throw InvalidSpec("tuple_norm_mix needs at least one weight");
  for (double wi : w)
    if (wi < 0.0) throw InvalidSpec("tuple_norm_mix weights must be non-negative");
  return ScalarField([w](const ChartPoint& p) {
    const TupleShape& s = p.shape;
    std::vector<double> norms(s.k, 0.0);
    norms[0] = 1.0;
    for (int i = 1; i <= s.m; ++i) norms[s.tuple_of(i)] += std::norm(p.affine[i - 1]);
    const double total = 1.0 + p.affine.squaredNorm();
    double v = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double power = static_cast<double>(j) + 2.0;
      double sum_pow = 0.0;
      for (int h = 0; h < s.k; ++h) sum_pow += std::pow(norms[h], power);
      v += w[j] * (std::log(sum_pow) - power * std::log(total));
    }
    return v;
  });
}

inline ScalarField make_test_function(const TestFunctionSpec& spec) {
  if (spec.epsilon < 0.0) throw InvalidSpec("epsilon must be >= 0");
  if (spec.epsilon == 0.0) return ScalarField::constant(0.0);
  return base_profile(spec).scaled(spec.epsilon);
}

namespace detail {

inline ChartPoint moduli_chart_point(const std::vector<double>& x, const TupleShape& shape) {
  CVector aff(shape.m);
  for (int i = 0; i < shape.m; ++i) aff[i] = Complex(x[i], 0.0);
  return ChartPoint(0, std::move(aff), shape);
}

}  // namespace detail

// Largest eps (from a bisection lattice) such that g + eps * Hess(F) keeps a
// 5% eigenvalue margin over g alone at every grid point. The margin buys
// grid-to-manifold generalization headroom.
inline double calibrate_admissible(const ScalarField& field, const MetricSpec& metric,
                                   const GridSpec& grid, double margin = 0.05) {
  struct PointData {
    Eigen::MatrixXcd g;
    Eigen::MatrixXcd hess;
    double floor;  // margin * min eig of g
  };
  std::vector<PointData> points;
  for_each_grid_point(grid, metric.shape.m, [&](const std::vector<double>& x) {
    const ChartPoint p = detail::moduli_chart_point(x, metric.shape);
    const HermitianForm g = metric_at(metric, p);
    const HermitianForm h = complex_hessian(field, p);
    points.push_back({g.entries(), h.entries(), margin * g.min_eigenvalue()});
  });

  auto feasible = [&points](double eps) {
    for (const PointData& pd : points) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pd.g + eps * pd.hess,
                                                         Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < pd.floor) return false;
    }
    return true;
  };

  if (!feasible(0.0)) throw NeverAdmissible();
  double lo = 0.0, hi = 1.0;
  while (feasible(hi) && hi < 1024.0) {
    lo = hi;
    hi *= 2.0;
  }
  if (hi >= 1024.0) return lo;  // effectively unconstrained (e.g. zero field)
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

struct NormalizedField {
  ScalarField field;
  double sup_estimate;
  std::vector<double> arg_sup;  // moduli of the refined maximizer
};

// Subtract the numerically estimated sup. Invariance reduces the search to
// the full moduli cube [0, 1]^m (smooth fields are fine at zero moduli, so
// the search is not restricted to the envelope grid's [delta, 1]); a
// coordinate-wise golden-section pass refines the best grid point.
inline NormalizedField normalize_sup(const ScalarField& field, const TupleShape& shape,
                                     const GridSpec& grid) {
  double best = kNegInf;
  std::vector<double> arg(shape.m, 0.0);
  std::vector<double> linear_axis(grid.points_per_axis);
  for (int j = 0; j < grid.points_per_axis; ++j)
    linear_axis[j] = static_cast<double>(j) / (grid.points_per_axis - 1);
  {
    std::vector<int> idx(shape.m, 0);
    std::vector<double> x(shape.m);
    while (true) {
      for (int i = 0; i < shape.m; ++i) x[i] = linear_axis[idx[i]];
      const double v = field(detail::moduli_chart_point(x, shape));
      if (v > best) {
        best = v;
        arg = x;
      }
      int axis = shape.m - 1;
      while (axis >= 0 && ++idx[axis] == grid.points_per_axis) idx[axis--] = 0;
      if (axis < 0) break;
    }
  }

  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  auto eval_at = [&](const std::vector<double>& x) {
    return field(detail::moduli_chart_point(x, shape));
  };
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (int axis = 0; axis < shape.m; ++axis) {
      double a = 0.0, b = 1.0;
      std::vector<double> x = arg;
      for (int iter = 0; iter < 60; ++iter) {
        const double c = b - inv_phi * (b - a);
        const double d = a + inv_phi * (b - a);
        x[axis] = c;
        const double fc = eval_at(x);
        x[axis] = d;
        const double fd = eval_at(x);
        if (fc > fd)
          b = d;
        else
          a = c;
      }
      arg[axis] = 0.5 * (a + b);
      best = std::max(best, eval_at(arg));
    }
  }
  return {field.shifted(-best), best, arg};
}

}  // namespace symenv
