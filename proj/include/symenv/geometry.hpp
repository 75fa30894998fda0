#pragma once

#include <cmath>
#include <vector>

#include "symenv/hermitian.hpp"

namespace symenv {

// Metric choices: a_m times the Fubini-Study metric on P_m, or the product
// metric on M with the Chern-class weights a_{m_0} = k, a_{m_1..k} = n-1.
struct MetricSpec {
  enum class Kind { FubiniStudy, ProductM };
  Kind kind;
  TupleShape shape;
  double a_m;  // FS scale; a_m = m+1 puts g in the first Chern class

  static MetricSpec fubini_study(const TupleShape& s, double a) {
    if (a <= 0.0) throw DomainError("a_m must be positive");
    return MetricSpec{Kind::FubiniStudy, s, a};
  }
  static MetricSpec product_m(const TupleShape& s) {
    return MetricSpec{Kind::ProductM, s, static_cast<double>(s.m + 1)};
  }
};

// a_m * ln(1 + sum |z|^2)
inline double fs_potential(const ChartPoint& p, double a_m) {
  return a_m * std::log1p(p.affine.squaredNorm());
}

inline ScalarField fs_potential_field(double a_m) {
  return ScalarField([a_m](const ChartPoint& p) { return fs_potential(p, a_m); });
}

// Closed form a_m [ delta_{lu} / (1+|z|^2) - zbar_l z_u / (1+|z|^2)^2 ].
inline HermitianForm fs_metric(const ChartPoint& p, double a_m) {
  const int m = p.shape.m;
  const double s = 1.0 + p.affine.squaredNorm();
  Eigen::MatrixXcd g(m, m);
  for (int l = 0; l < m; ++l)
    for (int u = 0; u < m; ++u) {
      Complex v = -std::conj(p.affine[l]) * p.affine[u] / (s * s);
      if (l == u) v += 1.0 / s;
      g(l, u) = a_m * v;
    }
  return HermitianForm(std::move(g));
}

// g(p) + complex Hessian of f at p positive definite.
inline HermitianForm metric_at(const MetricSpec& metric, const ChartPoint& p);

inline bool admissibility(const ScalarField& f, const ChartPoint& p, const MetricSpec& metric,
                          double tol = 1e-8) {
  return is_positive_definite(metric_at(metric, p) + complex_hessian(f, p), tol);
}

namespace detail {

// Squared norms of the n-tuples in the chart z_0 = 1 (tuple 0 includes the 1).
inline std::vector<double> tuple_norms_chart0(const ChartPoint& p) {
  if (p.chart_index != 0) throw ShapeMismatch("M-chart formulas assume the chart z_0 = 1");
  const TupleShape& s = p.shape;
  std::vector<double> norms(s.k, 0.0);
  norms[0] = 1.0;
  for (int i = 1; i <= s.m; ++i) norms[s.tuple_of(i)] += std::norm(p.affine[i - 1]);
  return norms;
}

}  // namespace detail

// k ln(1+sum|z|^2) + (n-1) sum_h ln(tuple-h norm^2), chart z_0 = 1.
inline double gM_potential(const ChartPoint& p) {
  const TupleShape& s = p.shape;
  const std::vector<double> norms = detail::tuple_norms_chart0(p);
  double v = s.k * std::log1p(p.affine.squaredNorm());
  for (int h = 0; h < s.k; ++h) {
    if (norms[h] == 0.0) throw ZeroTuple(h);
    v += (s.n - 1) * std::log(norms[h]);
  }
  return v;
}

inline ScalarField gM_potential_field() {
  return ScalarField([](const ChartPoint& p) { return gM_potential(p); });
}

// Numerical Hessian of the potential; the closed-form determinant below is
// the independent cross-check.
inline HermitianForm gM_metric(const ChartPoint& p) {
  return complex_hessian(gM_potential_field(), p);
}

// det g^M = k^{k-1} prod_h [(n-1)(1+|z|^2) + k S_h]^{n-1}
//           / [ (1+|z|^2)^{m+1} prod_h S_h^{n-1} ],   z_0 = 1.
inline double gM_det_formula(const ChartPoint& p) {
  const TupleShape& s = p.shape;
  const std::vector<double> norms = detail::tuple_norms_chart0(p);
  const double total = 1.0 + p.affine.squaredNorm();
  double log_det = (s.k - 1) * std::log(static_cast<double>(s.k));
  for (int h = 0; h < s.k; ++h) {
    if (norms[h] == 0.0) throw ZeroTuple(h);
    log_det += (s.n - 1) * (std::log((s.n - 1) * total + s.k * norms[h]) - std::log(norms[h]));
  }
  log_det -= (s.m + 1) * std::log(total);
  return std::exp(log_det);
}

inline HermitianForm metric_at(const MetricSpec& metric, const ChartPoint& p) {
  if (metric.kind == MetricSpec::Kind::FubiniStudy) return fs_metric(p, metric.a_m);
  return gM_metric(p);
}

// Volume density 1/(1+sum|z|^2)^{m+1} relative to Lebesgue measure in the
// chart, constant wedge factors dropped (everything downstream uses ratios).
inline double fs_volume_density(const ChartPoint& p, int m) {
  return std::exp(-(m + 1) * std::log1p(p.affine.squaredNorm()));
}

}  // namespace symenv
