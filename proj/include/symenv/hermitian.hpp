#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "symenv/field.hpp"
#include "symenv/projective.hpp"

namespace symenv {

// m x m complex Hermitian matrix (metric or complex-Hessian values).
class HermitianForm {
 public:
  explicit HermitianForm(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols())
      throw ShapeMismatch("Hermitian form must be square");
  }

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }

  // entries[l][u] == conj(entries[u][l]) within 1e-10 of the larger magnitude.
  bool is_hermitian(double tol = 1e-10) const {
    for (int i = 0; i < dim(); ++i)
      for (int j = i; j < dim(); ++j) {
        const Complex a = entries_(i, j);
        const Complex b = std::conj(entries_(j, i));
        const double scale = std::max({std::abs(a), std::abs(b), 1.0});
        if (std::abs(a - b) > tol * scale) return false;
      }
    return true;
  }

  HermitianForm symmetrized() const {
    return HermitianForm(0.5 * (entries_ + entries_.adjoint().eval()));
  }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  HermitianForm operator+(const HermitianForm& o) const {
    return HermitianForm(entries_ + o.entries_);
  }

 private:
  Eigen::MatrixXcd entries_;
};

// true iff smallest eigenvalue > tol * (1 + |trace|).
inline bool is_positive_definite(const HermitianForm& h, double tol = 1e-8) {
  if (!h.is_hermitian()) throw NotHermitian();
  return h.min_eigenvalue() > tol * (1.0 + std::abs(h.entries().trace()));
}

namespace detail {

inline ChartPoint perturb(const ChartPoint& p, int real_axis, double delta) {
  // real coordinates interleaved as (u_1, v_1, .., u_m, v_m) with z = u + iv
  CVector aff = p.affine;
  const int j = real_axis / 2;
  if (real_axis % 2 == 0)
    aff[j] += Complex(delta, 0.0);
  else
    aff[j] += Complex(0.0, delta);
  return ChartPoint(p.chart_index, std::move(aff), p.shape);
}

inline double sample(const ScalarField& f, const ChartPoint& p) {
  const double v = f(p);
  if (!std::isfinite(v)) throw NonFiniteSample("stencil evaluation not finite");
  return v;
}

}  // namespace detail

// Central finite differences in the real coordinates z = u + iv combined as
//   d^2 f / dz_l dzbar_u = 1/4 [ (f_{u_l u_u} + f_{v_l v_u})
//                              + i (f_{u_l v_u} - f_{v_l u_u}) ].
// The raw stencil breaks Hermitian symmetry at rounding level, so the result
// is symmetrized with its conjugate transpose.
inline HermitianForm complex_hessian(const ScalarField& f, const ChartPoint& p,
                                     double step = 0.0) {
  const int m = p.shape.m;
  if (step <= 0.0) step = 1e-4 * (1.0 + p.affine.lpNorm<Eigen::Infinity>());
  const double f0 = detail::sample(f, p);
  const int d = 2 * m;
  Eigen::MatrixXd real_hess(d, d);
  for (int a = 0; a < d; ++a) {
    const double fpp = detail::sample(f, detail::perturb(p, a, step));
    const double fmm = detail::sample(f, detail::perturb(p, a, -step));
    real_hess(a, a) = (fpp - 2.0 * f0 + fmm) / (step * step);
    for (int b = a + 1; b < d; ++b) {
      const double fab = detail::sample(f, detail::perturb(detail::perturb(p, a, step), b, step));
      const double fa_b = detail::sample(f, detail::perturb(detail::perturb(p, a, step), b, -step));
      const double f_ab = detail::sample(f, detail::perturb(detail::perturb(p, a, -step), b, step));
      const double f_a_b =
          detail::sample(f, detail::perturb(detail::perturb(p, a, -step), b, -step));
      const double mixed = (fab - fa_b - f_ab + f_a_b) / (4.0 * step * step);
      real_hess(a, b) = mixed;
      real_hess(b, a) = mixed;
    }
  }
  Eigen::MatrixXcd h(m, m);
  for (int l = 0; l < m; ++l)
    for (int u = 0; u < m; ++u) {
      const double re = real_hess(2 * l, 2 * u) + real_hess(2 * l + 1, 2 * u + 1);
      const double im = real_hess(2 * l, 2 * u + 1) - real_hess(2 * l + 1, 2 * u);
      h(l, u) = 0.25 * Complex(re, im);
    }
  return HermitianForm(std::move(h)).symmetrized();
}

}  // namespace symenv
