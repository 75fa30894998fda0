#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "symenv/field.hpp"
#include "symenv/grid.hpp"
#include "symenv/projective.hpp"

namespace symenv {

// psi = ln (|z_0| .. |z_m|)^{2 a_m/(m+1)} / (|z_0|^2 + .. + |z_m|^2)^{a_m},
// homogeneous of degree zero; -inf as soon as a coordinate vanishes.
inline double eval_psi(const ProjectivePoint& p, double a_m) {
  const int m = p.shape().m;
  double log_prod = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double mod = std::abs(p.coords()[i]);
    if (mod == 0.0) return kNegInf;
    log_prod += std::log(mod);
    sum_sq += mod * mod;
  }
  return (2.0 * a_m / (m + 1)) * log_prod - a_m * std::log(sum_sq);
}

// psi-tilde = ln |z_0|^{2 a_m} / (sum |z|^2)^{a_m}; maximum 0 at [1,0,..,0].
inline double eval_psi_tilde(const ProjectivePoint& p, double a_m) {
  const double mod0 = std::abs(p.coords()[0]);
  if (mod0 == 0.0) return kNegInf;
  return a_m * (2.0 * std::log(mod0) - std::log(p.coords().squaredNorm()));
}

namespace detail {

// z'_i = zeta_h z_i, glued from the base/factor scales of the M point.
inline CVector m_prime_coords(const MPoint& p) {
  CVector zp(p.shape.m + 1);
  for (int h = 0; h < p.shape.k; ++h) {
    const CVector zh = p.base.tuple(h);
    const CVector& w = p.factors[h];
    const Complex zeta = w.dot(zh) / w.squaredNorm();
    zp.segment(h * p.shape.n, p.shape.n) = zeta * w;
  }
  return zp;
}

}  // namespace detail

// psi_M in the z' form: ln [ (sum |z'|^2)^{-k} prod |z'_i|^2
//                            / prod_h (tuple-h norm^2)^{n-1} ].
inline double eval_psi_M(const MPoint& p) {
  const TupleShape& s = p.shape;
  const CVector zp = detail::m_prime_coords(p);
  double log_val = 0.0;
  for (int i = 0; i <= s.m; ++i) {
    const double mod = std::abs(zp[i]);
    if (mod == 0.0) return kNegInf;
    log_val += 2.0 * std::log(mod);
  }
  log_val -= s.k * std::log(zp.squaredNorm());
  for (int h = 0; h < s.k; ++h)
    log_val -= (s.n - 1) * std::log(zp.segment(h * s.n, s.n).squaredNorm());
  return log_val;
}

// psi-tilde_M in the z' form; only the leading coordinate of each tuple is
// distinguished, the others may vanish.
inline double eval_psi_tilde_M(const MPoint& p) {
  const TupleShape& s = p.shape;
  const CVector zp = detail::m_prime_coords(p);
  const double total = zp.squaredNorm();
  if (total == 0.0) return kNegInf;
  const double mod0 = std::abs(zp[0]);
  if (mod0 == 0.0) return kNegInf;
  double log_val = 2.0 * s.k * std::log(mod0) - s.k * std::log(total);
  for (int h = 0; h < s.k; ++h) {
    const double lead = std::abs(zp[h * s.n]);
    if (lead == 0.0) return kNegInf;
    log_val += 2.0 * (s.n - 1) * std::log(lead);
    log_val -= (s.n - 1) * std::log(zp.segment(h * s.n, s.n).squaredNorm());
  }
  return log_val;
}

// Chart-0 expression of psi (z_0 = 1), used for Hessian identities and for
// gap evaluation through the ScalarField interface.
inline ScalarField psi_field(double a_m) {
  return ScalarField([a_m](const ChartPoint& p) {
    const int m = p.shape.m;
    double log_prod = 0.0;
    for (int i = 0; i < m; ++i) {
      const double mod = std::abs(p.affine[i]);
      if (mod == 0.0) return kNegInf;
      log_prod += std::log(mod);
    }
    return (2.0 * a_m / (m + 1)) * log_prod - a_m * std::log1p(p.affine.squaredNorm());
  });
}

// Chart expression of psi_M with z_0 = 1 (every tuple keeps a nonzero entry).
inline ScalarField psi_M_chart_field() {
  return ScalarField([](const ChartPoint& p) {
    const TupleShape& s = p.shape;
    std::vector<double> norms(s.k, 0.0);
    norms[0] = 1.0;
    double log_prod = 0.0;
    for (int i = 1; i <= s.m; ++i) {
      const double mod = std::abs(p.affine[i - 1]);
      if (mod == 0.0) return kNegInf;
      log_prod += 2.0 * std::log(mod);
      norms[s.tuple_of(i)] += mod * mod;
    }
    double v = log_prod - s.k * std::log1p(p.affine.squaredNorm());
    for (int h = 0; h < s.k; ++h) v -= (s.n - 1) * std::log(norms[h]);
    return v;
  });
}

namespace detail {

inline void require_unit_interval(const std::vector<double>& x) {
  for (double xi : x)
    if (!(xi > 0.0) || xi > 1.0) throw OutOfRange("moduli must lie in (0, 1]");
}

inline double geometric_mean(const double* xs, int count) {
  double log_sum = 0.0;
  for (int i = 0; i < count; ++i) log_sum += std::log(xs[i]);
  return std::exp(log_sum / count);
}

}  // namespace detail

// First tuple (x_1..x_{n-1}, x_0 = 1 fixed) collapsed to its geometric mean
// zeta_0 with exponent 1/(n-1); tuple h >= 1 collapsed to
// zeta_h = (x_{hn} .. x_{(h+1)n-1})^{1/n}. Products within each tuple are
// preserved. For n = 1 the first block is empty and nothing moves.
inline std::vector<double> lemma1_reduce(const std::vector<double>& x, const TupleShape& shape) {
  if (static_cast<int>(x.size()) != shape.m)
    throw ShapeMismatch("lemma1_reduce expects m moduli");
  detail::require_unit_interval(x);
  std::vector<double> out(x.size());
  if (shape.n > 1) {
    const double zeta0 = detail::geometric_mean(x.data(), shape.n - 1);
    for (int i = 0; i < shape.n - 1; ++i) out[i] = zeta0;
  }
  for (int h = 1; h < shape.k; ++h) {
    const int begin = h * shape.n - 1;  // x_i lives at index i-1
    const double zeta = detail::geometric_mean(x.data() + begin, shape.n);
    for (int i = 0; i < shape.n; ++i) out[begin + i] = zeta;
  }
  return out;
}

// gamma = (zeta_1 .. zeta_{k-1})^{1/(k-1)}
inline double lemma2_reduce(const std::vector<double>& zetas) {
  if (zetas.empty()) throw ShapeMismatch("lemma2_reduce needs at least one zeta");
  detail::require_unit_interval(zetas);
  return detail::geometric_mean(zetas.data(), static_cast<int>(zetas.size()));
}

// The sequence input -> lemma-1 point -> lemma-2 point -> all-ones target,
// with (phi - psi) recorded at every stage.
struct ReductionStage {
  std::string label;
  ProjectivePoint point;
  double gap;  // (phi - psi)(point)
};

struct ReductionTrace {
  std::vector<ReductionStage> stages;
};

namespace detail {

inline ProjectivePoint point_from_moduli(const std::vector<double>& x, const TupleShape& shape) {
  CVector z(shape.m + 1);
  z[0] = Complex(1.0, 0.0);
  for (int i = 0; i < shape.m; ++i) z[i + 1] = Complex(x[i], 0.0);
  return ProjectivePoint(z, shape);
}

}  // namespace detail

inline ReductionTrace reduction_chain(const ScalarField& f, const std::vector<double>& x,
                                      const TupleShape& shape, double a_m) {
  detail::require_unit_interval(x);
  auto gap_at = [&](const ProjectivePoint& p) {
    return eval_in_chart0(f, p) - eval_psi(p, a_m);
  };

  ReductionTrace trace;
  const ProjectivePoint input = detail::point_from_moduli(x, shape);
  trace.stages.push_back({"input", input, gap_at(input)});

  const std::vector<double> reduced = lemma1_reduce(x, shape);
  const ProjectivePoint p1 = detail::point_from_moduli(reduced, shape);
  trace.stages.push_back({"lemma1", p1, gap_at(p1)});

  std::vector<double> zetas(shape.k - 1);
  for (int h = 1; h < shape.k; ++h) zetas[h - 1] = reduced[h * shape.n - 1];
  const double gamma = lemma2_reduce(zetas);
  std::vector<double> x2(shape.m, gamma);
  if (shape.n > 1) {
    for (int i = 0; i < shape.n - 1; ++i) x2[i] = reduced[0];
  }
  const ProjectivePoint p2 = detail::point_from_moduli(x2, shape);
  trace.stages.push_back({"lemma2", p2, gap_at(p2)});

  const ProjectivePoint target = detail::point_from_moduli(std::vector<double>(shape.m, 1.0), shape);
  trace.stages.push_back({"lemma3_target", target, gap_at(target)});
  return trace;
}

struct EnvelopeReport {
  double min_gap = 0.0;
  std::vector<double> argmin;     // moduli of the worst grid point
  long monotone_violations = 0;   // stage value increases beyond tol
  long points_scanned = 0;
  GridSpec grid;
  TupleShape shape;
};

// Scan (phi - psi) over the moduli grid and check that the reduction chain
// is non-increasing at every point. Success: min_gap >= -tol, no violations.
inline EnvelopeReport verify_envelope(const ScalarField& f, const TupleShape& shape, double a_m,
                                      const GridSpec& grid, double tol = 1e-7) {
  EnvelopeReport report{.min_gap = std::numeric_limits<double>::infinity(),
                        .argmin = {},
                        .monotone_violations = 0,
                        .points_scanned = 0,
                        .grid = grid,
                        .shape = shape};
  for_each_grid_point(grid, shape.m, [&](const std::vector<double>& x) {
    const ReductionTrace trace = reduction_chain(f, x, shape, a_m);
    ++report.points_scanned;
    const double gap = trace.stages.front().gap;
    if (gap < report.min_gap) {  // strict: lowest lexicographic index wins ties
      report.min_gap = gap;
      report.argmin = x;
    }
    for (std::size_t i = 1; i < trace.stages.size(); ++i)
      if (trace.stages[i].gap > trace.stages[i - 1].gap + tol) ++report.monotone_violations;
  });
  return report;
}

// (phi - psi) at [1,..,1]; >= 0 for admissible invariant sup-normalized phi.
inline double verify_center_bound(const ScalarField& f, const TupleShape& shape, double a_m) {
  const ProjectivePoint ones =
      detail::point_from_moduli(std::vector<double>(shape.m, 1.0), shape);
  return eval_in_chart0(f, ones) - eval_psi(ones, a_m);
}

}  // namespace symenv
