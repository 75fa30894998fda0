#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <variant>
#include <vector>

#include "symenv/errors.hpp"

namespace symenv {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;

// m = k*n - 1 with the homogeneous coordinates grouped into k n-tuples
// Z_h = (z_{hn}, .., z_{(h+1)n-1}).
struct TupleShape {
  int n;
  int k;
  int m;

  TupleShape(int n_, int k_) : n(n_), k(k_), m(k_ * n_ - 1) {
    if (n < 1) throw ShapeMismatch("tuple length n must be >= 1");
    if (k < 2) throw ShapeMismatch("k must be >= 2 (k = 1 gives the trivial group)");
    // Exponent identity of the M construction: k/(m+1) + (n-1)/n = 1,
    // i.e. k*n + (n-1)*(m+1) = n*(m+1) in integers.
    if (k * n + (n - 1) * (m + 1) != n * (m + 1))
      throw ShapeMismatch("exponent identity k/(m+1) + (n-1)/n = 1 violated");
  }

  int tuple_of(int coord) const { return coord / n; }

  bool operator==(const TupleShape& o) const { return n == o.n && k == o.k; }
};

namespace detail {

// Index of the largest-modulus entry; first index wins ties.
inline Eigen::Index pivot_index(const CVector& v) {
  Eigen::Index best = 0;
  double best_mod = std::abs(v[0]);
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    const double mod = std::abs(v[i]);
    if (mod > best_mod) {
      best = i;
      best_mod = mod;
    }
  }
  return best;
}

// Canonical scale: divide by the largest-modulus coordinate. The pivot
// entry becomes exactly 1, which also fixes the global phase.
inline CVector normalize_projective(const CVector& v) {
  const Eigen::Index piv = pivot_index(v);
  if (v[piv] == Complex(0.0, 0.0)) throw AllZero();
  return v / v[piv];
}

}  // namespace detail

// Point of P_m(C) stored as a canonically scaled homogeneous vector.
class ProjectivePoint {
 public:
  ProjectivePoint(const CVector& coords, const TupleShape& shape) : shape_(shape) {
    if (coords.size() != shape.m + 1)
      throw ShapeMismatch("expected " + std::to_string(shape.m + 1) +
                          " homogeneous coordinates, got " + std::to_string(coords.size()));
    coords_ = detail::normalize_projective(coords);
  }

  const CVector& coords() const { return coords_; }
  const TupleShape& shape() const { return shape_; }

  CVector tuple(int h) const { return coords_.segment(h * shape_.n, shape_.n); }

 private:
  TupleShape shape_;
  CVector coords_;
};

inline ProjectivePoint make_point(const CVector& coords, const TupleShape& shape) {
  return ProjectivePoint(coords, shape);
}

// Affine coordinates z_lambda / z_chart, the chart coordinate itself omitted.
struct ChartPoint {
  int chart_index;
  CVector affine;  // length m
  TupleShape shape;

  ChartPoint(int chart, CVector aff, const TupleShape& s)
      : chart_index(chart), affine(std::move(aff)), shape(s) {
    if (affine.size() != s.m)
      throw ShapeMismatch("chart point needs m affine coordinates");
    if (!affine.allFinite()) throw ShapeMismatch("non-finite affine coordinate");
  }

  // Homogeneous coordinate z_i with the implicit 1 reinserted.
  Complex homogeneous(int i) const {
    if (i == chart_index) return Complex(1.0, 0.0);
    return affine[i < chart_index ? i : i - 1];
  }
};

inline ChartPoint to_chart(const ProjectivePoint& p, int chart_index) {
  const CVector& z = p.coords();
  if (chart_index < 0 || chart_index > p.shape().m)
    throw ShapeMismatch("chart index out of range");
  if (z[chart_index] == Complex(0.0, 0.0)) throw ChartUndefined(chart_index);
  CVector aff(p.shape().m);
  Eigen::Index j = 0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (i == chart_index) continue;
    aff[j++] = z[i] / z[chart_index];
  }
  return ChartPoint(chart_index, std::move(aff), p.shape());
}

inline ProjectivePoint from_chart(const ChartPoint& c) {
  CVector z(c.shape.m + 1);
  for (int i = 0; i <= c.shape.m; ++i) z[i] = c.homogeneous(i);
  return ProjectivePoint(z, c.shape);
}

// Equality up to a global phase, relative tolerance on normalized reps.
inline bool projectively_equal(const ProjectivePoint& a, const ProjectivePoint& b,
                               double tol = 1e-12) {
  if (!(a.shape() == b.shape())) return false;
  // Both reps have pivot entry exactly 1, so any residual phase is trivial;
  // still align on the largest entry of a for robustness near ties.
  const Eigen::Index piv = detail::pivot_index(a.coords());
  const Complex zb = b.coords()[piv];
  if (std::abs(zb) == 0.0) return false;
  const Complex phase = (a.coords()[piv] / zb) / std::abs(a.coords()[piv] / zb);
  return (a.coords() - phase * b.coords()).lpNorm<Eigen::Infinity>() <= tol;
}

// --- Group generators of G_{n,k} -------------------------------------------

struct SigmaSwap {
  int i, j;  // swap n-tuples Z_i <-> Z_j
};
struct TauPhase {
  int index;    // multiply z_index by e^{i theta}
  double theta;
};
struct GammaSwap {
  int p, q;  // swap z_p <-> z_q within one n-tuple
};

using Generator = std::variant<SigmaSwap, TauPhase, GammaSwap>;

inline ProjectivePoint apply_generator(const ProjectivePoint& p, const Generator& gen) {
  const TupleShape& s = p.shape();
  CVector z = p.coords();
  if (const auto* sig = std::get_if<SigmaSwap>(&gen)) {
    if (sig->i < 0 || sig->i >= s.k || sig->j < 0 || sig->j >= s.k)
      throw ShapeMismatch("sigma tuple index out of range");
    CVector ti = z.segment(sig->i * s.n, s.n);
    z.segment(sig->i * s.n, s.n) = z.segment(sig->j * s.n, s.n);
    z.segment(sig->j * s.n, s.n) = ti;
  } else if (const auto* tau = std::get_if<TauPhase>(&gen)) {
    if (tau->index < 0 || tau->index > s.m)
      throw ShapeMismatch("tau coordinate index out of range");
    z[tau->index] *= std::polar(1.0, tau->theta);
  } else {
    const auto& gam = std::get<GammaSwap>(gen);
    if (gam.p < 0 || gam.p > s.m || gam.q < 0 || gam.q > s.m)
      throw ShapeMismatch("gamma coordinate index out of range");
    if (s.tuple_of(gam.p) != s.tuple_of(gam.q)) throw CrossTupleSwap(gam.p, gam.q);
    std::swap(z[gam.p], z[gam.q]);
  }
  return ProjectivePoint(z, s);
}

// Random words of length <= 8 in the generators. The group is infinite
// (continuous tau), so sampling stands in for enumeration.
inline std::vector<ProjectivePoint> orbit_sample(const ProjectivePoint& p, int count,
                                                 std::uint64_t seed) {
  if (count < 1) throw InvalidCount("orbit_sample needs count >= 1");
  const TupleShape& s = p.shape();
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  std::vector<ProjectivePoint> out;
  out.reserve(count);
  for (int c = 0; c < count; ++c) {
    ProjectivePoint q = p;
    const int len = 1 + static_cast<int>(rng() % 8);
    for (int w = 0; w < len; ++w) {
      switch (rng() % 3) {
        case 0: {
          const int i = static_cast<int>(rng() % s.k);
          int j = static_cast<int>(rng() % s.k);
          if (j == i) j = (j + 1) % s.k;
          q = apply_generator(q, SigmaSwap{i, j});
          break;
        }
        case 1: {
          const int idx = static_cast<int>(rng() % (s.m + 1));
          q = apply_generator(q, TauPhase{idx, uniform(0.0, 2.0 * M_PI)});
          break;
        }
        default: {
          const int h = static_cast<int>(rng() % s.k);
          const int a = h * s.n + static_cast<int>(rng() % s.n);
          int b = h * s.n + static_cast<int>(rng() % s.n);
          if (b == a) b = h * s.n + (b - h * s.n + 1) % s.n;
          if (a != b) q = apply_generator(q, GammaSwap{a, b});
          break;
        }
      }
    }
    out.push_back(q);
  }
  return out;
}

// --- Incidence submanifold M ------------------------------------------------

// Point of M in P_m x (P_{n-1})^k: the h-th tuple of the base is collinear
// with the h-th small factor. Factors are stored canonically scaled.
struct MPoint {
  ProjectivePoint base;
  std::vector<CVector> factors;  // k vectors of length n, pivot entry 1
  TupleShape shape;

  MPoint(ProjectivePoint b, std::vector<CVector> f)
      : base(std::move(b)), factors(std::move(f)), shape(base.shape()) {
    if (static_cast<int>(factors.size()) != shape.k)
      throw ShapeMismatch("MPoint needs k factors");
    for (auto& w : factors) {
      if (w.size() != shape.n) throw ShapeMismatch("factor must lie on P_{n-1}");
      w = detail::normalize_projective(w);
    }
  }

  // Residual of the collinearity Z_h ~ factors[h]; zero tuples are free.
  double incidence_residual() const {
    double worst = 0.0;
    for (int h = 0; h < shape.k; ++h) {
      const CVector zh = base.tuple(h);
      if (zh.lpNorm<Eigen::Infinity>() == 0.0) continue;
      const CVector& w = factors[h];
      const Complex zeta = w.dot(zh) / w.squaredNorm();  // least-squares scale
      worst = std::max(worst, (zh - zeta * w).lpNorm<Eigen::Infinity>() /
                                  zh.lpNorm<Eigen::Infinity>());
    }
    return worst;
  }
};

inline MPoint lift_to_M(const ProjectivePoint& p) {
  std::vector<CVector> factors;
  factors.reserve(p.shape().k);
  for (int h = 0; h < p.shape().k; ++h) {
    const CVector zh = p.tuple(h);
    if (zh.lpNorm<Eigen::Infinity>() == 0.0) throw ZeroTuple(h);
    factors.push_back(detail::normalize_projective(zh));
  }
  return MPoint(p, std::move(factors));
}

}  // namespace symenv
