#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "symenv/errors.hpp"

namespace symenv {

// Moduli-cube grid on [delta, 1]^m. Log spacing concentrates points near the
// chart boundary where psi plunges; the inequality is automatic below delta.
struct GridSpec {
  double delta = 1e-3;
  int points_per_axis = 11;
  bool log_spacing = true;

  std::vector<double> axis() const {
    if (delta <= 0.0 || delta > 1.0) throw OutOfRange("grid delta must lie in (0, 1]");
    if (points_per_axis < 2) throw OutOfRange("grid needs at least 2 points per axis");
    std::vector<double> xs(points_per_axis);
    for (int j = 0; j < points_per_axis; ++j) {
      const double t = static_cast<double>(j) / (points_per_axis - 1);
      xs[j] = log_spacing ? std::exp((1.0 - t) * std::log(delta)) : delta + t * (1.0 - delta);
    }
    xs.back() = 1.0;
    return xs;
  }
};

// Visit every point of the tensor grid in lexicographic order (last axis
// fastest). Deterministic order makes min/argmin reductions reproducible.
inline void for_each_grid_point(const GridSpec& grid, int m,
                                const std::function<void(const std::vector<double>&)>& body) {
  const std::vector<double> xs = grid.axis();
  std::vector<int> idx(m, 0);
  std::vector<double> x(m);
  while (true) {
    for (int i = 0; i < m; ++i) x[i] = xs[idx[i]];
    body(x);
    int axis = m - 1;
    while (axis >= 0 && ++idx[axis] == grid.points_per_axis) idx[axis--] = 0;
    if (axis < 0) break;
  }
}

}  // namespace symenv
