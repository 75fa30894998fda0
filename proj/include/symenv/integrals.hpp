#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symenv/field.hpp"
#include "symenv/quadrature.hpp"
#include "symenv/rng.hpp"

namespace symenv {

struct IntegralEstimate {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  enum class Method { tensor_quadrature, monte_carlo } method = Method::tensor_quadrature;
  long long samples_or_nodes = 0;
  std::optional<std::uint64_t> seed;
};

inline std::string method_name(IntegralEstimate::Method m) {
  return m == IntegralEstimate::Method::tensor_quadrature ? "tensor_quadrature" : "monte_carlo";
}

// (1 + x_1 + .. + x_m)^{(alpha-1)(m+1)} / (x_1 .. x_m)^alpha
inline double tian_integrand(const std::vector<double>& x, double alpha, int m) {
  if (static_cast<int>(x.size()) != m) throw ShapeMismatch("tian_integrand expects m variables");
  double sum = 0.0, log_prod = 0.0;
  for (double xi : x) {
    if (!(xi > 0.0)) throw DomainError("tian_integrand needs strictly positive variables");
    sum += xi;
    log_prod += std::log(xi);
  }
  return std::exp((alpha - 1.0) * (m + 1) * std::log1p(sum) - alpha * log_prod);
}

// Exact value Gamma(1-alpha)^{m+1} / Gamma((m+1)(1-alpha)) of the integral
// above (classical Dirichlet integral).
inline double dirichlet_oracle(double alpha, int m) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw AlphaOutOfRange(alpha);
  return std::exp((m + 1) * std::lgamma(1.0 - alpha) - std::lgamma((m + 1) * (1.0 - alpha)));
}

namespace detail {

// Per-axis substitution x = (t/(1-t))^kappa removes the x^{-alpha} endpoint
// singularity; kappa grows with the dimension so that the joint factor
// (1+sum x)^{(alpha-1)(m+1)} keeps the transformed integrand bounded at the
// far corner (needed for finite Monte Carlo variance once m > 1).
inline double psi_integral_kappa(double alpha, int m) {
  return (m + 0.5) / (1.0 - alpha);
}

// ln(1 + sum exp(lx_i)), stable for large exponents.
inline double log1p_sum_exp(const std::vector<double>& lx) {
  double mx = 0.0;  // the implicit "1" term carries exponent 0
  for (double v : lx) mx = std::max(mx, v);
  double s = std::exp(-mx);
  for (double v : lx) s += std::exp(v - mx);
  return mx + std::log(s);
}

inline double psi_integral_quadrature(double alpha, int m, int nodes) {
  const double kappa = psi_integral_kappa(alpha, m);
  auto transformed = [&](const std::vector<double>& t) {
    double lw = 0.0;
    double sum_x = 0.0;
    for (double ti : t) {
      const double v = ti / (1.0 - ti);
      lw += std::log(kappa) + (kappa * (1.0 - alpha) - 1.0) * std::log(v) -
            2.0 * std::log1p(-ti);
      sum_x += std::pow(v, kappa);
    }
    lw += (alpha - 1.0) * (m + 1) * std::log1p(sum_x);
    return std::exp(lw);
  };
  return tensor_integrate01(transformed, m, nodes);
}

struct McMoments {
  double mean = 0.0;
  double stderr_est = 0.0;
};

}  // namespace detail

// int exp(-alpha psi) dv in chart-moduli coordinates (the constant "Cst"
// dropped): tensor quadrature for m <= 2, importance-sampled Monte Carlo for
// m = 3. Tensor rules are refused for m >= 4.
inline IntegralEstimate tian_psi_integral(double alpha, int m, int nodes = 160,
                                          long long mc_samples = 8'000'000,
                                          std::uint64_t mc_seed = 12345) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw AlphaOutOfRange(alpha);
  if (m < 1 || m > 3)
    throw UnsupportedDimension("tensor quadrature refused beyond m = 3; use tian_mc_integral");
  if (m <= 2) {
    const double coarse = detail::psi_integral_quadrature(alpha, m, nodes / 2);
    const double fine = detail::psi_integral_quadrature(alpha, m, nodes);
    return {fine, std::abs(fine - coarse), IntegralEstimate::Method::tensor_quadrature, nodes,
            std::nullopt};
  }
  // m == 3: Monte Carlo on the same transformed integrand
  const double kappa = detail::psi_integral_kappa(alpha, m);
  KahanSum sum, sum_sq;
  std::vector<double> lx(m);
  for (long long i = 0; i < mc_samples; ++i) {
    double lw = 0.0;
    for (int axis = 0; axis < m; ++axis) {
      const double t = counter_uniform(mc_seed, static_cast<std::uint64_t>(i) * m + axis);
      const double lv = std::log(t) - std::log1p(-t);
      lw += std::log(kappa) + (kappa * (1.0 - alpha) - 1.0) * lv - 2.0 * std::log1p(-t);
      lx[axis] = kappa * lv;
    }
    lw += (alpha - 1.0) * (m + 1) * detail::log1p_sum_exp(lx);
    const double w = std::exp(lw);
    sum.add(w);
    sum_sq.add(w * w);
  }
  const double mean = sum.value() / mc_samples;
  const double var = std::max(0.0, sum_sq.value() / mc_samples - mean * mean);
  return {mean, std::sqrt(var / mc_samples), IntegralEstimate::Method::monte_carlo, mc_samples,
          mc_seed};
}

// Truncated integrals over [1/R, R]^m for alpha >= 1; they grow without
// bound, at least logarithmically in R when alpha = 1.
inline std::vector<std::pair<double, double>> divergence_sweep(double alpha, int m,
                                                               const std::vector<double>& cutoffs,
                                                               int nodes = 200) {
  if (!(alpha >= 1.0)) throw AlphaOutOfRange(alpha);
  if (m < 1 || m > 3) throw UnsupportedDimension("divergence sweep supports m in {1,2,3}");
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (!(cutoffs[i] > 1.0)) throw OutOfRange("cutoffs must exceed 1");
    if (i > 0 && !(cutoffs[i] > cutoffs[i - 1])) throw OutOfRange("cutoffs must increase");
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(cutoffs.size());
  for (double R : cutoffs) {
    const double L = std::log(R);
    // x = e^s turns prod x^{-alpha} dx into prod x^{1-alpha} ds, smooth on
    // the compact box [-ln R, ln R]^m.
    auto boxed = [&](const std::vector<double>& t) {
      double lw = 0.0;
      double sum_x = 0.0;
      for (double ti : t) {
        const double s = (2.0 * ti - 1.0) * L;
        lw += (1.0 - alpha) * s + std::log(2.0 * L);
        sum_x += std::exp(s);
      }
      return std::exp(lw + (alpha - 1.0) * (m + 1) * std::log1p(sum_x));
    };
    out.emplace_back(R, tensor_integrate01(boxed, m, nodes));
  }
  return out;
}

// Monte Carlo estimate of int exp(-alpha f) dv for a smooth chart-0 field f,
// deterministic in (seed, samples). Moduli-squared variables x_i are drawn
// with the same tail-stretched law as above (kappa = m + 1/2; no singular
// factor to match here).
inline IntegralEstimate tian_mc_integral(const ScalarField& f, double alpha, int m,
                                         long long samples, std::uint64_t seed,
                                         std::optional<TupleShape> shape_opt = std::nullopt) {
  if (samples < 1) throw InvalidCount("tian_mc_integral needs samples >= 1");
  if (m < 1) throw UnsupportedDimension("m must be >= 1");
  const double kappa = m + 0.5;
  const TupleShape shape = shape_opt ? *shape_opt : [m]() {
    // any (n, k) factorization works when the field only sees moduli
    for (int n = 1; n <= m + 1; ++n)
      if ((m + 1) % n == 0 && (m + 1) / n >= 2) return TupleShape(n, (m + 1) / n);
    throw UnsupportedDimension("no tuple shape with k >= 2 for this m");
  }();
  if (shape.m != m) throw ShapeMismatch("shape does not match m");
  KahanSum sum, sum_sq;
  CVector aff(m);
  for (long long i = 0; i < samples; ++i) {
    double lw = 0.0;
    double sum_x = 0.0;
    for (int axis = 0; axis < m; ++axis) {
      const double t = counter_uniform(seed, static_cast<std::uint64_t>(i) * m + axis);
      const double lv = std::log(t) - std::log1p(-t);
      lw += std::log(kappa) + (kappa - 1.0) * lv - 2.0 * std::log1p(-t);
      const double x = std::exp(kappa * lv);
      sum_x += x;
      aff[axis] = Complex(std::sqrt(x), 0.0);
    }
    const ChartPoint p(0, aff, shape);
    lw += -alpha * f(p) - (m + 1) * std::log1p(sum_x);
    const double w = std::exp(lw);
    sum.add(w);
    sum_sq.add(w * w);
  }
  const double mean = sum.value() / samples;
  const double var = std::max(0.0, sum_sq.value() / samples - mean * mean);
  return {mean, std::sqrt(var / samples), IntegralEstimate::Method::monte_carlo, samples, seed};
}

}  // namespace symenv
