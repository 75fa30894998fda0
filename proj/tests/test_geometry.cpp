#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "symenv/geometry.hpp"
#include "symenv/quadrature.hpp"
#include "symenv/testfuncs.hpp"

using namespace symenv;

namespace {

ChartPoint chart(std::vector<Complex> affine, const TupleShape& shape) {
  CVector v(static_cast<Eigen::Index>(affine.size()));
  for (std::size_t i = 0; i < affine.size(); ++i) v[static_cast<Eigen::Index>(i)] = affine[i];
  return ChartPoint(0, std::move(v), shape);
}

ChartPoint random_chart(const TupleShape& shape, std::mt19937_64& rng, double lo = 0.2,
                        double hi = 1.5) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::uniform_real_distribution<double> sgn(-1.0, 1.0);
  CVector aff(shape.m);
  for (int i = 0; i < shape.m; ++i)
    aff[i] = Complex(u(rng) * (sgn(rng) < 0 ? -1.0 : 1.0), u(rng) * (sgn(rng) < 0 ? -1.0 : 1.0));
  return ChartPoint(0, std::move(aff), shape);
}

}  // namespace

TEST_CASE("fs_potential values") {
  const TupleShape s1(1, 2);
  CHECK(fs_potential(chart({Complex(0.0, 0.0)}, s1), 2.0) == 0.0);
  CHECK(fs_potential(chart({Complex(1.0, 0.0)}, s1), 2.0) == doctest::Approx(2.0 * std::log(2.0)));

  const TupleShape s3(2, 2);
  const ChartPoint ones = chart({1.0, 1.0, 1.0}, s3);
  CHECK(fs_potential(ones, 4.0) == doctest::Approx(4.0 * std::log(4.0)));
}

TEST_CASE("fs_metric closed form") {
  const TupleShape s1(1, 2);
  const HermitianForm origin = fs_metric(chart({Complex(0.0, 0.0)}, s1), 2.0);
  CHECK(std::abs(origin.entries()(0, 0) - Complex(2.0, 0.0)) == 0.0);

  const HermitianForm at1 = fs_metric(chart({Complex(1.0, 0.0)}, s1), 2.0);
  CHECK(std::abs(at1.entries()(0, 0) - Complex(0.5, 0.0)) < 1e-15);

  const TupleShape s3(2, 2);
  const HermitianForm o3 = fs_metric(chart({0.0, 0.0, 0.0}, s3), 4.0);
  CHECK((o3.entries() - 4.0 * Eigen::MatrixXcd::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("admissibility") {
  const TupleShape s(2, 2);
  const MetricSpec fs = MetricSpec::fubini_study(s, 4.0);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const ChartPoint p = random_chart(s, rng);
    CHECK(admissibility(ScalarField::constant(0.0), p, fs));
    // g + Hess(-a ln(1+|z|^2)) is the zero form
    CHECK_FALSE(admissibility(fs_potential_field(4.0).scaled(-1.0), p, fs));
  }

  // a weak symmetric perturbation stays admissible
  TestFunctionSpec spec;
  spec.family = TestFunctionSpec::Family::power_ratio;
  spec.degree = 2;
  spec.epsilon = 0.05;
  spec.shape = s;
  spec.a_m = 4.0;
  const ScalarField f = make_test_function(spec);
  const GridSpec grid{1e-2, 4, true};
  for_each_grid_point(grid, s.m, [&](const std::vector<double>& x) {
    CVector aff(s.m);
    for (int i = 0; i < s.m; ++i) aff[i] = Complex(x[i], 0.0);
    CHECK(admissibility(f, ChartPoint(0, aff, s), fs));
  });
}

TEST_CASE("gM_potential") {
  const TupleShape s(2, 2);
  const ChartPoint ones = chart({1.0, 1.0, 1.0}, s);
  CHECK(gM_potential(ones) == doctest::Approx(2.0 * std::log(4.0) + 2.0 * std::log(2.0)));

  CHECK_THROWS_AS(gM_potential(chart({Complex(0.7, 0.0), 0.0, 0.0}, s)), ZeroTuple);

  // invariance under within-tuple swap: second tuple entries exchanged
  const ChartPoint a = chart({Complex(0.3, 0.1), Complex(0.5, -0.2), Complex(0.9, 0.4)}, s);
  const ChartPoint b = chart({Complex(0.3, 0.1), Complex(0.9, 0.4), Complex(0.5, -0.2)}, s);
  CHECK(gM_potential(a) == doctest::Approx(gM_potential(b)));
}

TEST_CASE("gM_metric is Hermitian and positive definite") {
  const TupleShape s(2, 2);
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    const HermitianForm g = gM_metric(random_chart(s, rng));
    CHECK(g.is_hermitian(1e-10));
    CHECK(is_positive_definite(g));
  }
}

TEST_CASE("gM_det_formula spot values") {
  const TupleShape s(2, 2);
  CHECK(gM_det_formula(chart({1.0, 1.0, 1.0}, s)) == doctest::Approx(0.125).epsilon(1e-12));

  // degenerate n = 1: exponents vanish, k^{k-1}/(1+|z|^2)^{m+1} remains
  const TupleShape deg(1, 3);
  const ChartPoint p = chart({Complex(0.5, 0.0), Complex(0.25, 0.0)}, deg);
  const double total = 1.0 + 0.25 + 0.0625;
  CHECK(gM_det_formula(p) == doctest::Approx(9.0 / std::pow(total, 3)).epsilon(1e-12));
}

TEST_CASE("gM_det_formula matches the numeric Hessian determinant") {
  std::mt19937_64 rng(41);
  for (const TupleShape& s : {TupleShape(2, 2), TupleShape(1, 3)}) {
    for (int trial = 0; trial < 50; ++trial) {
      const ChartPoint p = random_chart(s, rng);
      const double det_numeric = gM_metric(p).entries().determinant().real();
      const double det_formula = gM_det_formula(p);
      CHECK(std::abs(det_numeric / det_formula - 1.0) < 1e-5);
    }
  }
}

TEST_CASE("metric_at dispatches on the spec kind") {
  const TupleShape s(2, 2);
  const ChartPoint p = chart({Complex(0.4, 0.1), Complex(0.7, -0.3), Complex(0.2, 0.5)}, s);
  CHECK((metric_at(MetricSpec::fubini_study(s, 4.0), p).entries() - fs_metric(p, 4.0).entries())
            .norm() == 0.0);
  CHECK((metric_at(MetricSpec::product_m(s), p).entries() - gM_metric(p).entries()).norm() == 0.0);
}

TEST_CASE("fs_volume_density") {
  const TupleShape s1(1, 2);
  CHECK(fs_volume_density(chart({Complex(0.0, 0.0)}, s1), 1) == 1.0);
  CHECK(fs_volume_density(chart({Complex(1.0, 0.0)}, s1), 1) == doctest::Approx(0.25));

  // total mass in moduli coordinates: int_0^inf (1+x)^{-2} dx = 1,
  // computed with the substitution x = t/(1-t)
  const double mass = tensor_integrate01(
      [](const std::vector<double>& t) {
        const double x = t[0] / (1.0 - t[0]);
        const double jac = 1.0 / ((1.0 - t[0]) * (1.0 - t[0]));
        return jac / ((1.0 + x) * (1.0 + x));
      },
      1, 64);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
}
