#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "symenv/geometry.hpp"
#include "symenv/hermitian.hpp"

using namespace symenv;

namespace {

ChartPoint chart(std::initializer_list<Complex> affine, const TupleShape& shape) {
  CVector v(static_cast<Eigen::Index>(affine.size()));
  Eigen::Index i = 0;
  for (const Complex& c : affine) v[i++] = c;
  return ChartPoint(0, std::move(v), shape);
}

}  // namespace

TEST_CASE("HermitianForm basics") {
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
  const HermitianForm h(id);
  CHECK(h.is_hermitian(0.0));
  CHECK(h.min_eigenvalue() == doctest::Approx(1.0));
  CHECK(is_positive_definite(h, 0.0));

  Eigen::MatrixXcd indef = Eigen::MatrixXcd::Zero(2, 2);
  indef(0, 0) = 1.0;
  indef(1, 1) = -1.0;
  CHECK_FALSE(is_positive_definite(HermitianForm(indef)));

  Eigen::MatrixXcd skew = Eigen::MatrixXcd::Zero(2, 2);
  skew(0, 1) = Complex(0.0, 2.0);
  skew(1, 0) = Complex(0.0, 2.0);  // not conjugate-symmetric
  CHECK_FALSE(HermitianForm(skew).is_hermitian());
  CHECK_THROWS_AS(is_positive_definite(HermitianForm(skew)), NotHermitian);
  CHECK(HermitianForm(skew).symmetrized().is_hermitian(0.0));

  const HermitianForm sum = h + HermitianForm(indef);
  CHECK(sum.entries()(1, 1) == Complex(0.0, 0.0));
}

TEST_CASE("complex_hessian of |z|^2 on the line is the identity form") {
  const TupleShape s(1, 2);
  const ScalarField f([](const ChartPoint& p) { return std::norm(p.affine[0]); });
  for (double re : {0.0, 0.3, -0.7}) {
    const HermitianForm h = complex_hessian(f, chart({Complex(re, 0.2)}, s));
    REQUIRE(h.dim() == 1);
    CHECK(std::abs(h.entries()(0, 0) - Complex(1.0, 0.0)) < 1e-6);
  }
}

TEST_CASE("complex_hessian kills pluriharmonic functions") {
  const TupleShape s(1, 2);
  const ScalarField f([](const ChartPoint& p) { return (p.affine[0] * p.affine[0]).real(); });
  const HermitianForm h = complex_hessian(f, chart({Complex(0.4, -0.3)}, s));
  CHECK(std::abs(h.entries()(0, 0)) < 1e-6);
}

TEST_CASE("complex_hessian of the FS potential at the origin") {
  const TupleShape s(1, 2);
  const HermitianForm h = complex_hessian(fs_potential_field(2.0), chart({Complex(0.0, 0.0)}, s));
  CHECK(std::abs(h.entries()(0, 0) - Complex(2.0, 0.0)) < 1e-6);
}

TEST_CASE("step control and non-finite samples") {
  const TupleShape s(1, 2);
  const ScalarField log_field([](const ChartPoint& p) { return std::log(p.affine[0].real()); });
  // stencil crosses zero where log is -inf
  CHECK_THROWS_AS(complex_hessian(log_field, chart({Complex(1e-9, 0.0)}, s), 1e-4),
                  NonFiniteSample);
  // explicit small step keeps the stencil in the domain
  const HermitianForm h = complex_hessian(log_field, chart({Complex(1.0, 0.0)}, s), 1e-5);
  CHECK(h.is_hermitian());
}

TEST_CASE("FS metric is positive definite at 50 random chart points, m = 3") {
  const TupleShape s(2, 2);
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    CVector aff(3);
    for (int i = 0; i < 3; ++i) aff[i] = Complex(u(rng), u(rng));
    const HermitianForm g = fs_metric(ChartPoint(0, aff, s), 4.0);
    CHECK(g.is_hermitian(1e-12));
    CHECK(is_positive_definite(g));
  }
}

TEST_CASE("numeric Hessian of the FS potential reproduces the closed-form metric") {
  const TupleShape s(2, 2);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const double a = 4.0;
  for (int trial = 0; trial < 20; ++trial) {
    CVector aff(3);
    for (int i = 0; i < 3; ++i) aff[i] = Complex(u(rng), u(rng));
    const ChartPoint p(0, aff, s);
    const HermitianForm num = complex_hessian(fs_potential_field(a), p);
    const HermitianForm exact = fs_metric(p, a);
    const double rel = (num.entries() - exact.entries()).norm() / exact.entries().norm();
    CHECK(rel < 1e-6);
  }
}
