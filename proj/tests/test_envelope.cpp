#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "symenv/envelope.hpp"
#include "symenv/testfuncs.hpp"

using namespace symenv;

namespace {

const TupleShape kShape(2, 2);  // m = 3

ProjectivePoint point(std::vector<Complex> coords, const TupleShape& shape = kShape) {
  CVector v(static_cast<Eigen::Index>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) v[static_cast<Eigen::Index>(i)] = coords[i];
  return make_point(v, shape);
}

}  // namespace

TEST_CASE("eval_psi attains -a ln(m+1) on the torus and -inf on coordinate planes") {
  CHECK(eval_psi(point({1.0, 1.0, 1.0, 1.0}), 4.0) == doctest::Approx(-4.0 * std::log(4.0)));
  CHECK(eval_psi(point({1.0, 0.0, 1.0, 1.0}), 4.0) == kNegInf);

  const Complex e1 = std::polar(1.0, 0.7), e2 = std::polar(1.0, -1.9);
  CHECK(eval_psi(point({1.0, e1, e2, 1.0}), 4.0) ==
        doctest::Approx(-4.0 * std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("eval_psi is the supremum value at the torus point") {
  // values strictly below at nearby off-torus points
  const double top = eval_psi(point({1.0, 1.0, 1.0, 1.0}), 4.0);
  CHECK(eval_psi(point({1.0, 0.9, 1.0, 1.0}), 4.0) < top);
  CHECK(eval_psi(point({1.0, 1.0, 0.5, 0.8}), 4.0) < top);
}

TEST_CASE("eval_psi_tilde") {
  CHECK(eval_psi_tilde(point({1.0, 0.0, 0.0, 0.0}), 4.0) == 0.0);
  CHECK(eval_psi_tilde(point({0.0, 1.0, 0.0, 0.0}), 4.0) == kNegInf);
  CHECK(eval_psi_tilde(point({1.0, 1.0, 1.0, 1.0}), 4.0) ==
        doctest::Approx(-4.0 * std::log(4.0)));
}

TEST_CASE("eval_psi_M") {
  const MPoint ones = lift_to_M(point({1.0, 1.0, 1.0, 1.0}));
  CHECK(eval_psi_M(ones) == doctest::Approx(-std::log(64.0)));

  const MPoint with_zero = lift_to_M(point({1.0, 0.0, 1.0, 1.0}));
  CHECK(eval_psi_M(with_zero) == kNegInf);

  // factor scale drops out of the least-squares gluing
  MPoint rescaled = ones;
  std::vector<CVector> factors = ones.factors;
  factors[0] *= Complex(7.0, 0.0);
  const MPoint other(ones.base, std::move(factors));
  CHECK(eval_psi_M(other) == doctest::Approx(eval_psi_M(ones)).epsilon(1e-14));
}

TEST_CASE("eval_psi_tilde_M") {
  CHECK(eval_psi_tilde_M(lift_to_M(point({1.0, 1.0, 1.0, 1.0}))) ==
        doctest::Approx(-std::log(64.0)));
  // z_1 is not a distinguished coordinate
  CHECK(std::isfinite(eval_psi_tilde_M(lift_to_M(point({1.0, 0.0, 1.0, 1.0})))));
  CHECK(eval_psi_tilde_M(lift_to_M(point({0.0, 1.0, 1.0, 1.0}))) == kNegInf);
}

TEST_CASE("psi_field agrees with eval_psi through chart 0") {
  const ProjectivePoint p = point({1.0, Complex(0.3, 0.4), Complex(-0.5, 0.1), 0.9});
  CHECK(eval_in_chart0(psi_field(4.0), p) == doctest::Approx(eval_psi(p, 4.0)).epsilon(1e-14));
}

TEST_CASE("psi_M chart field agrees with eval_psi_M on lifted points") {
  const ProjectivePoint p = point({1.0, Complex(0.3, 0.4), Complex(-0.5, 0.1), 0.9});
  CHECK(eval_in_chart0(psi_M_chart_field(), p) ==
        doctest::Approx(eval_psi_M(lift_to_M(p))).epsilon(1e-12));
}

TEST_CASE("lemma1_reduce") {
  const std::vector<double> r1 = lemma1_reduce({0.5, 0.04, 0.25}, kShape);
  REQUIRE(r1.size() == 3);
  CHECK(r1[0] == doctest::Approx(0.5));
  CHECK(r1[1] == doctest::Approx(0.1));
  CHECK(r1[2] == doctest::Approx(0.1));
  CHECK(lemma1_reduce({1.0, 1.0, 1.0}, kShape) == std::vector<double>{1.0, 1.0, 1.0});

  // n = 1: first block empty, later tuples are singletons
  const TupleShape deg(1, 3);
  CHECK(lemma1_reduce({0.3, 0.8}, deg) == std::vector<double>{0.3, 0.8});

  CHECK_THROWS_AS(lemma1_reduce({0.5, 0.5}, kShape), ShapeMismatch);
  CHECK_THROWS_AS(lemma1_reduce({0.5, 0.0, 0.5}, kShape), OutOfRange);
  CHECK_THROWS_AS(lemma1_reduce({0.5, 1.5, 0.5}, kShape), OutOfRange);
}

TEST_CASE("lemma2_reduce") {
  CHECK(lemma2_reduce({0.04, 0.25}) == doctest::Approx(0.1));
  CHECK(lemma2_reduce({0.7}) == doctest::Approx(0.7));
  CHECK(lemma2_reduce({1.0, 1.0}) == 1.0);
  CHECK_THROWS_AS(lemma2_reduce({}), ShapeMismatch);
}

TEST_CASE("lemma1 preserves within-tuple products") {
  const std::vector<double> x{0.37, 0.12, 0.91};
  const std::vector<double> r = lemma1_reduce(x, kShape);
  CHECK(r[0] == doctest::Approx(x[0]));
  CHECK(r[1] * r[2] == doctest::Approx(x[1] * x[2]).epsilon(1e-14));
}

TEST_CASE("reduction_chain with f = psi has zero gap at every stage") {
  const ReductionTrace trace = reduction_chain(psi_field(4.0), {0.5, 0.04, 0.25}, kShape, 4.0);
  REQUIRE(trace.stages.size() == 4);
  CHECK(trace.stages[0].label == "input");
  CHECK(trace.stages[3].label == "lemma3_target");
  for (const ReductionStage& s : trace.stages) CHECK(std::abs(s.gap) < 1e-12);
}

TEST_CASE("reduction_chain at the all-ones input is constant") {
  const ReductionTrace trace =
      reduction_chain(ScalarField::constant(0.0), {1.0, 1.0, 1.0}, kShape, 4.0);
  for (const ReductionStage& s : trace.stages)
    CHECK(s.gap == doctest::Approx(trace.stages[0].gap));
}

TEST_CASE("reduction_chain is non-increasing for a calibrated test function") {
  TestFunctionSpec spec;
  spec.family = TestFunctionSpec::Family::power_ratio;
  spec.degree = 2;
  spec.epsilon = 0.05;
  spec.shape = kShape;
  spec.a_m = 4.0;
  const GridSpec grid{1e-3, 7, true};
  const NormalizedField nf = normalize_sup(make_test_function(spec), kShape, grid);

  for_each_grid_point(grid, kShape.m, [&](const std::vector<double>& x) {
    const ReductionTrace trace = reduction_chain(nf.field, x, kShape, 4.0);
    for (std::size_t i = 1; i < trace.stages.size(); ++i)
      CHECK(trace.stages[i].gap <= trace.stages[i - 1].gap + 1e-7);
  });
}

TEST_CASE("verify_envelope with the zero field") {
  const GridSpec grid{1e-3, 5, true};
  const EnvelopeReport r = verify_envelope(ScalarField::constant(0.0), kShape, 4.0, grid);
  CHECK(r.points_scanned == 125);
  CHECK(r.monotone_violations == 0);
  // min (0 - psi) = -max psi = a ln(m+1), attained on the all-ones corner
  CHECK(r.min_gap == doctest::Approx(4.0 * std::log(4.0)).epsilon(1e-12));
  CHECK(r.argmin == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("verify_envelope on a calibrated test function") {
  TestFunctionSpec spec;
  spec.family = TestFunctionSpec::Family::tuple_norm_mix;
  spec.weights = {1.0, 0.5};
  spec.epsilon = 0.02;
  spec.shape = kShape;
  spec.a_m = 4.0;
  const GridSpec grid{1e-3, 9, true};
  const NormalizedField nf = normalize_sup(make_test_function(spec), kShape, grid);
  const EnvelopeReport r = verify_envelope(nf.field, kShape, 4.0, grid);
  CHECK(r.min_gap >= -1e-6);
  CHECK(r.monotone_violations == 0);
  CHECK(r.points_scanned == 9 * 9 * 9);
}

TEST_CASE("verify_center_bound") {
  CHECK(verify_center_bound(ScalarField::constant(0.0), kShape, 4.0) ==
        doctest::Approx(4.0 * std::log(4.0)));

  TestFunctionSpec spec;
  spec.family = TestFunctionSpec::Family::power_ratio;
  spec.degree = 3;
  spec.epsilon = 0.03;
  spec.shape = kShape;
  spec.a_m = 4.0;
  const NormalizedField nf =
      normalize_sup(make_test_function(spec), kShape, GridSpec{1e-3, 9, true});
  CHECK(verify_center_bound(nf.field, kShape, 4.0) >= -1e-6);
}
