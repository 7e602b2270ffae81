#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qpow/theory.hpp"

using namespace qpow;

TEST_SUITE("theory") {

TEST_CASE("iteration count and sample size match hand evaluation") {
  TheoryInputs one{std::exp(1.0), 1.0, 0.5, 1.4715177646857693,
                   1.0,           1.0, 1.0, 1.0,
                   1.0,           1.0};
  TheoryPrediction p1 = predict_theory(one);
  CHECK(p1.t == 1);
  CHECK(p1.m0 == doctest::Approx(3.6945280494653248).epsilon(1e-10));

  TheoryInputs two{1.05, 1.0, 0.1, 0.05, 0.8, 2.0, 3.0, 1.5, 1.2, 1.1};
  TheoryPrediction p2 = predict_theory(two);
  CHECK(p2.t == 111);
  CHECK(p2.m0 == doctest::Approx(5437678065896101.0).epsilon(1e-10));

  TheoryInputs three{2.0, 1.0, 0.01, 0.001, 0.5, 0.5, 10.0, 2.0, 1.5, 1.0};
  TheoryPrediction p3 = predict_theory(three);
  CHECK(p3.t == 16);
  CHECK(p3.m0 == doctest::Approx(1.3806076264767654e17).epsilon(1e-10));
}

TEST_CASE("an easy target still takes one iteration") {
  TheoryInputs in{10.0, 1.0, 0.9, 3.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  // log(2*sqrt(2)/(sqrt(0.9)*3)) < 0, so the raw count would be nonpositive.
  TheoryPrediction p = predict_theory(in);
  CHECK(p.t == 1);
  const double expect_m0 = (4.0 / (0.9 * 9.0)) * 1.0 * 1.0 * 1.0;
  CHECK(p.m0 == doctest::Approx(expect_m0).epsilon(1e-12));
}

TEST_CASE("degenerate spectra and bad tolerances are rejected") {
  TheoryInputs base{2.0, 1.0, 0.1, 0.1, 0.9, 1.0, 1.0, 1.0, 1.0, 1.0};

  TheoryInputs no_gap = base;
  no_gap.lambda2 = 2.0;
  CHECK_THROWS_AS(predict_theory(no_gap), std::domain_error);

  TheoryInputs negative = base;
  negative.lambda2 = -1.0;
  CHECK_THROWS_AS(predict_theory(negative), std::domain_error);

  TheoryInputs eps = base;
  eps.epsilon = 0.0;
  CHECK_THROWS_AS(predict_theory(eps), std::domain_error);

  TheoryInputs fail = base;
  fail.delta_fail = 1.0;
  CHECK_THROWS_AS(predict_theory(fail), std::domain_error);

  TheoryInputs cosr = base;
  cosr.cos_theta0 = 1.5;
  CHECK_THROWS_AS(predict_theory(cosr), std::domain_error);

  TheoryInputs ce = base;
  ce.ce = 0.0;
  CHECK_THROWS_AS(predict_theory(ce), std::domain_error);

  TheoryInputs norm = base;
  norm.v0_norm2 = 0.0;
  CHECK_THROWS_AS(predict_theory(norm), std::domain_error);
}

TEST_CASE("tightening the target inflates the budget superquadratically") {
  TheoryInputs in{2.0, 1.0, 0.01, 0.001, 0.5, 0.5, 10.0, 2.0, 1.5, 1.0};
  TheoryPrediction loose = predict_theory(in);
  TheoryInputs tight = in;
  tight.epsilon = in.epsilon / 4.0;
  TheoryPrediction sharp = predict_theory(tight);
  CHECK(sharp.t >= loose.t);
  CHECK(sharp.m0 >= 16.0 * loose.m0);
}

}  // TEST_SUITE
