#include <doctest.h>

#include "pcq/joint_dist.hpp"
#include "pcq/params.hpp"
#include "pcq/qbd_finite.hpp"

using namespace pcq;

TEST_CASE("validate_params accepts positive-rate infinite controller") {
  ModelParams p{1.0, 1.0, 1.0, {}, Variant::ControllerInfinite};
  CHECK_NOTHROW(validate_params(p));
}

TEST_CASE("validate_params rejects nonpositive rates") {
  ModelParams p{0.0, 1.0, 1.0, {}, Variant::ControllerInfinite};
  CHECK_THROWS_AS(validate_params(p), NonPositiveRate);
  p = {1.0, -2.0, 1.0, {}, Variant::ControllerInfinite};
  CHECK_THROWS_AS(validate_params(p), NonPositiveRate);
}

TEST_CASE("validate_params rejects unstable observer") {
  ModelParams p{2.0, 1.0, 1.0, {}, Variant::ObserverMM1};
  CHECK_THROWS_AS(validate_params(p), UnstableObserver);
}

TEST_CASE("validate_params flags unstable finite controller") {
  ModelParams p{1.5, 1.0, 0.5, 1u, Variant::ControllerFinite};
  CHECK_THROWS_AS(validate_params(p), UnstableFinite);
  CHECK_NOTHROW(validate_params(p, /*allow_unstable=*/true));
}

TEST_CASE("validate_params: infinite controller must not cap the speed") {
  ModelParams p{1.0, 1.0, 1.0, 3u, Variant::ControllerInfinite};
  CHECK_THROWS_AS(validate_params(p), DomainError);
}

TEST_CASE("pgf_eval endpoints") {
  JointDist d(3, 3);
  d.set(0, 0, 0.4);
  d.set(1, 2, 0.3);
  d.set(2, 1, 0.2);
  CHECK(pgf_eval(d, 1.0, 1.0).value == doctest::Approx(1.0 - d.mass_deficit()));
  CHECK(pgf_eval(d, 0.0, 0.0).value == doctest::Approx(0.4));
  CHECK_THROWS_AS(pgf_eval(d, 1.2, 0.5), DomainError);
  CHECK_THROWS_AS(pgf_eval(d, 0.5, -0.1), DomainError);
}

TEST_CASE("pgf_eval matches the explicit s=1 closed-form pgf") {
  // stable finite controller with one speed
  ModelParams p{1.0, 2.0, 1.0, 1u, Variant::ControllerFinite};
  const ClosedFormS1 cf = closed_form_s1(p);
  const JointDist d = cf.to_joint(400); // geometric tail below 1e-12 by then
  CHECK(pgf_eval(d, 0.5, 0.5).value == doctest::Approx(cf.pgf(0.5, 0.5)).epsilon(1e-10));
  CHECK(pgf_eval(d, 1.0, 1.0).value + d.mass_deficit() == doctest::Approx(1.0));
}

TEST_CASE("pgf_eval is monotone in x and y") {
  ModelParams p{1.0, 2.0, 1.0, 1u, Variant::ControllerFinite};
  const JointDist d = closed_form_s1(p).to_joint(200);
  double prev = 0.0;
  for (double x = 0.0; x <= 1.0; x += 0.125) {
    const double v = pgf_eval(d, x, 0.7).value;
    CHECK(v >= prev);
    prev = v;
  }
  prev = 0.0;
  for (double y = 0.0; y <= 1.0; y += 0.125) {
    const double v = pgf_eval(d, 0.7, y).value;
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("marginals and moments of a hand-built table") {
  JointDist d(2, 2);
  d.set(0, 0, 0.25);
  d.set(1, 1, 0.5);
  d.set(2, 2, 0.25);
  CHECK(d.mean_queue() == doctest::Approx(1.0));
  CHECK(d.mean_speed() == doctest::Approx(1.0));
  CHECK(d.prob_empty() == doctest::Approx(0.25));
  const auto g = d.queue_marginal();
  CHECK(g[1] == doctest::Approx(0.5));
}
