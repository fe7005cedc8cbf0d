#include <cmath>
#include <doctest.h>

#include "pcq/observers.hpp"
#include "pcq/oracle.hpp"

using namespace pcq;

namespace {
const ModelParams kObs{0.5, 1.0, 1.0, {}, Variant::ObserverMM1};
const ModelParams kInf{0.8, 1.0, 0.7, {}, Variant::ObserverMMInf};
} // namespace

TEST_CASE("single-server observer roots") {
  const Mm1ObserverForm f = mm1_observer_form(kObs);
  CHECK(f.x1 > 0.0);
  CHECK(f.x1 < 1.0);
  CHECK(f.x2 > 1.0);
  // both satisfy lambda x^2 - (lambda+mu+nu) x + mu = 0
  for (double r : {f.x1, f.x2})
    CHECK(std::abs(0.5 * r * r - 2.5 * r + 1.0) < 1e-12);
  CHECK(f.x1 * f.x2 == doctest::Approx(kObs.mu / kObs.lambda).epsilon(1e-13));
  ModelParams bad = kObs;
  bad.lambda = 1.5;
  CHECK_THROWS_AS(mm1_observer_form(bad), UnstableObserver);
}

TEST_CASE("single-server observer pgf has geometric marginals") {
  const Mm1ObserverForm f = mm1_observer_form(kObs);
  const double rho = kObs.rho();
  CHECK(mm1_obs_pgf(f, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (double t : {0.0, 0.3, 0.7, 1.0}) {
    const double geo = (1.0 - rho) / (1.0 - rho * t);
    CHECK(mm1_obs_pgf(f, t, 1.0) == doctest::Approx(geo).epsilon(1e-12));
    // the recorded coordinate is a stationary sample of the same queue
    CHECK(mm1_obs_pgf(f, 1.0, t) == doctest::Approx(geo).epsilon(1e-12));
  }
}

TEST_CASE("single-server observer pgf is symmetric (reversibility)") {
  const Mm1ObserverForm f = mm1_observer_form(kObs);
  for (double x : {0.1, 0.4, 0.9})
    for (double y : {0.2, 0.6, 1.0})
      CHECK(mm1_obs_pgf(f, x, y) ==
            doctest::Approx(mm1_obs_pgf(f, y, x)).epsilon(1e-11));
}

TEST_CASE("single-server observer pgf is continuous across x = x1") {
  const Mm1ObserverForm f = mm1_observer_form(kObs);
  for (double y : {0.3, 0.8}) {
    const double at = mm1_obs_pgf(f, f.x1, y);
    CHECK(mm1_obs_pgf(f, f.x1 - 2e-7, y) == doctest::Approx(at).epsilon(1e-5));
    CHECK(mm1_obs_pgf(f, f.x1 + 2e-7, y) == doctest::Approx(at).epsilon(1e-5));
  }
}

TEST_CASE("single-server observer table matches the 2-D oracle") {
  const JointDist d = mm1_obs_joint(kObs, 60, 60);
  const JointDist od = stationary(build_chain(kObs, 60, 60));
  for (std::size_t i = 0; i <= 30; ++i)
    for (std::size_t j = 0; j <= 30; ++j)
      CHECK(d.at(i, j) == doctest::Approx(od.at(i, j)).epsilon(1e-8));
  CHECK(d.total_mass() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("single-server observer table sums back to the pgf") {
  const Mm1ObserverForm f = mm1_observer_form(kObs);
  const JointDist d = mm1_obs_joint(kObs, 150, 150);
  for (double x : {0.0, 0.4385, 0.9})
    for (double y : {0.0, 0.5, 1.0})
      CHECK(pgf_eval(d, x, y).value ==
            doctest::Approx(mm1_obs_pgf(f, x, y)).epsilon(1e-10));
}

TEST_CASE("infinite-server observer series form") {
  const MmInfObserverForm f = mminf_observer_form(kInf);
  CHECK(f.h[0] == doctest::Approx(1.0));
  CHECK(f.h.back() < 1e-14);
  CHECK(mminf_obs_pgf(f, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
  // Poisson marginals in each coordinate
  const double rho = kInf.rho();
  for (double t : {0.0, 0.5, 1.0}) {
    CHECK(mminf_obs_pgf(f, t, 1.0) ==
          doctest::Approx(std::exp(rho * (t - 1.0))).epsilon(1e-13));
    CHECK(mminf_obs_pgf(f, 1.0, t) ==
          doctest::Approx(std::exp(rho * (t - 1.0))).epsilon(1e-13));
  }
}

TEST_CASE("infinite-server observer: series and quadrature forms agree") {
  for (double x : {0.0, 0.2, 0.7, 1.0})
    for (double y : {0.0, 0.5, 0.9}) {
      const MmInfObserverForm f = mminf_observer_form(kInf);
      CHECK(mminf_obs_pgf(f, x, y) ==
            doctest::Approx(mminf_obs_pgf_integral(kInf, x, y)).epsilon(1e-10));
    }
}

TEST_CASE("infinite-server observer: nu = mu reduces to an elementary integral") {
  ModelParams p{0.8, 1.0, 1.0, {}, Variant::ObserverMMInf};
  const double rho = p.rho();
  for (double x : {0.2, 0.6})
    for (double y : {0.3, 0.9}) {
      const double w = rho * (x - 1.0) * (y - 1.0);
      const double inner = (std::exp(w) - 1.0) / w;
      const double expect =
          std::exp(rho * (x - 1.0)) * std::exp(rho * (y - 1.0)) * inner;
      CHECK(mminf_obs_pgf_integral(p, x, y) ==
            doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("observer closed forms satisfy their functional equations") {
  const Mm1ObserverForm f1 = mm1_observer_form(kObs);
  const MmInfObserverForm f2 = mminf_observer_form(kInf);
  for (double x : {0.2, 0.5, 0.9})
    for (double y : {0.1, 0.6, 1.0}) {
      CHECK(std::abs(mm1_obs_residual(f1, x, y)) < 1e-9);
      CHECK(std::abs(mminf_obs_residual(f2, x, y)) < 1e-9);
    }
}

TEST_CASE("infinite-server observer matches the 2-D oracle pgf") {
  ModelParams p{0.8, 1.0, 0.7, {}, Variant::ObserverMMInf};
  const JointDist od = stationary(build_chain(p, 40, 40));
  const MmInfObserverForm f = mminf_observer_form(p);
  for (double x : {0.3, 0.8})
    for (double y : {0.4, 1.0})
      CHECK(pgf_eval(od, x, y).value ==
            doctest::Approx(mminf_obs_pgf(f, x, y)).epsilon(1e-8));
}
