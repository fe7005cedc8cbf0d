#include <cmath>
#include <doctest.h>
#include <vector>

#include "pcq/analytic_infinite.hpp"
#include "pcq/oracle.hpp"

using namespace pcq;

namespace {
const ModelParams kUnit{1.0, 1.0, 1.0, {}, Variant::ControllerInfinite};

double quad_residual(const ModelParams& p, unsigned j, double z) {
  const double jmu = j * p.mu;
  return p.lambda * z * z - (p.lambda + p.nu + jmu) * z + jmu;
}

// Law of [j - A]+ + B with A ~ Geom(beta), B ~ Geom(beta_tilde), both on
// {0,1,...} with P(k) = (1-q) q^k. Independent of the cond_dist code path.
std::vector<double> convolution_law(const BetaPair& bp, std::size_t len) {
  const unsigned j = bp.j;
  std::vector<double> v1(len + 1, 0.0);
  v1[0] = std::pow(bp.beta, static_cast<double>(j)); // P(A >= j)
  for (unsigned m = 1; m <= j && m <= len; ++m)
    v1[m] = (1.0 - bp.beta) * std::pow(bp.beta, static_cast<double>(j - m));
  std::vector<double> out(len + 1, 0.0);
  for (std::size_t l = 0; l <= len; ++l) {
    double s = 0.0;
    for (std::size_t m = 0; m <= l; ++m)
      s += v1[m] * (1.0 - bp.beta_tilde) *
           std::pow(bp.beta_tilde, static_cast<double>(l - m));
    out[l] = s;
  }
  return out;
}
} // namespace

TEST_CASE("beta_j basics") {
  CHECK(beta_j(kUnit, 0).beta == 0.0);
  const BetaPair b1 = beta_j(kUnit, 1);
  CHECK(b1.beta == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  CHECK(std::abs(quad_residual(kUnit, 1, b1.beta)) < 1e-12);
}

TEST_CASE("beta_j quadratic residual and root-product identity") {
  for (unsigned j : {1u, 2u, 5u, 17u}) {
    for (double nu : {0.01, 1.0, 1e4}) {
      ModelParams p = kUnit;
      p.nu = nu;
      const BetaPair b = beta_j(p, j);
      CHECK(b.beta >= 0.0);
      CHECK(b.beta < 1.0);
      CHECK(std::abs(quad_residual(p, j, b.beta)) < 1e-12);
      // lambda * z1 * z2 = j*mu with z2 = 1/beta_tilde
      CHECK(p.lambda * b.beta / b.beta_tilde ==
            doctest::Approx(j * p.mu).epsilon(1e-12));
    }
  }
}

TEST_CASE("beta_j tends to 1 as nu -> 0 for stable speeds") {
  ModelParams p = kUnit;
  p.nu = 1e-6;
  CHECK(beta_j(p, 2).beta == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("cond_dist j=0 is geometric") {
  const CondDist cd = cond_dist(kUnit, 0, 30);
  for (std::size_t l = 0; l <= 30; ++l)
    CHECK(cd.pmf[l] ==
          doctest::Approx(std::pow(0.5, static_cast<double>(l + 1))).epsilon(1e-14));
}

TEST_CASE("cond_dist coefficient sum matches both closed forms") {
  for (unsigned j : {1u, 2u, 6u}) {
    const BetaPair b = beta_j(kUnit, j);
    const CondDist cd = cond_dist(kUnit, j, 10);
    double sum_c = 0.0;
    for (double c : cd.coeffs) sum_c += c;
    CHECK(sum_c == doctest::Approx(1.0 / (1.0 - b.beta)).epsilon(1e-12));
    const double alt = (j * kUnit.mu - kUnit.lambda * b.beta) / (kUnit.nu * b.beta);
    CHECK(sum_c == doctest::Approx(alt).epsilon(1e-12));
  }
}

TEST_CASE("cond_dist pmf is a probability law") {
  const CondDist cd = cond_dist(kUnit, 3, 120);
  double s = 0.0;
  for (double v : cd.pmf) {
    CHECK(v >= 0.0);
    s += v;
  }
  CHECK(s < 1.0 + 1e-12);
  CHECK(1.0 - s < 1e-6); // geometric tail deficit
  CHECK_THROWS_AS(cond_dist(kUnit, 5, 3), LengthTooShort);
}

TEST_CASE("cond_dist matches the restart-chain oracle") {
  const auto oracle = conditional_chain(kUnit, 3, 200);
  const CondDist cd = cond_dist(kUnit, 3, 40);
  for (std::size_t l = 0; l <= 40; ++l)
    CHECK(cd.pmf[l] == doctest::Approx(oracle[l]).epsilon(1e-8));
}

TEST_CASE("clipped-geometric decomposition of the conditional law") {
  for (double nu : {0.5, 2.0}) {
    ModelParams p = kUnit;
    p.nu = nu;
    for (unsigned j : {1u, 3u, 7u}) {
      const BetaPair b = beta_j(p, j);
      const auto conv = convolution_law(b, 60);
      const CondDist cd = cond_dist(p, j, 60);
      for (std::size_t l = 0; l <= 60; ++l)
        CHECK(cd.pmf[l] == doctest::Approx(conv[l]).epsilon(1e-10));
    }
  }
}

TEST_CASE("cond_mean") {
  CHECK(cond_mean(kUnit, 0) == doctest::Approx(1.0)); // lambda/nu
  for (unsigned j : {1u, 2u, 5u}) {
    const CondDist cd = cond_dist(kUnit, j, 400);
    double m = 0.0;
    for (std::size_t l = 0; l < cd.pmf.size(); ++l) m += l * cd.pmf[l];
    CHECK(cond_mean(kUnit, j) == doctest::Approx(m).epsilon(1e-8));
  }
  // sum_k k c_{k,j} closed form, spot check j=2, beta=1/2
  const double lhs = (2.0 - 3.0 * 0.5 + std::pow(0.5, 3)) / 0.25;
  CHECK(lhs == doctest::Approx(1.0 * 0.5 + 2.0 * 1.0));
}

TEST_CASE("sigma_solve agrees with the 2-D oracle") {
  const SigmaVector sv = sigma_solve(kUnit, 60);
  double sum = 0.0;
  for (double s : sv.sigma) sum += s;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sv.residual < 1e-9);

  const TruncatedChain chain = build_chain(kUnit, 70, 70);
  const JointDist od = stationary(chain);
  const auto osigma = od.speed_marginal();
  const auto ogamma = od.queue_marginal();
  for (std::size_t j = 0; j <= 25; ++j) {
    CHECK(sv.sigma[j] == doctest::Approx(osigma[j]).epsilon(1e-6));
    // control samples the queue at Poisson instants, so the two marginals agree
    CHECK(sv.sigma[j] == doctest::Approx(ogamma[j]).epsilon(1e-6));
  }
}

TEST_CASE("assemble_joint reproduces the oracle and its identities") {
  const SigmaVector sv = sigma_solve(kUnit, 60);
  const JointDist d = assemble_joint(kUnit, sv, 60);
  const TruncatedChain chain = build_chain(kUnit, 70, 70);
  const JointDist od = stationary(chain);
  for (std::size_t i = 0; i <= 30; ++i)
    for (std::size_t j = 0; j <= 30; ++j)
      CHECK(d.at(i, j) == doctest::Approx(od.at(i, j)).epsilon(1e-6));

  // marginal equality on the assembled table
  const auto gam = d.queue_marginal();
  const auto sig = d.speed_marginal();
  for (std::size_t k = 0; k <= 30; ++k)
    CHECK(gam[k] == doctest::Approx(sig[k]).epsilon(1e-6));

  // local balance: lambda gamma_i = sum_j j mu pi_{i+1,j}
  for (std::size_t i = 0; i <= 25; ++i) {
    double rhs = 0.0;
    for (std::size_t j = 0; j <= d.jmax(); ++j) rhs += j * kUnit.mu * d.at(i + 1, j);
    CHECK(kUnit.lambda * gam[i] == doctest::Approx(rhs).epsilon(1e-6));
  }

  // the lagging speed makes the queue longer than in M/M/1-at-rate-Q
  CHECK(d.mean_queue() > kUnit.rho());
  CHECK(d.mean_queue() == doctest::Approx(d.mean_speed()).epsilon(1e-8));
}

TEST_CASE("functional equation residual is small on the converged joint") {
  const SigmaVector sv = sigma_solve(kUnit, 80);
  const JointDist d = assemble_joint(kUnit, sv, 80);
  std::vector<std::pair<double, double>> grid;
  for (double x : {0.2, 0.5, 0.8})
    for (double y : {0.2, 0.5, 0.8}) grid.push_back({x, y});
  CHECK(functional_eq_residual(d, kUnit, grid) < 1e-6);
  // x = 1 reduces to the marginal-equality identity
  std::vector<std::pair<double, double>> edge{{1.0, 0.5}};
  CHECK(functional_eq_residual(d, kUnit, edge) < 1e-6);
  // small x goes through the balance equations
  std::vector<std::pair<double, double>> small{{0.01, 0.5}};
  CHECK(functional_eq_residual(d, kUnit, small) < 1e-6);
}

TEST_CASE("limit_nu_inf is the diagonal Poisson law") {
  const JointDist d = limit_nu_inf(kUnit, 40);
  CHECK(d.at(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(d.at(3, 2) == 0.0);
  CHECK(d.at(2, 3) == 0.0);
  CHECK(d.total_mass() == doctest::Approx(1.0).epsilon(1e-12));

  ModelParams p = kUnit;
  p.nu = 1e3;
  const JointDist d3 = assemble_joint(p, sigma_solve(p, 40), 40);
  p.nu = 1e4;
  const JointDist d4 = assemble_joint(p, sigma_solve(p, 40), 40);
  const double tv3 = tv_distance(d3, d);
  const double tv4 = tv_distance(d4, d);
  CHECK(tv3 < 0.05);
  CHECK(tv4 < tv3);
}

TEST_CASE("conjecture_pgf closed form") {
  CHECK(conjecture_pgf(1.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(conjecture_pgf(1.0, std::exp(-1.0), 1.0) == doctest::Approx(0.75));
  CHECK_THROWS_AS(conjecture_pgf(0.0, 0.5, 1.0), DomainError);
}
