#ifndef PCQ_ANALYTIC_INFINITE_HPP
#define PCQ_ANALYTIC_INFINITE_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "pcq/joint_dist.hpp"
#include "pcq/params.hpp"

namespace pcq {

/// beta_j: root in [0,1) of lambda z^2 - (lambda+nu+j mu) z + j mu = 0,
/// and beta_tilde_j = lambda beta_j / (j mu) (0 for j = 0).
struct BetaPair {
  unsigned j;
  double beta;
  double beta_tilde;
};

BetaPair beta_j(const ModelParams& p, unsigned j);

/// Conditional queue-length law given speed j, to working length L:
/// generating-function coefficients c_{0..j} and pmf p_j(0..L).
struct CondDist {
  unsigned j;
  std::vector<double> coeffs; ///< c_{k,j}, k = 0..j (empty for j = 0)
  std::vector<double> pmf;    ///< p_j(0..L)
};

CondDist cond_dist(const ModelParams& p, unsigned j, std::size_t L);

/// E[Q | S=j]; lambda/nu for j = 0, closed form otherwise.
double cond_mean(const ModelParams& p, unsigned j);

/// Speed marginal sigma_0..sigma_N, solved from the fixed point
/// sigma = sigma T where row j of T is the conditional pmf p_j(.).
struct SigmaVector {
  std::vector<double> sigma;
  double residual; ///< max violation of the balance system
};

SigmaVector sigma_solve(const ModelParams& p, std::size_t initial_n = 0,
                        double tail_tol = 1e-9);

/// pi_{i,j} = sigma_j p_j(i), truncated at (L, sigma.size()-1).
JointDist assemble_joint(const ModelParams& p, const SigmaVector& sigma,
                         std::size_t L);

/// Max residual of the stationary functional equation over the grid.
/// Points with x < 0.05 are checked through the balance equations
/// instead (the 1/x factor has a removable singularity there).
double functional_eq_residual(const JointDist& d, const ModelParams& p,
                              std::span<const std::pair<double, double>> grid);

/// nu -> infinity limit: Poisson(rho) concentrated on the diagonal.
JointDist limit_nu_inf(const ModelParams& p, std::size_t qmax);

/// Conjectured nu -> 0 limit pgf of (nu Q, nu S); unproven, exposed for
/// comparison with simulation only.
double conjecture_pgf(double x, double y, double lambda);

} // namespace pcq

#endif
