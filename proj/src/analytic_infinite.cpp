#include "pcq/analytic_infinite.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cassert>
#include <cmath>

namespace pcq {

BetaPair beta_j(const ModelParams& p, unsigned j) {
  validate_params(p, true);
  if (j == 0) return {0, 0.0, 0.0};
  const double jmu = static_cast<double>(j) * p.mu;
  const double b = p.lambda + jmu + p.nu;
  const double disc = b * b - 4.0 * p.lambda * jmu;
  assert(disc >= 0.0);
  // Multiply-conjugate form of the smaller root; the textbook formula
  // cancels badly when nu >> j*mu.
  const double beta = 2.0 * jmu / (b + std::sqrt(disc));
  return {j, beta, p.lambda * beta / jmu};
}

CondDist cond_dist(const ModelParams& p, unsigned j, std::size_t L) {
  validate_params(p, true);
  if (L < j) throw LengthTooShort("cond_dist: L must be at least j");
  CondDist out;
  out.j = j;
  out.pmf.resize(L + 1);
  if (j == 0) {
    // Geometric: queue grows from the last reset, f_0(z) = nu/(nu+lambda(1-z)).
    const double q = p.lambda / (p.lambda + p.nu);
    double v = p.nu / (p.lambda + p.nu);
    for (std::size_t l = 0; l <= L; ++l) {
      out.pmf[l] = v;
      v *= q;
    }
    return out;
  }
  const BetaPair bp = beta_j(p, j);
  const double beta = bp.beta, bt = bp.beta_tilde;
  out.coeffs.resize(j + 1);
  out.coeffs[0] = std::pow(beta, static_cast<double>(j)) / (1.0 - beta);
  for (unsigned k = 1; k <= j; ++k)
    out.coeffs[k] = std::pow(beta, static_cast<double>(j - k));
  // p_j(l) = (nu/lambda) sum_{k<=min(l,j)} c_k bt^{l-k+1}, by recursion in l.
  const double scale = p.nu / p.lambda;
  double v = scale * out.coeffs[0] * bt;
  out.pmf[0] = v;
  for (std::size_t l = 1; l <= L; ++l) {
    v *= bt;
    if (l <= j) v += scale * out.coeffs[l] * bt;
    out.pmf[l] = v;
  }
  return out;
}

double cond_mean(const ModelParams& p, unsigned j) {
  validate_params(p, true);
  if (j == 0) return p.lambda / p.nu;
  const BetaPair bp = beta_j(p, j);
  const double beta = bp.beta, bt = bp.beta_tilde;
  const double sum_c = 1.0 / (1.0 - beta);
  const double jd = static_cast<double>(j);
  const double sum_kc =
      (jd - (jd + 1.0) * beta + std::pow(beta, jd + 1.0)) /
      ((1.0 - beta) * (1.0 - beta));
  return (p.nu * bt / p.lambda) *
         (bt * sum_c / ((1.0 - bt) * (1.0 - bt)) + sum_kc / (1.0 - bt));
}

namespace {

// Kernel row j = conditional pmf p_j(0..N).
Eigen::MatrixXd sigma_kernel(const ModelParams& p, std::size_t N) {
  Eigen::MatrixXd T(N + 1, N + 1);
  for (std::size_t j = 0; j <= N; ++j) {
    const CondDist cd = cond_dist(p, static_cast<unsigned>(j), N);
    for (std::size_t l = 0; l <= N; ++l) T(j, l) = cd.pmf[l];
  }
  return T;
}

std::vector<double> solve_fixed_point(const Eigen::MatrixXd& T) {
  const Eigen::Index n = T.rows();
  if (n <= 2001) {
    // sigma (T - I) = 0 with the last equation replaced by normalization.
    Eigen::MatrixXd A = (T - Eigen::MatrixXd::Identity(n, n)).transpose();
    A.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::VectorXd s = A.partialPivLu().solve(rhs);
    return {s.data(), s.data() + n};
  }
  // Power iteration for very large truncations.
  Eigen::RowVectorXd s = Eigen::RowVectorXd::Constant(n, 1.0 / double(n));
  for (int it = 0; it < 20000; ++it) {
    Eigen::RowVectorXd next = s * T;
    next /= next.sum();
    const double diff = (next - s).cwiseAbs().maxCoeff();
    s = next;
    if (diff < 1e-14) break;
  }
  return {s.data(), s.data() + n};
}

} // namespace

SigmaVector sigma_solve(const ModelParams& p, std::size_t initial_n,
                        double tail_tol) {
  validate_params(p);
  const double rho = p.rho();
  std::size_t N = initial_n;
  if (N == 0)
    N = std::max<std::size_t>(
        20, static_cast<std::size_t>(std::ceil(5.0 * rho + 10.0 * std::sqrt(rho))));
  for (int attempt = 0;; ++attempt) {
    const Eigen::MatrixXd T = sigma_kernel(p, N);
    std::vector<double> s = solve_fixed_point(T);
    // Tail mass over the top decile of indices.
    double tail = 0.0;
    const std::size_t tail_from = N - std::max<std::size_t>(1, N / 10);
    for (std::size_t j = tail_from; j <= N; ++j) tail += std::abs(s[j]);
    if (tail < tail_tol) {
      SigmaVector out;
      out.sigma = std::move(s);
      Eigen::Map<const Eigen::RowVectorXd> sv(out.sigma.data(), N + 1);
      out.residual = (sv * T - sv).cwiseAbs().maxCoeff();
      return out;
    }
    if (attempt >= 2)
      throw NoConvergence("sigma_solve: tail mass did not drop below tolerance");
    N *= 2;
  }
}

JointDist assemble_joint(const ModelParams& p, const SigmaVector& sv,
                         std::size_t L) {
  validate_params(p);
  const std::size_t N = sv.sigma.size() - 1;
  JointDist d(L, N);
  for (std::size_t j = 0; j <= N; ++j) {
    const CondDist cd = cond_dist(p, static_cast<unsigned>(j), L);
    for (std::size_t i = 0; i <= L; ++i) d.set(i, j, sv.sigma[j] * cd.pmf[i]);
  }
  return d;
}

double functional_eq_residual(const JointDist& d, const ModelParams& p,
                              std::span<const std::pair<double, double>> grid) {
  double worst = 0.0;
  double balance_res = -1.0; // lazily computed, shared by all small-x points
  for (const auto& [x, y] : grid) {
    if (x >= 0.05) {
      const double P = pgf_eval(d, x, y).value;
      const double dP = pgf_eval_dy(d, x, y);
      const double dP0 = pgf_eval_dy(d, 0.0, y);
      const double Pxy1 = pgf_eval(d, x * y, 1.0).value;
      const double r = (p.nu + p.lambda * (1.0 - x)) * P +
                       p.mu * y * (1.0 - 1.0 / x) * (dP - dP0) - p.nu * Pxy1;
      worst = std::max(worst, std::abs(r));
    } else {
      if (balance_res < 0.0) {
        balance_res = 0.0;
        const auto gamma = d.queue_marginal();
        for (std::size_t i = 0; i + 1 <= d.qmax(); ++i) {
          for (std::size_t j = 0; j <= d.jmax(); ++j) {
            const double jmu = static_cast<double>(j) * p.mu;
            const double restart = (i == j) ? p.nu * gamma[i] : 0.0;
            double r;
            if (i == 0) {
              r = (p.lambda + p.nu) * d.at(0, j) - jmu * d.at(1, j) - restart;
            } else {
              r = (p.lambda + jmu + p.nu) * d.at(i, j) -
                  p.lambda * d.at(i - 1, j) - jmu * d.at(i + 1, j) - restart;
            }
            balance_res = std::max(balance_res, std::abs(r));
          }
        }
      }
      worst = std::max(worst, balance_res);
    }
  }
  return worst;
}

JointDist limit_nu_inf(const ModelParams& p, std::size_t qmax) {
  validate_params(p, true);
  const double rho = p.rho();
  JointDist d(qmax, qmax);
  double v = std::exp(-rho);
  for (std::size_t i = 0; i <= qmax; ++i) {
    d.set(i, i, v);
    v *= rho / static_cast<double>(i + 1);
  }
  return d;
}

double conjecture_pgf(double x, double y, double lambda) {
  if (!(x > 0.0) || !(y > 0.0) || x > 1.0 || y > 1.0)
    throw DomainError("conjecture_pgf: x and y must lie in (0,1]");
  return 0.5 / (1.0 - lambda * std::log(x)) + 0.5 / (1.0 - lambda * std::log(y));
}

} // namespace pcq
