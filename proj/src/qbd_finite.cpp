#include "pcq/qbd_finite.hpp"

#include <algorithm>
#include <cmath>

#include "pcq/analytic_infinite.hpp"

namespace pcq {

namespace {

unsigned require_finite(const ModelParams& p) {
  if (p.variant != Variant::ControllerFinite || !p.smax)
    throw DomainError("finite controller parameters required");
  return *p.smax;
}

void require_ergodic(const ModelParams& p) {
  if (!p.ergodic()) throw Unstable("lambda >= smax*mu: no steady state");
}

} // namespace

QbdBlocks::QbdBlocks(const ModelParams& p,
                     std::optional<std::vector<double>> profile)
    : smax_(require_finite(p)), lambda_(p.lambda), nu_(p.nu) {
  validate_params(p, true);
  const std::size_t m = smax_ + 1;
  rates_.resize(m);
  if (profile) {
    if (profile->size() != m)
      throw DomainError("speed profile must have smax+1 entries");
    for (std::size_t j = 0; j + 1 < m; ++j)
      if (!((*profile)[j] < (*profile)[j + 1]))
        throw NonIncreasingProfile("speed profile must be strictly increasing");
    if ((*profile)[0] < 0.0)
      throw NonIncreasingProfile("speed profile must be nonnegative");
    rates_ = *profile;
  } else {
    for (std::size_t j = 0; j < m; ++j)
      rates_[j] = static_cast<double>(j) * p.mu;
  }
  a0_ = Eigen::MatrixXd::Identity(m, m) * p.lambda;
  a2_ = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t j = 0; j < m; ++j) a2_(j, j) = rates_[j];
}

Eigen::MatrixXd QbdBlocks::a1(std::size_t level) const {
  const std::size_t m = smax_ + 1;
  const std::size_t t = std::min<std::size_t>(level, smax_);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    if (j == t) {
      a(j, j) = -(lambda_ + rates_[t]);
    } else {
      a(j, j) = -(lambda_ + rates_[j] + nu_);
      a(j, t) = nu_;
    }
  }
  return a;
}

QbdBlocks build_blocks(const ModelParams& p,
                       std::optional<std::vector<double>> profile) {
  return QbdBlocks(p, std::move(profile));
}

Eigen::MatrixXd RMatrix::dense() const {
  const std::size_t m = smax + 1;
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t i = 0; i < m; ++i) r(i, i) = diag[i];
  for (std::size_t i = 0; i + 1 < m; ++i) r(i, smax) = lastcol[i];
  return r;
}

double RMatrix::spectral_radius() const {
  return *std::max_element(diag.begin(), diag.end());
}

RMatrix r_matrix(const ModelParams& p) {
  const unsigned s = require_finite(p);
  require_ergodic(p);
  RMatrix r;
  r.smax = s;
  r.diag.resize(s + 1);
  r.lastcol.resize(s + 1);
  const double smu = static_cast<double>(s) * p.mu;
  r.diag[0] = p.lambda / (p.lambda + p.nu);
  r.lastcol[0] = p.lambda / smu;
  for (unsigned i = 1; i < s; ++i) {
    const double beta = beta_j(p, i).beta;
    r.diag[i] = p.lambda * beta / (static_cast<double>(i) * p.mu);
    r.lastcol[i] = p.lambda * (1.0 - beta) / smu;
  }
  r.diag[s] = p.lambda / smu;
  r.lastcol[s] = r.diag[s];
  return r;
}

Eigen::MatrixXd r_power(const RMatrix& R, unsigned n) {
  const std::size_t m = R.smax + 1;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  const double ds = R.diag[R.smax];
  for (std::size_t i = 0; i < m; ++i) {
    const double di = R.diag[i];
    out(i, i) = std::pow(di, static_cast<double>(n));
    if (i == R.smax) continue;
    double mix;
    if (std::abs(ds - di) < 1e-9) {
      // removable singularity: (ds^n - di^n)/(ds - di) -> n di^{n-1}
      mix = n == 0 ? 0.0
                   : static_cast<double>(n) *
                         std::pow(di, static_cast<double>(n - 1));
    } else {
      mix = (std::pow(ds, static_cast<double>(n)) -
             std::pow(di, static_cast<double>(n))) /
            (ds - di);
    }
    out(i, R.smax) = R.lastcol[i] * mix;
  }
  return out;
}

QbdSolution::QbdSolution(std::vector<Eigen::RowVectorXd> boundary, RMatrix r)
    : boundary_(std::move(boundary)), r_(std::move(r)) {}

Eigen::RowVectorXd QbdSolution::level(std::size_t n) const {
  const unsigned s = r_.smax;
  if (n + 1 < static_cast<std::size_t>(s)) return boundary_[n];
  return boundary_[s - 1] * r_power(r_, static_cast<unsigned>(n - s + 1));
}

std::vector<double> QbdSolution::speed_marginal() const {
  const unsigned s = r_.smax;
  const std::size_t m = s + 1;
  const Eigen::MatrixXd inv =
      (Eigen::MatrixXd::Identity(m, m) - r_.dense()).inverse();
  Eigen::RowVectorXd sig = boundary_[s - 1] * inv;
  for (unsigned n = 0; n + 1 < s; ++n) sig += boundary_[n];
  return {sig.data(), sig.data() + m};
}

double QbdSolution::mean_queue() const {
  const unsigned s = r_.smax;
  const std::size_t m = s + 1;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);
  const Eigen::MatrixXd R = r_.dense();
  const Eigen::MatrixXd inv = (I - R).inverse();
  double eq = 0.0;
  for (unsigned n = 0; n + 1 < s; ++n)
    eq += static_cast<double>(n) * boundary_[n].sum();
  // sum_{n >= s-1} n pi_n = pi_{s-1} [ (s-1)(I-R)^{-1} + R(I-R)^{-2} ]
  const Eigen::MatrixXd tail =
      static_cast<double>(s - 1) * inv + R * inv * inv;
  eq += (boundary_[s - 1] * tail).sum();
  return eq;
}

double QbdSolution::mean_speed() const {
  const auto sig = speed_marginal();
  double es = 0.0;
  for (std::size_t j = 0; j < sig.size(); ++j)
    es += static_cast<double>(j) * sig[j];
  return es;
}

double QbdSolution::prob_empty() const { return level(0).sum(); }

double QbdSolution::tail_mass_at_smax(std::size_t k) const {
  const unsigned s = r_.smax;
  const std::size_t m = s + 1;
  double mass = 0.0;
  for (std::size_t n = k + 1; n + 1 < static_cast<std::size_t>(s); ++n)
    mass += boundary_[n](s);
  const std::size_t start = std::max<std::size_t>(k + 1, s - 1);
  const Eigen::MatrixXd inv =
      (Eigen::MatrixXd::Identity(m, m) - r_.dense()).inverse();
  const Eigen::RowVectorXd tail =
      boundary_[s - 1] * r_power(r_, static_cast<unsigned>(start - s + 1)) * inv;
  mass += tail(s);
  return mass;
}

JointDist QbdSolution::to_joint(std::size_t qmax) const {
  JointDist d(qmax, r_.smax);
  for (std::size_t n = 0; n <= qmax; ++n) {
    const Eigen::RowVectorXd pin = level(n);
    for (unsigned j = 0; j <= r_.smax; ++j) d.set(n, j, pin(j));
  }
  return d;
}

QbdSolution solve_boundary(const ModelParams& p) {
  const unsigned s = require_finite(p);
  require_ergodic(p);
  validate_params(p);
  const QbdBlocks blocks(p);
  const RMatrix R = r_matrix(p);
  const std::size_t m = s + 1;
  const std::size_t nu = static_cast<std::size_t>(s) * m; // unknown count

  // u K = 0 over levels 0..s-1 with the tail closed through R, and the
  // last equation traded for the normalization row.
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nu, nu);
  auto block = [&](std::size_t mrow, std::size_t leq) {
    return K.block(mrow * m, leq * m, m, m);
  };
  for (unsigned l = 0; l < s; ++l) {
    if (l > 0) block(l - 1, l) += blocks.a0();
    block(l, l) += blocks.a1(l);
    // an empty queue cannot serve: give the departure rates back to the
    // diagonal of the level-0 block
    if (l == 0) block(0, 0) += blocks.a2();
    if (l + 1 < s) {
      block(l + 1, l) += blocks.a2();
    } else {
      block(l, l) += R.dense() * blocks.a2();
    }
  }
  const Eigen::MatrixXd inv =
      (Eigen::MatrixXd::Identity(m, m) - R.dense()).inverse();
  const Eigen::VectorXd tail_weight = inv * Eigen::VectorXd::Ones(m);
  Eigen::VectorXd norm(nu);
  for (unsigned l = 0; l < s; ++l)
    for (std::size_t j = 0; j < m; ++j)
      norm(l * m + j) = (l + 1 < s) ? 1.0 : tail_weight(j);
  K.col(nu - 1) = norm;

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nu);
  rhs(nu - 1) = 1.0;
  Eigen::VectorXd u = K.transpose().partialPivLu().solve(rhs);
  if (!u.allFinite() || (K.transpose() * u - rhs).cwiseAbs().maxCoeff() > 1e-8)
    throw SingularBoundary("solve_boundary: boundary system is singular");

  std::vector<Eigen::RowVectorXd> boundary(s);
  for (unsigned l = 0; l < s; ++l)
    boundary[l] = u.segment(l * m, m).transpose();
  return QbdSolution(std::move(boundary), R);
}

ClosedFormS1 closed_form_s1(const ModelParams& p) {
  const unsigned s = require_finite(p);
  if (s != 1) throw DomainError("closed_form_s1: smax must be 1");
  require_ergodic(p);
  ClosedFormS1 out;
  out.params = p;
  out.pi00 = p.nu * (p.mu - p.lambda) / (p.mu * (2.0 * p.lambda + p.nu));
  return out;
}

double ClosedFormS1::pi(std::size_t n, unsigned j) const {
  const double lam = params.lambda, mu = params.mu, nu = params.nu;
  const double nd = static_cast<double>(n);
  if (j == 0) return std::pow(lam / (lam + nu), nd) * pi00;
  if (j != 1) return 0.0;
  const double a = lam + nu - mu;
  if (std::abs(a) < 1e-9) // the two geometric terms coalesce
    return (lam / nu + nd) * std::pow(lam / mu, nd) * pi00;
  const double c = (lam + nu) / a;
  return ((lam / nu + c) * std::pow(lam / mu, nd) -
          c * std::pow(lam / (lam + nu), nd)) *
         pi00;
}

double ClosedFormS1::pgf(double x, double y) const {
  const double lam = params.lambda, mu = params.mu, nu = params.nu;
  const double g0 = (lam + nu) / (nu + lam * (1.0 - x)); // speed-0 geometric
  const double a = lam + nu - mu;
  if (std::abs(a) < 1e-9) {
    const double g1 = mu / (mu - lam * x);
    return pi00 * (g0 + y * ((lam / nu) * g1 + mu * lam * x / ((mu - lam * x) * (mu - lam * x))));
  }
  const double c = (lam + nu) / a;
  return pi00 * (g0 - c * g0 * y + (lam / nu + c) * mu / (mu - lam * x) * y);
}

JointDist ClosedFormS1::to_joint(std::size_t qmax) const {
  JointDist d(qmax, 1);
  for (std::size_t n = 0; n <= qmax; ++n) {
    d.set(n, 0, pi(n, 0));
    d.set(n, 1, pi(n, 1));
  }
  return d;
}

JointDist limit_nu_inf_finite(const ModelParams& p, std::size_t qmax) {
  const unsigned s = require_finite(p);
  require_ergodic(p);
  const double rho = p.rho();
  const double sd = static_cast<double>(s);
  // M/M/s normalization constant
  double norm = 0.0, term = 1.0;
  for (unsigned q = 0; q <= s; ++q) {
    norm += term;
    term *= rho / static_cast<double>(q + 1);
  }
  double last = std::exp(sd * std::log(rho) - std::lgamma(sd + 1.0));
  norm += last * (rho / sd) / (1.0 - rho / sd);
  const double pi00 = 1.0 / norm;

  JointDist d(qmax, s);
  double v = pi00;
  for (std::size_t q = 0; q <= qmax; ++q) {
    const unsigned j = static_cast<unsigned>(std::min<std::size_t>(q, s));
    d.set(q, j, v);
    v *= rho / (q < s ? static_cast<double>(q + 1) : sd);
  }
  return d;
}

FluidCycle fluid_cycle(const ModelParams& p) {
  const unsigned s = require_finite(p);
  require_ergodic(p);
  FluidCycle fc;
  for (unsigned j = 0; j <= s; ++j) {
    const double drift = static_cast<double>(j) * p.mu - p.lambda;
    if (std::abs(drift) < 1e-12 * std::max(p.lambda, p.mu))
      throw BoundarySpeed("fluid_cycle: some speed j has j*mu = lambda exactly");
    (drift < 0.0 ? fc.s_minus : fc.s_plus).push_back(j);
  }
  const std::size_t n = s + 2; // speeds 0..s, then smax_f
  const std::size_t sf = s + 1;
  fc.kernel = Eigen::MatrixXd::Zero(n, n);
  for (unsigned j : fc.s_minus) fc.kernel(j, sf) = 1.0;
  for (unsigned i : fc.s_plus) {
    const double ri = p.lambda / (static_cast<double>(i) * p.mu);
    for (unsigned j = 0; j < s; ++j)
      fc.kernel(i, j) = (1.0 - ri) * std::pow(ri, static_cast<double>(j));
    fc.kernel(i, s) = std::pow(ri, static_cast<double>(s));
  }
  fc.kernel(sf, s) = 1.0;

  const std::size_t np = fc.s_plus.size(), nm = fc.s_minus.size();
  Eigen::MatrixXd V(np, np), V0(np, nm);
  for (std::size_t a = 0; a < np; ++a) {
    for (std::size_t b = 0; b < np; ++b)
      V(a, b) = fc.kernel(fc.s_plus[a], fc.s_plus[b]);
    for (std::size_t b = 0; b < nm; ++b)
      V0(a, b) = fc.kernel(fc.s_plus[a], fc.s_minus[b]);
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(np);
  b(np - 1) = 1.0; // s_plus is sorted, smax is its last element
  const Eigen::RowVectorXd theta =
      (Eigen::MatrixXd::Identity(np, np) - V)
          .transpose()
          .partialPivLu()
          .solve(b)
          .transpose();
  const double kappa = theta.sum();
  const Eigen::RowVectorXd theta_v0 = theta * V0;

  fc.psi = Eigen::VectorXd::Zero(n);
  const double denom = 2.0 + kappa;
  for (std::size_t a = 0; a < nm; ++a)
    fc.psi(fc.s_minus[a]) = theta_v0(a) / denom;
  for (std::size_t a = 0; a < np; ++a)
    fc.psi(fc.s_plus[a]) = theta(a) / denom;
  fc.psi(sf) = 1.0 / denom;

  double drained = 0.0;
  for (std::size_t a = 0; a < nm; ++a)
    drained += theta_v0(a) * static_cast<double>(fc.s_minus[a]) * p.mu;
  fc.tau_sf = (p.lambda - drained) / (static_cast<double>(s) * p.mu - p.lambda);

  fc.tau = Eigen::VectorXd::Ones(n);
  fc.tau(sf) = fc.tau_sf;
  fc.sigma = fc.psi.cwiseProduct(fc.tau);
  fc.sigma /= fc.sigma.sum();
  fc.residual =
      (fc.psi.transpose() * fc.kernel - fc.psi.transpose()).cwiseAbs().maxCoeff();
  return fc;
}

FluidPgfs fluid_pgfs(const FluidCycle& fc, const ModelParams& p, double x,
                     double y) {
  if (!(x > 0.0) || x > 1.0 || !(y > 0.0) || y > 1.0)
    throw DomainError("fluid_pgfs: x and y must lie in (0,1]");
  const unsigned s = *p.smax;
  const double smu = static_cast<double>(s) * p.mu;
  double phat = 0.0, ptilde = 0.0;
  for (unsigned j : fc.s_minus) {
    const double drift = p.lambda - static_cast<double>(j) * p.mu;
    phat += fc.sigma(j) / (1.0 - drift * std::log(x)) *
            (std::pow(y, static_cast<double>(j)) +
             drift / (smu - p.lambda) * std::pow(y, static_cast<double>(s)));
  }
  for (unsigned j : fc.s_plus) {
    const double rj = p.lambda / (static_cast<double>(j) * p.mu);
    phat += std::pow(y, static_cast<double>(j)) * fc.sigma(j);
    ptilde += (1.0 - rj) / (1.0 - rj * x) *
              std::pow(y, static_cast<double>(j)) * fc.sigma(j);
  }
  return {phat, ptilde};
}

double qbd_to_pgf(const QbdSolution& sol, double x, double y) {
  if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
    throw DomainError("qbd_to_pgf: x and y must lie in [0,1]");
  const unsigned s = sol.smax();
  const RMatrix& R = sol.r();
  double out = 0.0;
  double xp = 1.0;
  for (unsigned n = 0; n + 1 < s; ++n) {
    double row = 0.0, yp = 1.0;
    for (unsigned j = 0; j <= s; ++j) {
      row += sol.boundary()[n](j) * yp;
      yp *= y;
    }
    out += xp * row;
    xp *= x;
  }
  // explicit (I - Rx)^{-1} applied to [1, y, ..., y^s]
  const double ds = R.diag[s];
  const double ys = std::pow(y, static_cast<double>(s));
  double yp = 1.0;
  for (unsigned i = 0; i <= s; ++i) {
    double vi = yp / (1.0 - R.diag[i] * x);
    if (i < s)
      vi += R.lastcol[i] * x * ys / ((1.0 - ds * x) * (1.0 - R.diag[i] * x));
    out += xp * sol.boundary()[s - 1](i) * vi;
    yp *= y;
  }
  return out;
}

} // namespace pcq
