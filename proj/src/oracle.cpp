#include "pcq/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <cmath>
#include <vector>

namespace pcq {

namespace {

double service_rate(const TruncatedChain& c, std::size_t i, std::size_t j) {
  if (i == 0) return 0.0;
  switch (c.params.variant) {
    case Variant::ControllerInfinite:
      return static_cast<double>(j) * c.params.mu;
    case Variant::ControllerFinite:
      return c.profile ? (*c.profile)[j] : static_cast<double>(j) * c.params.mu;
    case Variant::ObserverMM1:
      return c.params.mu;
    case Variant::ObserverMMInf:
      return static_cast<double>(i) * c.params.mu;
  }
  return 0.0;
}

} // namespace

TruncatedChain build_chain(const ModelParams& p, std::size_t qmax,
                           std::size_t jmax,
                           std::optional<std::vector<double>> profile) {
  validate_params(p);
  TruncatedChain c;
  c.params = p;
  c.qmax = qmax;
  if (p.variant == Variant::ControllerFinite) {
    if (jmax < *p.smax)
      throw DomainError("build_chain: jmax must be at least smax");
    jmax = *p.smax; // speeds above smax are unreachable
    if (profile) {
      if (profile->size() != jmax + 1)
        throw DomainError("build_chain: profile must have smax+1 entries");
      for (std::size_t j = 0; j + 1 <= jmax; ++j)
        if (!((*profile)[j] < (*profile)[j + 1]))
          throw NonIncreasingProfile("speed profile must be strictly increasing");
      if ((*profile)[0] < 0.0)
        throw NonIncreasingProfile("speed profile must be nonnegative");
      c.profile = std::move(profile);
    }
  } else if (profile) {
    throw DomainError("build_chain: profile only applies to the finite controller");
  }
  if (qmax < jmax) throw DomainError("build_chain: qmax must be >= jmax");
  c.jmax = jmax;

  const std::size_t n = (qmax + 1) * (jmax + 1);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(4 * n);
  std::vector<double> diag(n, 0.0);
  auto add = [&](std::size_t from, std::size_t to, double rate) {
    if (rate <= 0.0 || from == to) return;
    trip.emplace_back(static_cast<int>(from), static_cast<int>(to), rate);
    diag[from] -= rate;
  };
  const std::size_t cap =
      p.variant == Variant::ControllerFinite ? *p.smax : jmax;
  for (std::size_t i = 0; i <= qmax; ++i) {
    for (std::size_t j = 0; j <= jmax; ++j) {
      const std::size_t s = c.index(i, j);
      if (i < qmax) add(s, c.index(i + 1, j), p.lambda); // arrivals dropped at qmax
      add(s, c.index(i > 0 ? i - 1 : 0, j), service_rate(c, i, j));
      add(s, c.index(i, std::min(i, cap)), p.nu);
    }
  }
  for (std::size_t s = 0; s < n; ++s)
    trip.emplace_back(static_cast<int>(s), static_cast<int>(s), diag[s]);
  c.generator.resize(static_cast<int>(n), static_cast<int>(n));
  c.generator.setFromTriplets(trip.begin(), trip.end());
  return c;
}

JointDist stationary(const TruncatedChain& chain, double boundary_tol) {
  const std::size_t n = (chain.qmax + 1) * (chain.jmax + 1);
  // pi G = 0 with one balance equation traded for the normalization.
  Eigen::SparseMatrix<double> A = chain.generator.transpose();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(A.nonZeros() + n);
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      if (it.row() != static_cast<int>(n) - 1)
        trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                          it.value());
  for (std::size_t s = 0; s < n; ++s)
    trip.emplace_back(static_cast<int>(n) - 1, static_cast<int>(s), 1.0);
  Eigen::SparseMatrix<double> M(static_cast<int>(n), static_cast<int>(n));
  M.setFromTriplets(trip.begin(), trip.end());
  M.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(M);
  lu.factorize(M);
  if (lu.info() != Eigen::Success)
    throw SingularSystem("stationary: sparse LU factorization failed");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<int>(n));
  rhs(static_cast<int>(n) - 1) = 1.0;
  Eigen::VectorXd pi = lu.solve(rhs);

  const double residual =
      (pi.transpose() * chain.generator).cwiseAbs().maxCoeff();
  if (residual > 1e-9)
    throw SingularSystem("stationary: generator residual too large");

  JointDist d(chain.qmax, chain.jmax);
  double boundary = 0.0;
  for (std::size_t i = 0; i <= chain.qmax; ++i)
    for (std::size_t j = 0; j <= chain.jmax; ++j) {
      const double v = pi(static_cast<int>(chain.index(i, j)));
      d.set(i, j, v);
      if (i == chain.qmax) boundary += std::abs(v);
      if (chain.params.variant != Variant::ControllerFinite && j == chain.jmax)
        boundary += std::abs(v);
    }
  if (boundary > boundary_tol)
    throw TruncationTooSmall("stationary: boundary mass above tolerance");
  return d;
}

std::vector<double> conditional_chain(const ModelParams& p, unsigned j,
                                      std::size_t qmax) {
  validate_params(p, true);
  if (qmax < j) throw TruncationTooSmall("conditional_chain: qmax < j");
  const std::size_t n = qmax + 1;
  const double jmu = static_cast<double>(j) * p.mu;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n) G(i, i + 1) += p.lambda;
    if (i > 0) G(i, i - 1) += jmu;
    if (i != j) G(i, j) += p.nu;
    G(i, i) -= G.row(i).sum();
  }
  Eigen::MatrixXd A = G.transpose();
  A.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::VectorXd pi = A.partialPivLu().solve(rhs);
  if (std::abs(pi(n - 1)) > 1e-10)
    throw TruncationTooSmall("conditional_chain: boundary mass above 1e-10");
  return {pi.data(), pi.data() + n};
}

} // namespace pcq
