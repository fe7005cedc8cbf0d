#ifndef PCQ_ORACLE_HPP
#define PCQ_ORACLE_HPP

#include <Eigen/SparseCore>
#include <cstddef>
#include <optional>
#include <vector>

#include "pcq/joint_dist.hpp"
#include "pcq/params.hpp"

namespace pcq {

/// Full truncated generator of one model variant over states
/// (i <= qmax, j <= jmax). Arrivals at i = qmax are dropped and control
/// jumps targeting a speed above jmax are redirected to jmax; the error
/// introduced is bounded by the probability mass on the boundary.
struct TruncatedChain {
  ModelParams params;
  std::size_t qmax, jmax;
  Eigen::SparseMatrix<double> generator; ///< row-major state order i*(jmax+1)+j
  std::optional<std::vector<double>> profile; ///< service rate per speed index

  std::size_t index(std::size_t i, std::size_t j) const {
    return i * (jmax + 1) + j;
  }
};

/// Optional profile: service rate s_j for speed index j (finite controller
/// only); defaults to s_j = j*mu. Must be nonnegative and strictly increasing.
TruncatedChain build_chain(const ModelParams& p, std::size_t qmax,
                           std::size_t jmax,
                           std::optional<std::vector<double>> profile = {});

/// Solves pi G = 0, sum(pi) = 1 by sparse direct solve. Throws
/// TruncationTooSmall when the boundary mass exceeds boundary_tol.
JointDist stationary(const TruncatedChain& chain, double boundary_tol = 1e-10);

/// Stationary law of the one-dimensional conditional restart chain:
/// M/M/1 at rates (lambda, j*mu) restarting in state j at rate nu.
std::vector<double> conditional_chain(const ModelParams& p, unsigned j,
                                      std::size_t qmax);

} // namespace pcq

#endif
