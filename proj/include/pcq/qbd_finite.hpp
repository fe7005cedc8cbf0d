#ifndef PCQ_QBD_FINITE_HPP
#define PCQ_QBD_FINITE_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <vector>

#include "pcq/joint_dist.hpp"
#include "pcq/params.hpp"

namespace pcq {

/// Generator blocks of the finite-speed QBD. A1 blocks are level
/// dependent below smax and constant from level smax on.
class QbdBlocks {
public:
  QbdBlocks(const ModelParams& p,
            std::optional<std::vector<double>> profile = {});

  unsigned smax() const { return smax_; }
  const Eigen::MatrixXd& a0() const { return a0_; }
  const Eigen::MatrixXd& a2() const { return a2_; }
  Eigen::MatrixXd a1(std::size_t level) const;

private:
  unsigned smax_;
  double lambda_, nu_;
  std::vector<double> rates_; // service rate per speed index
  Eigen::MatrixXd a0_, a2_;
};

QbdBlocks build_blocks(const ModelParams& p,
                       std::optional<std::vector<double>> profile = {});

/// Closed-form rate matrix: diagonal plus a last column.
struct RMatrix {
  std::vector<double> diag;    ///< R_{ii}, i = 0..smax
  std::vector<double> lastcol; ///< R_{i,smax}; lastcol[smax] == diag[smax]
  unsigned smax;

  Eigen::MatrixXd dense() const;
  double spectral_radius() const;
};

RMatrix r_matrix(const ModelParams& p);

/// Closed-form R^n (diagonal powers plus a geometric-mixture last column).
Eigen::MatrixXd r_power(const RMatrix& R, unsigned n);

/// Boundary vectors pi_0..pi_{smax-1} plus the matrix-geometric tail.
class QbdSolution {
public:
  QbdSolution(std::vector<Eigen::RowVectorXd> boundary, RMatrix r);

  unsigned smax() const { return r_.smax; }
  const RMatrix& r() const { return r_; }
  const std::vector<Eigen::RowVectorXd>& boundary() const { return boundary_; }

  Eigen::RowVectorXd level(std::size_t n) const; ///< pi_n for any n >= 0
  std::vector<double> speed_marginal() const;    ///< sigma_j, exact tail sum
  double mean_queue() const;
  double mean_speed() const;
  double prob_empty() const;
  /// Mass with Q > k at speed smax (exact geometric tail), used for the
  /// fluid/normal scale split when comparing against the nu -> 0 limit.
  double tail_mass_at_smax(std::size_t k) const;
  JointDist to_joint(std::size_t qmax) const;

private:
  std::vector<Eigen::RowVectorXd> boundary_;
  RMatrix r_;
};

QbdSolution solve_boundary(const ModelParams& p);

/// Explicit s=1 solution. Handles the removable singularity at
/// lambda + nu = mu by the limiting form.
struct ClosedFormS1 {
  ModelParams params;
  double pi00;
  double pi(std::size_t n, unsigned j) const;
  double pgf(double x, double y) const;
  JointDist to_joint(std::size_t qmax) const;
};

ClosedFormS1 closed_form_s1(const ModelParams& p);

/// nu -> infinity limit: M/M/smax law on states (q, min(q, smax)).
JointDist limit_nu_inf_finite(const ModelParams& p, std::size_t qmax);

/// nu -> 0 embedded-chain cycle structure. State order: speeds 0..smax,
/// then the bookkeeping state smax_f (queue on the fluid scale) last.
struct FluidCycle {
  std::vector<unsigned> s_minus, s_plus;
  Eigen::MatrixXd kernel; ///< M over S union {smax_f}, size smax+2
  Eigen::VectorXd psi;    ///< stationary law of the embedded chain
  Eigen::VectorXd tau;    ///< mean holding times (all 1 except smax_f)
  Eigen::VectorXd sigma;  ///< time-stationary speed marginal
  double tau_sf;
  double residual; ///< max |psi - psi M|
};

FluidCycle fluid_cycle(const ModelParams& p);

/// Fluid-scale and normal-scale limit pgfs of the nu -> 0 regime.
struct FluidPgfs {
  double phat;   ///< queue on the fluid scale
  double ptilde; ///< queue on the normal scale
};

FluidPgfs fluid_pgfs(const FluidCycle& fc, const ModelParams& p, double x,
                     double y);

/// Joint pgf from the matrix-geometric solution via the explicit
/// (I - Rx)^{-1} form.
double qbd_to_pgf(const QbdSolution& sol, double x, double y);

} // namespace pcq

#endif
