#ifndef PCQ_OBSERVERS_HPP
#define PCQ_OBSERVERS_HPP

#include <cstddef>

#include "pcq/joint_dist.hpp"
#include "pcq/params.hpp"

namespace pcq {

/// Closed form for the M/M/1 queue with a Poisson observer. x1 is the
/// root in (0,1) of lambda x^2 - (lambda+mu+nu) x + mu = 0.
struct Mm1ObserverForm {
  ModelParams params;
  double x1;
  double x2; ///< the companion root > 1; x1*x2 = mu/lambda
};

Mm1ObserverForm mm1_observer_form(const ModelParams& p);

/// Joint pgf of (queue, last observed queue). The removable singularity
/// at x = x1 and the x -> 0 endpoint are evaluated by limiting forms.
double mm1_obs_pgf(const Mm1ObserverForm& f, double x, double y);

/// pi table extracted from the double geometric series of the closed form.
JointDist mm1_obs_joint(const ModelParams& p, std::size_t qmax,
                        std::size_t jmax);

/// Series form for the M/M/infinity queue with a Poisson observer:
/// coefficients h_k = (nu/(nu+k mu)) rho^k / k! of (x-1)^k (y-1)^k.
struct MmInfObserverForm {
  ModelParams params;
  std::vector<double> h; ///< adaptive order, last term < 1e-14
};

MmInfObserverForm mminf_observer_form(const ModelParams& p);

double mminf_obs_pgf(const MmInfObserverForm& f, double x, double y);

/// Residuals of the stationary functional equations of the two observer
/// models at an interior point (x in (0,1], y in [0,1]); zero up to
/// roundoff when evaluated on the closed forms.
double mm1_obs_residual(const Mm1ObserverForm& f, double x, double y);
double mminf_obs_residual(const MmInfObserverForm& f, double x, double y);

/// Integral representation of the same pgf, evaluated by adaptive
/// Gauss-Kronrod after substituting away the u^{nu/mu-1} endpoint
/// singularity.
double mminf_obs_pgf_integral(const ModelParams& p, double x, double y);

} // namespace pcq

#endif
