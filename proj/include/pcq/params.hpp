#ifndef PCQ_PARAMS_HPP
#define PCQ_PARAMS_HPP

#include <optional>
#include <string>

#include "pcq/errors.hpp"

namespace pcq {

/// Which of the four queueing models is being analysed.
enum class Variant {
  ControllerInfinite, ///< speed set to the observed queue length, no cap
  ControllerFinite,   ///< speed set to min(observed queue length, smax)
  ObserverMM1,        ///< M/M/1 queue, observer only records the state
  ObserverMMInf       ///< M/M/infinity queue, observer only records the state
};

std::string to_string(Variant v);
std::optional<Variant> variant_from_string(const std::string& s);

/// Model parameters shared by all modules. Immutable after construction.
struct ModelParams {
  double lambda = 1.0; ///< arrival rate
  double mu = 1.0;     ///< per-server service rate
  double nu = 1.0;     ///< control / observation rate
  std::optional<unsigned> smax{}; ///< max speed; empty means infinite
  Variant variant = Variant::ControllerInfinite;

  double rho() const { return lambda / mu; }

  /// Ergodicity of the steady state. Finite controller needs lambda < smax*mu;
  /// the other three variants are ergodic for all positive rates (the MM1
  /// observer additionally needs lambda < mu, enforced by validate_params).
  bool ergodic() const {
    if (variant == Variant::ControllerFinite)
      return smax && lambda < static_cast<double>(*smax) * mu;
    if (variant == Variant::ObserverMM1) return lambda < mu;
    return true;
  }
};

/// Checks all parameter invariants and returns the parameters unchanged.
/// With allow_unstable set, a non-ergodic finite controller is accepted
/// (transient simulation only); steady-state solvers must leave it unset.
ModelParams validate_params(const ModelParams& p, bool allow_unstable = false);

} // namespace pcq

#endif
