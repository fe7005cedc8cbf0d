#include "pcq/params.hpp"

namespace pcq {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::ControllerInfinite: return "infinite";
    case Variant::ControllerFinite: return "finite";
    case Variant::ObserverMM1: return "observer-mm1";
    case Variant::ObserverMMInf: return "observer-mminf";
  }
  return "?";
}

std::optional<Variant> variant_from_string(const std::string& s) {
  if (s == "infinite") return Variant::ControllerInfinite;
  if (s == "finite") return Variant::ControllerFinite;
  if (s == "observer-mm1") return Variant::ObserverMM1;
  if (s == "observer-mminf") return Variant::ObserverMMInf;
  return std::nullopt;
}

ModelParams validate_params(const ModelParams& p, bool allow_unstable) {
  if (!(p.lambda > 0.0) || !(p.mu > 0.0) || !(p.nu > 0.0))
    throw NonPositiveRate("lambda, mu and nu must all be strictly positive");
  switch (p.variant) {
    case Variant::ControllerInfinite:
      if (p.smax)
        throw DomainError("infinite controller must not set a finite smax");
      break;
    case Variant::ControllerFinite:
      if (!p.smax || *p.smax < 1)
        throw DomainError("finite controller requires smax >= 1");
      if (!allow_unstable && !p.ergodic())
        throw UnstableFinite("lambda >= smax*mu: no steady state");
      break;
    case Variant::ObserverMM1:
      if (!(p.lambda < p.mu))
        throw UnstableObserver("MM1 observer requires lambda < mu");
      break;
    case Variant::ObserverMMInf:
      break;
  }
  return p;
}

} // namespace pcq
