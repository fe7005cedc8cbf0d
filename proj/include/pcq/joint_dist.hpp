#ifndef PCQ_JOINT_DIST_HPP
#define PCQ_JOINT_DIST_HPP

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "pcq/errors.hpp"

namespace pcq {

/// A truncated table of steady-state probabilities pi_{i,j} over
/// (queue length i <= qmax, speed j <= jmax). Small tables are stored
/// densely; above kSparseThreshold entries a hash map is used instead.
class JointDist {
public:
  static constexpr std::size_t kSparseThreshold = 1'000'000;

  JointDist(std::size_t qmax, std::size_t jmax);

  std::size_t qmax() const { return qmax_; }
  std::size_t jmax() const { return jmax_; }

  double at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double v);

  double total_mass() const;
  double mass_deficit() const { return 1.0 - total_mass(); }

  std::vector<double> queue_marginal() const; ///< gamma_i, length qmax+1
  std::vector<double> speed_marginal() const; ///< sigma_j, length jmax+1

  double mean_queue() const;
  double mean_speed() const;
  double prob_empty() const; ///< P(Q = 0)

private:
  std::size_t qmax_, jmax_;
  bool dense_;
  std::vector<double> table_;                      // dense storage
  std::unordered_map<std::size_t, double> sparse_; // sparse storage
};

/// Value of the (truncated) pgf sum pi_{i,j} x^i y^j for x,y in [0,1].
struct PgfPoint {
  double x, y, value;
};
PgfPoint pgf_eval(const JointDist& d, double x, double y);

/// d/dy of the truncated pgf.
double pgf_eval_dy(const JointDist& d, double x, double y);

/// Total-variation distance between two truncated tables
/// (entries outside the common support count fully).
double tv_distance(const JointDist& a, const JointDist& b);

} // namespace pcq

#endif
