#ifndef PCQ_SIMULATOR_HPP
#define PCQ_SIMULATOR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcq/joint_dist.hpp"
#include "pcq/params.hpp"

namespace pcq {

struct SimConfig {
  ModelParams params;
  double horizon = 1e5;   ///< simulated time
  double warmup = -1.0;   ///< simulated time; negative means 10% of horizon
  int batches = 30;
  std::uint64_t seed = 1;
  bool scaled = false;    ///< record nu*Q, nu*S instead of Q, S
  std::size_t table_qmax = 200; ///< truncation of the empirical table
  std::size_t table_jmax = 200;
  std::optional<std::vector<double>> profile; ///< finite controller only
};

/// Point estimate with a 95% batch-means confidence half-width.
struct SimEstimate {
  std::string name;
  double point = 0.0;
  double half_width = 0.0;
  int batches = 0;
};

struct SimResult {
  std::vector<SimEstimate> estimates; ///< EQ, ES, P0
  JointDist empirical;
  std::vector<double> upcross_rate;   ///< rate of Q: i -> i+1 per level
  std::vector<double> downcross_rate; ///< rate of Q: i+1 -> i per level
  std::vector<double> control_q_hist; ///< law of Q sampled at control instants
  std::uint64_t events = 0;

  const SimEstimate& estimate(const std::string& name) const;
};

SimResult simulate(const SimConfig& cfg);

/// Scaled-state measurements for the nu -> 0 conjecture of the infinite
/// controller: time fractions near each axis, the mean scaled coordinate
/// on each axis, and empirical pgf samples of (nu Q, nu S).
struct ConjectureProbe {
  SimEstimate frac_q_axis; ///< time with Q small, S on the fluid scale
  SimEstimate frac_s_axis; ///< time with S small, Q on the fluid scale
  SimEstimate mean_scaled_q; ///< mean of nu*Q during the Q-fluid phase
  SimEstimate mean_scaled_s; ///< mean of nu*S during the S-fluid phase
  std::vector<std::pair<std::pair<double, double>, SimEstimate>> pgf_samples;
};

ConjectureProbe conjecture_probe(const SimConfig& cfg,
                                 const std::vector<std::pair<double, double>>&
                                     pgf_grid = {});

/// Cycle-phase statistics of the finite controller at small nu.
struct FluidProbe {
  double frac_fluid_unstable = 0.0; ///< speed in S^-
  double frac_fluid_stable = 0.0;   ///< speed smax with Q above the threshold
  double frac_normal = 0.0;
  std::vector<double> occupancy; ///< speeds 0..smax then smax_f, sums to 1
  std::vector<double> drain_time_mean; ///< per prior speed j in S^-, in nu-time
  std::vector<std::uint64_t> drain_count;
  double threshold = 0.0; ///< Q > ceil(nu^{-1/2}) counts as fluid scale
};

FluidProbe fluid_probe(const SimConfig& cfg);

} // namespace pcq

#endif
