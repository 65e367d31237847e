#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "popindex/types.hpp"

namespace popindex {

// Coordinate map between the constrained model quantities and the flat
// unconstrained vector the sampler works in.
//
// Layout (variable variant):
//   [log N^F_t, log N^F_{t+1/2}] for t = 1..T, then the same for males,
//   then log a_t for t = 1..T, log a_bar, log tau, logit omega, log nu,
//   r, and log k when the recruitment extension is on.
//
// The fixed variant replaces the whole countability block by a single
// log a and drops omega (pinned at 1, so sigma_a = 0).
class StateLayout {
 public:
  StateLayout(int years, ModelConfig config);

  int dim() const { return dim_; }
  int years() const { return years_; }
  const ModelConfig& config() const { return config_; }

  // Coordinate indices. Coordinates hold the log of the quantity except
  // omega (logit) and r (untransformed). Accessors for coordinates absent
  // under the current variant return -1.
  int pre_f(int y) const { return 2 * y; }
  int post_f(int y) const { return 2 * y + 1; }
  int pre_m(int y) const { return 2 * years_ + 2 * y; }
  int post_m(int y) const { return 2 * years_ + 2 * y + 1; }
  int a(int y) const { return variable() ? 4 * years_ + y : 4 * years_; }
  int a_bar() const { return variable() ? 5 * years_ : 4 * years_; }
  int tau() const { return a_bar() + 1; }
  int omega() const { return variable() ? a_bar() + 2 : -1; }
  int nu() const { return variable() ? a_bar() + 3 : a_bar() + 2; }
  int r() const { return nu() + 1; }
  int k() const { return config_.with_k ? r() + 1 : -1; }

  // Names of the unconstrained coordinates, in layout order.
  std::vector<std::string> coordinate_names(int first_year = 1) const;
  // Names of the natural-scale view produced by decode().
  std::vector<std::string> decoded_names(int first_year = 1) const;

  Eigen::VectorXd pack(const PopulationTrajectory& traj,
                       const ModelParameters& params) const;
  void unpack(const Eigen::VectorXd& state, PopulationTrajectory& traj,
              ModelParameters& params) const;

  // Log absolute Jacobian of the unconstrained -> constrained map.
  double log_jacobian(const Eigen::VectorXd& state) const;

  // Natural-scale row matching decoded_names(): trajectory, countabilities,
  // parameters and the derived sigmas.
  Eigen::VectorXd decode(const Eigen::VectorXd& state) const;

 private:
  bool variable() const { return config_.variant == ModelVariant::variable; }

  int years_ = 0;
  ModelConfig config_;
  int dim_ = 0;
};

}  // namespace popindex
