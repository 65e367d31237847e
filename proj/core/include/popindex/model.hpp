#pragma once

#include <vector>

#include "popindex/types.hpp"

namespace popindex {

struct Variances {
  double sigma_f = 0.0;
  double sigma_m = 0.0;
  double sigma_a = 0.0;
};

// (tau, omega, nu) -> (sigma_F, sigma_M, sigma_a) with
// sigma_F = omega*tau, sigma_M = omega*tau*nu, sigma_a = (1-omega)*tau.
// Throws std::invalid_argument outside tau >= 0, omega in [0,1], nu >= 0.
Variances derive_variances(double tau, double omega, double nu);

// Yearly recruitment rate exp(r - k*log(n_female)). k = 0 gives the
// constant-rate model. Requires n_female > 0.
double recruitment_rate(double r, double k, double n_female);

// Structural checks on a dataset: at least one year, consecutive year
// labels, positive effort, nonnegative counts and harvests, positive
// survey estimates and log-sd. Empty result means the dataset is valid.
std::vector<ValidationIssue> validate_dataset(const Dataset& data);

// Checks a trajectory against the model support: positive abundances,
// matching length, and pre-hunt abundance above the recorded harvest.
std::vector<ValidationIssue> validate_trajectory(const PopulationTrajectory& traj,
                                                 const Dataset& data);

// Hyperparameter domain checks (positive scales and rates, etc.).
std::vector<ValidationIssue> validate_priors(const PriorConfig& priors);

}  // namespace popindex
