#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "popindex/types.hpp"

namespace popindex {

// Fixed per-year schedule or a fraction of the current pre-hunt population.
struct HarvestPolicy {
  enum class Kind { schedule, proportion };
  Kind kind = Kind::schedule;
  std::vector<SexPair> schedule;  // size T when kind == schedule
  SexPair fraction;               // in [0,1) per sex when kind == proportion
};

struct SimulationSpec {
  int years = 0;
  ModelParameters true_params;  // a_bar and sigmas drive the countability draw
  SexPair initial;              // pre-hunt abundances of year 1
  HarvestPolicy harvest;
  std::vector<double> effort;      // size T
  std::map<int, double> survey_sd; // 0-based year -> log-scale sd of the survey
  int first_year = 1;              // calendar label of year 1
  std::uint64_t seed = 0;
};

struct SimulationResult {
  PopulationTrajectory trajectory;
  std::vector<SexPair> harvest;  // realized harvest (equals the schedule when fixed)
  std::vector<double> a;         // realized yearly countability
  Dataset data;
};

// Draws the latent trajectory in grid order. Breeding outcomes are
// rejection-sampled to exceed the year's harvest, matching the truncated
// transition the likelihood normalizes. Throws NumericalError when a step
// needs more than 1e6 rejections (infeasible harvest policy).
PopulationTrajectory simulate_trajectory(const SimulationSpec& spec, std::mt19937_64& rng,
                                         std::vector<SexPair>* harvest_out = nullptr);

// Draws a_t from the countability hierarchy, Poisson index counts and
// log-normal survey estimates for the given trajectory.
Dataset simulate_observations(const PopulationTrajectory& traj,
                              const std::vector<SexPair>& harvest,
                              const SimulationSpec& spec, std::mt19937_64& rng,
                              std::vector<double>* a_out = nullptr);

// Trajectory + observations from a fresh engine seeded per the spec.
SimulationResult simulate(const SimulationSpec& spec);

// Max pointwise pmf difference between a count observation at effort e and
// the sum of two independent observations at efforts a1*e and a2*e, for a
// Poisson law with the given mean function of effort. The support covers
// all but 1e-12 of the probability mass.
double effort_homogeneity_discrepancy(const std::function<double(double)>& mean_of_effort,
                                      double effort, double a1, double a2);

// Finite discrete population distribution used by the variance check.
struct DiscreteDistribution {
  std::vector<double> values;
  std::vector<double> probs;
};

struct VarianceRow {
  double effort = 0.0;
  double var_scaled = 0.0;   // Var(Y/e)
  double limit_term = 0.0;   // Var(aN) = Var(E[Y | N, E=1])
  double residual = 0.0;     // E[aN]/e
};

// Exact decomposition Var(Y/e) = Var(aN) + E[aN]/e for the Poisson index
// law, one row per effort value.
std::vector<VarianceRow> variance_decomposition(const DiscreteDistribution& pop, double a,
                                                std::span<const double> efforts);

struct VarianceMcEstimate {
  double var_scaled = 0.0;
  double std_error = 0.0;  // of the variance estimate
};

// Monte Carlo counterpart of one decomposition row.
VarianceMcEstimate variance_decomposition_mc(const DiscreteDistribution& pop, double a,
                                             double effort, long long n_rep,
                                             std::uint64_t seed);

}  // namespace popindex
