#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "popindex/types.hpp"

namespace popindex {

enum class StrategyKind { stable, hunter_biased, forestry_biased };

struct StrategySpec {
  StrategyKind kind = StrategyKind::stable;
  double target = 0.0;              // animals
  double prob = 0.9;                // in (0,1); unused by the stable strategy
  double current_female_pop = 0.0;  // N^F_t
};

// Per-draw parameters of the female line.
struct PosteriorDraws {
  std::vector<double> r;
  std::vector<double> k;        // zeros when the extension is off
  std::vector<double> sigma_f;

  int size() const { return static_cast<int>(r.size()); }
};

struct QuantileTable {
  std::vector<double> probs;
  std::vector<double> values;
};

// Distribution of next year's pre-hunt female population after harvesting
// `harvest` now: harvest transition then breeding transition, one replicate
// per (posterior draw, noise pair), common random numbers in the seed.
// Quantiles are type-7. Requires harvest < n_now.
QuantileTable predict_next_year(const PosteriorDraws& posterior, double n_now,
                                double harvest, int n_rep, std::uint64_t seed,
                                std::span<const double> probs = {});

// Solves the strategy for the harvest level, by bisection with common
// random numbers (tolerance 0.5 animals):
//   stable         - median(N_next) = target
//   hunter_biased  - largest H with P(N_next >= target) >= prob
//   forestry_biased- smallest H with P(N_next <= target) >= prob
// Throws InfeasibleStrategyError when no harvest in [0, n_now) satisfies
// the goal.
double solve_harvest(const PosteriorDraws& posterior, const StrategySpec& strategy,
                     int n_rep, std::uint64_t seed);

struct SweepRow {
  double harvest = 0.0;
  double q10 = 0.0, q50 = 0.0, q90 = 0.0;
};

// Quantile curves of N_next over a harvest grid (the material of a
// harvest-decision plot).
std::vector<SweepRow> harvest_sweep(const PosteriorDraws& posterior, double n_now,
                                    int n_points, int n_rep, std::uint64_t seed);

}  // namespace popindex
