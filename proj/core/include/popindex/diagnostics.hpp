#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "popindex/sampler.hpp"

namespace popindex {

// Type-7 sample quantile (linear interpolation of order statistics).
double quantile_type7(std::vector<double> values, double p);

struct EssResult {
  double ess = 0.0;
  bool degenerate = false;  // zero-variance input, ESS undefined
};

// Effective sample size via autocorrelation truncation (initial positive
// pair sums).
EssResult effective_sample_size(std::span<const double> draws);

// Potential scale reduction across chains of equal length, floored at 1.
// nullopt when undefined (fewer than two chains or zero variance).
std::optional<double> potential_scale_reduction(
    const std::vector<std::span<const double>>& chains);

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double median = 0.0;
  double q025 = 0.0, q10 = 0.0, q50 = 0.0, q90 = 0.0, q975 = 0.0;
  double ess = 0.0;
  bool ess_degenerate = false;
  std::optional<double> psrf;  // present when >= 2 chains and defined
};

struct PosteriorSummary {
  std::vector<ParameterSummary> parameters;  // decoded (natural-scale) view
  std::vector<double> acceptance_rates;      // per chain
  std::vector<std::uint64_t> seeds;
  long long draws_per_chain = 0;
};

// Decoded-view summary of one or more chains from the same model.
PosteriorSummary summarize(const std::vector<ChainOutput>& chains,
                           const StateLayout& layout, int first_year = 1);

std::string summary_to_json(const PosteriorSummary& summary);

struct KendallResult {
  double tau = 0.0;      // tau-b
  double p_value = 1.0;  // two-sided
};

// Kendall rank correlation between two equal-length series (n >= 3).
// Exact null p-value for untied data with n <= 12, normal approximation
// (tie-corrected) otherwise. Throws std::invalid_argument when either
// series is constant.
KendallResult kendall_tau(std::span<const double> a, std::span<const double> b);

}  // namespace popindex
