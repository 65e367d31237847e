#include "popindex/management.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "popindex/diagnostics.hpp"
#include "popindex/errors.hpp"
#include "popindex/model.hpp"

namespace popindex {

namespace {

constexpr double kBreedSd = 0.8660254037844386;  // sqrt(3/4)
constexpr double kHarvestSd = 0.5;               // sqrt(1/4)

void check_posterior(const PosteriorDraws& posterior) {
  if (posterior.r.empty())
    throw std::invalid_argument("management: posterior draws are empty");
  if (posterior.sigma_f.size() != posterior.r.size() ||
      (!posterior.k.empty() && posterior.k.size() != posterior.r.size()))
    throw std::invalid_argument("management: posterior draw columns differ in length");
}

// Replicates share their noise across harvest levels (common random
// numbers), so every next-year population is pathwise monotone in the
// harvest and bisection converges.
class PredictiveSampler {
 public:
  PredictiveSampler(const PosteriorDraws& posterior, int n_rep, std::uint64_t seed)
      : posterior_(posterior), n_rep_(n_rep) {
    if (n_rep < 1) throw std::invalid_argument("management: n_rep must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    z_harvest_.resize(n_rep);
    z_breed_.resize(n_rep);
    for (int i = 0; i < n_rep; ++i) {
      z_harvest_[i] = normal(rng);
      z_breed_[i] = normal(rng);
    }
  }

  // One-year-ahead female population: harvest transition then breeding.
  double next_pop(double n_now, double harvest, int i) const {
    const int d = i % posterior_.size();
    const double sigma = posterior_.sigma_f[d];
    const double k = posterior_.k.empty() ? 0.0 : posterior_.k[d];
    const double post =
        (n_now - harvest) * std::exp(kHarvestSd * sigma * z_harvest_[i]);
    const double rt = recruitment_rate(posterior_.r[d], k, post);
    return (rt + 1.0) * post * std::exp(kBreedSd * sigma * z_breed_[i]);
  }

  std::vector<double> sample(double n_now, double harvest) const {
    std::vector<double> values(n_rep_);
    for (int i = 0; i < n_rep_; ++i) values[i] = next_pop(n_now, harvest, i);
    return values;
  }

  int n_rep() const { return n_rep_; }

 private:
  const PosteriorDraws& posterior_;
  int n_rep_;
  std::vector<double> z_harvest_, z_breed_;
};

}  // namespace

QuantileTable predict_next_year(const PosteriorDraws& posterior, double n_now,
                                double harvest, int n_rep, std::uint64_t seed,
                                std::span<const double> probs) {
  check_posterior(posterior);
  if (!(n_now > 0.0)) throw std::invalid_argument("predict_next_year: population must be > 0");
  if (!(harvest >= 0.0 && harvest < n_now))
    throw std::invalid_argument("predict_next_year: harvest must lie in [0, n_now)");
  static constexpr double kDefaultProbs[] = {0.10, 0.50, 0.90};
  if (probs.empty()) probs = kDefaultProbs;

  const PredictiveSampler sampler(posterior, n_rep, seed);
  const std::vector<double> values = sampler.sample(n_now, harvest);
  QuantileTable table;
  for (double p : probs) {
    table.probs.push_back(p);
    table.values.push_back(quantile_type7(values, p));
  }
  return table;
}

double solve_harvest(const PosteriorDraws& posterior, const StrategySpec& strategy,
                     int n_rep, std::uint64_t seed) {
  check_posterior(posterior);
  const double n_now = strategy.current_female_pop;
  if (!(n_now > 0.0))
    throw std::invalid_argument("solve_harvest: current population must be > 0");
  if (!(strategy.target > 0.0))
    throw std::invalid_argument("solve_harvest: target must be > 0");
  if (!(strategy.prob > 0.0 && strategy.prob < 1.0))
    throw std::invalid_argument("solve_harvest: prob must be in (0, 1)");

  const PredictiveSampler sampler(posterior, n_rep, seed);
  const double total = static_cast<double>(sampler.n_rep());

  // goal(H) is non-increasing in H for every strategy; we look for the
  // boundary where it stops holding.
  auto goal_holds = [&](double harvest) {
    const std::vector<double> values = sampler.sample(n_now, harvest);
    switch (strategy.kind) {
      case StrategyKind::stable:
        return quantile_type7(values, 0.5) >= strategy.target;
      case StrategyKind::hunter_biased: {
        double above = 0.0;
        for (double v : values)
          if (v >= strategy.target) above += 1.0;
        return above / total >= strategy.prob;
      }
      case StrategyKind::forestry_biased: {
        double below = 0.0;
        for (double v : values)
          if (v <= strategy.target) below += 1.0;
        return below / total < strategy.prob;  // boundary when P(<= target) reaches prob
      }
    }
    return false;
  };

  const double hi_limit = n_now * (1.0 - 1e-9);
  switch (strategy.kind) {
    case StrategyKind::stable:
      if (!goal_holds(0.0))
        throw InfeasibleStrategyError(
            "solve_harvest: target exceeds the median reachable with no harvest");
      if (goal_holds(hi_limit))
        throw InfeasibleStrategyError(
            "solve_harvest: the median stays above the target at every harvest");
      break;
    case StrategyKind::hunter_biased:
      if (!goal_holds(0.0))
        throw InfeasibleStrategyError(
            "solve_harvest: the target cannot be met even with no harvest");
      if (goal_holds(hi_limit)) return hi_limit;
      break;
    case StrategyKind::forestry_biased:
      if (!goal_holds(0.0)) return 0.0;  // already under the target often enough
      if (goal_holds(hi_limit))
        throw InfeasibleStrategyError(
            "solve_harvest: the goal never triggers below the whole population");
      break;
  }

  double lo = 0.0, hi = hi_limit;  // goal holds at lo, fails at hi
  while (hi - lo > 0.5) {
    const double mid = 0.5 * (lo + hi);
    (goal_holds(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<SweepRow> harvest_sweep(const PosteriorDraws& posterior, double n_now,
                                    int n_points, int n_rep, std::uint64_t seed) {
  check_posterior(posterior);
  if (n_points < 2) throw std::invalid_argument("harvest_sweep: need at least 2 points");
  const PredictiveSampler sampler(posterior, n_rep, seed);
  std::vector<SweepRow> rows;
  rows.reserve(n_points);
  const double top = n_now * (1.0 - 1e-6);
  for (int i = 0; i < n_points; ++i) {
    const double h = top * static_cast<double>(i) / static_cast<double>(n_points - 1);
    const std::vector<double> values = sampler.sample(n_now, h);
    SweepRow row;
    row.harvest = h;
    row.q10 = quantile_type7(values, 0.10);
    row.q50 = quantile_type7(values, 0.50);
    row.q90 = quantile_type7(values, 0.90);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace popindex
