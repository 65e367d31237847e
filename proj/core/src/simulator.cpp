#include "popindex/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "densities.hpp"
#include "popindex/errors.hpp"
#include "popindex/model.hpp"

namespace popindex {

namespace {

constexpr double kBreedSd = 0.8660254037844386;  // sqrt(3/4)
constexpr double kHarvestSd = 0.5;               // sqrt(1/4)
constexpr long long kMaxRejections = 1000000;

double lognormal_draw(double mu, double sd, std::mt19937_64& rng) {
  if (sd == 0.0) return std::exp(mu);
  std::normal_distribution<double> normal(mu, sd);
  return std::exp(normal(rng));
}

void check_spec(const SimulationSpec& spec) {
  if (spec.years <= 0) throw std::invalid_argument("simulate: years must be > 0");
  if (static_cast<int>(spec.effort.size()) != spec.years)
    throw std::invalid_argument("simulate: effort length must equal years");
  if (spec.harvest.kind == HarvestPolicy::Kind::schedule &&
      static_cast<int>(spec.harvest.schedule.size()) != spec.years)
    throw std::invalid_argument("simulate: harvest schedule length must equal years");
  if (spec.harvest.kind == HarvestPolicy::Kind::proportion &&
      (!(spec.harvest.fraction.female >= 0.0 && spec.harvest.fraction.female < 1.0) ||
       !(spec.harvest.fraction.male >= 0.0 && spec.harvest.fraction.male < 1.0)))
    throw std::invalid_argument("simulate: harvest fractions must lie in [0, 1)");
  if (!(spec.initial.female > 0.0 && spec.initial.male > 0.0))
    throw std::invalid_argument("simulate: initial abundances must be > 0");
  for (const auto& [year, sd] : spec.survey_sd) {
    if (year < 0 || year >= spec.years)
      throw std::invalid_argument("simulate: survey year outside range");
    if (!(sd > 0.0)) throw std::invalid_argument("simulate: survey sd must be > 0");
  }
}

SexPair harvest_for_year(const SimulationSpec& spec, int y, const SexPair& pre) {
  if (spec.harvest.kind == HarvestPolicy::Kind::schedule)
    return spec.harvest.schedule[y];
  return {spec.harvest.fraction.female * pre.female,
          spec.harvest.fraction.male * pre.male};
}

// Breeding outcome conditioned on exceeding the coming harvest, matching
// the truncated transition the likelihood normalizes.
double truncated_breeding_draw(double mu, double sd, double floor_value,
                               std::mt19937_64& rng) {
  if (sd == 0.0) {
    const double value = std::exp(mu);
    if (!(value > floor_value))
      throw NumericalError("simulate: deterministic breeding cannot exceed the harvest");
    return value;
  }
  for (long long attempt = 0; attempt < kMaxRejections; ++attempt) {
    const double value = lognormal_draw(mu, sd, rng);
    if (value > floor_value) return value;
  }
  throw NumericalError("simulate: breeding draw rejected 1e6 times; harvest policy "
                       "is infeasible");
}

}  // namespace

PopulationTrajectory simulate_trajectory(const SimulationSpec& spec, std::mt19937_64& rng,
                                         std::vector<SexPair>* harvest_out) {
  check_spec(spec);
  const ModelParameters& p = spec.true_params;
  const double sigma_f = p.sigma_f();
  const double sigma_m = p.sigma_m();

  PopulationTrajectory traj(spec.years);
  std::vector<SexPair> harvest(spec.years);
  traj.pre_f[0] = spec.initial.female;
  traj.pre_m[0] = spec.initial.male;

  for (int y = 0; y < spec.years; ++y) {
    const SexPair pre{traj.pre_f[y], traj.pre_m[y]};
    const SexPair h = harvest_for_year(spec, y, pre);
    harvest[y] = h;
    if (!(pre.female > h.female) || !(pre.male > h.male))
      throw NumericalError("simulate: harvest of year " + std::to_string(y + 1) +
                           " is not below the pre-hunt population");
    traj.post_f[y] =
        lognormal_draw(std::log(pre.female - h.female), kHarvestSd * sigma_f, rng);
    traj.post_m[y] =
        lognormal_draw(std::log(pre.male - h.male), kHarvestSd * sigma_m, rng);

    if (y + 1 < spec.years) {
      const double rt = recruitment_rate(p.r, p.k, traj.post_f[y]);
      const double mu_f = std::log((rt + 1.0) * traj.post_f[y]);
      const double mu_m = std::log(traj.post_m[y] + rt * traj.post_f[y]);
      // The next year's floor is known only for scheduled harvests; the
      // proportional rule always takes a fraction, so any draw works.
      SexPair floor_next{0.0, 0.0};
      if (spec.harvest.kind == HarvestPolicy::Kind::schedule)
        floor_next = spec.harvest.schedule[y + 1];
      traj.pre_f[y + 1] =
          truncated_breeding_draw(mu_f, kBreedSd * sigma_f, floor_next.female, rng);
      traj.pre_m[y + 1] =
          truncated_breeding_draw(mu_m, kBreedSd * sigma_m, floor_next.male, rng);
    }
  }
  if (harvest_out) *harvest_out = std::move(harvest);
  return traj;
}

Dataset simulate_observations(const PopulationTrajectory& traj,
                              const std::vector<SexPair>& harvest,
                              const SimulationSpec& spec, std::mt19937_64& rng,
                              std::vector<double>* a_out) {
  check_spec(spec);
  if (traj.years() != spec.years || static_cast<int>(harvest.size()) != spec.years)
    throw std::invalid_argument("simulate_observations: length mismatch");
  const ModelParameters& p = spec.true_params;
  const double sigma_a = p.sigma_a();

  std::vector<double> a(spec.years);
  for (int y = 0; y < spec.years; ++y)
    a[y] = sigma_a == 0.0 ? p.a_bar
                          : lognormal_draw(std::log(p.a_bar), sigma_a, rng);

  Dataset data;
  data.years.resize(spec.years);
  for (int y = 0; y < spec.years; ++y) {
    YearRecord& rec = data.years[y];
    rec.year = spec.first_year + y;
    rec.effort = spec.effort[y];
    rec.harvest_f = harvest[y].female;
    rec.harvest_m = harvest[y].male;
    const double lambda_f = a[y] * rec.effort * traj.pre_f[y];
    const double lambda_m = a[y] * rec.effort * traj.pre_m[y];
    rec.count_f = lambda_f > 0.0 ? std::poisson_distribution<long long>(lambda_f)(rng) : 0;
    rec.count_m = lambda_m > 0.0 ? std::poisson_distribution<long long>(lambda_m)(rng) : 0;
    if (auto it = spec.survey_sd.find(y); it != spec.survey_sd.end()) {
      SurveyRecord survey;
      survey.sd_log = it->second;
      survey.est_f = lognormal_draw(std::log(traj.post_f[y]), it->second, rng);
      survey.est_m = lognormal_draw(std::log(traj.post_m[y]), it->second, rng);
      rec.survey = survey;
    }
  }
  if (a_out) *a_out = std::move(a);
  return data;
}

SimulationResult simulate(const SimulationSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  SimulationResult out;
  out.trajectory = simulate_trajectory(spec, rng, &out.harvest);
  out.data = simulate_observations(out.trajectory, out.harvest, spec, rng, &out.a);
  return out;
}

namespace {

// Poisson pmf over a support holding all but `tail` of the mass.
std::vector<double> poisson_pmf(double lambda, double tail) {
  std::vector<double> pmf;
  if (lambda <= 0.0) {
    pmf.push_back(1.0);
    return pmf;
  }
  double mass = std::exp(-lambda);
  double value = mass;
  pmf.push_back(value);
  for (long long k = 1; mass < 1.0 - tail || static_cast<double>(k) < lambda; ++k) {
    value *= lambda / static_cast<double>(k);
    pmf.push_back(value);
    mass += value;
    if (k > 10000000) break;
  }
  return pmf;
}

}  // namespace

double effort_homogeneity_discrepancy(const std::function<double(double)>& mean_of_effort,
                                      double effort, double a1, double a2) {
  if (!(a1 >= 0.0) || !(a2 >= 0.0))
    throw std::invalid_argument("effort split weights must be >= 0");
  constexpr double tail = 1e-13;
  const std::vector<double> whole = poisson_pmf(mean_of_effort(effort), tail);
  const std::vector<double> part1 = poisson_pmf(mean_of_effort(a1 * effort), tail);
  const std::vector<double> part2 = poisson_pmf(mean_of_effort(a2 * effort), tail);

  std::vector<double> convolved(part1.size() + part2.size() - 1, 0.0);
  for (std::size_t i = 0; i < part1.size(); ++i)
    for (std::size_t j = 0; j < part2.size(); ++j) convolved[i + j] += part1[i] * part2[j];

  const std::size_t support = std::max(whole.size(), convolved.size());
  double max_diff = 0.0;
  for (std::size_t k = 0; k < support; ++k) {
    const double p = k < whole.size() ? whole[k] : 0.0;
    const double q = k < convolved.size() ? convolved[k] : 0.0;
    max_diff = std::max(max_diff, std::abs(p - q));
  }
  return max_diff;
}

namespace {

void check_distribution(const DiscreteDistribution& pop) {
  if (pop.values.empty() || pop.values.size() != pop.probs.size())
    throw std::invalid_argument("variance_decomposition: malformed distribution");
  double total = 0.0;
  for (double p : pop.probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("variance_decomposition: negative prob");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("variance_decomposition: probs must sum to 1");
}

}  // namespace

std::vector<VarianceRow> variance_decomposition(const DiscreteDistribution& pop, double a,
                                                std::span<const double> efforts) {
  check_distribution(pop);
  double mean_an = 0.0, mean_an2 = 0.0;
  for (std::size_t i = 0; i < pop.values.size(); ++i) {
    const double an = a * pop.values[i];
    mean_an += pop.probs[i] * an;
    mean_an2 += pop.probs[i] * an * an;
  }
  const double var_an = mean_an2 - mean_an * mean_an;

  std::vector<VarianceRow> rows;
  rows.reserve(efforts.size());
  for (double e : efforts) {
    if (!(e > 0.0)) throw std::invalid_argument("variance_decomposition: effort must be > 0");
    VarianceRow row;
    row.effort = e;
    row.limit_term = var_an;
    row.residual = mean_an / e;
    // Poisson mixture: Var(Y/e) = Var(aN) + E[aN]/e, exactly.
    row.var_scaled = var_an + row.residual;
    rows.push_back(row);
  }
  return rows;
}

VarianceMcEstimate variance_decomposition_mc(const DiscreteDistribution& pop, double a,
                                             double effort, long long n_rep,
                                             std::uint64_t seed) {
  check_distribution(pop);
  if (n_rep < 4) throw std::invalid_argument("variance_decomposition_mc: n_rep too small");
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(pop.probs.begin(), pop.probs.end());

  std::vector<double> scaled(n_rep);
  for (long long i = 0; i < n_rep; ++i) {
    const double n_val = pop.values[pick(rng)];
    const double lambda = a * effort * n_val;
    const auto y = lambda > 0.0 ? std::poisson_distribution<long long>(lambda)(rng) : 0;
    scaled[i] = static_cast<double>(y) / effort;
  }
  const double mean = std::accumulate(scaled.begin(), scaled.end(), 0.0) /
                      static_cast<double>(n_rep);
  double m2 = 0.0, m4 = 0.0;
  for (double v : scaled) {
    const double d = v - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double var = m2 / static_cast<double>(n_rep - 1);
  m2 /= static_cast<double>(n_rep);
  m4 /= static_cast<double>(n_rep);
  // Large-sample standard error of the sample variance.
  const double se = std::sqrt(std::max(0.0, m4 - m2 * m2) / static_cast<double>(n_rep));
  return {var, se};
}

}  // namespace popindex
