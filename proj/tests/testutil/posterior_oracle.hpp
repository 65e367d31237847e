#pragma once

// Hand-assembled log posterior built from the textbook densities in
// oracles.hpp, following the hierarchical model term by term. Used to
// cross-check the library's evaluator on small instances.

#include <cmath>

#include "popindex/popindex.hpp"
#include "testutil/oracles.hpp"

namespace oracle {

inline double assembled_log_posterior(const Eigen::VectorXd& state,
                                      const popindex::Dataset& data,
                                      const popindex::PriorConfig& priors,
                                      const popindex::ModelConfig& config) {
  using popindex::ModelVariant;
  const int T = data.size();
  const popindex::StateLayout layout(T, config);
  popindex::PopulationTrajectory traj;
  popindex::ModelParameters params;
  layout.unpack(state, traj, params);
  const bool variable = config.variant == ModelVariant::variable;

  const double sigma_f = params.omega * params.tau;
  const double sigma_m = params.omega * params.tau * params.nu;
  const double sigma_a = (1.0 - params.omega) * params.tau;
  const double breed_f = std::sqrt(0.75) * sigma_f;
  const double breed_m = std::sqrt(0.75) * sigma_m;
  const double hunt_f = std::sqrt(0.25) * sigma_f;
  const double hunt_m = std::sqrt(0.25) * sigma_m;

  double lp = 0.0;

  // Breeding transitions with the truncation normalizer.
  for (int y = 1; y < T; ++y) {
    const double rt =
        std::exp(params.r - params.k * std::log(traj.post_f[y - 1]));
    const double mu_f = std::log((rt + 1.0) * traj.post_f[y - 1]);
    const double mu_m = std::log(traj.post_m[y - 1] + rt * traj.post_f[y - 1]);
    lp += log_normal_pdf(traj.pre_f[y], mu_f, breed_f);
    lp += log_normal_pdf(traj.pre_m[y], mu_m, breed_m);
    if (data.years[y].harvest_f > 0.0)
      lp -= std::log(std_normal_cdf((mu_f - std::log(data.years[y].harvest_f)) / breed_f));
    if (data.years[y].harvest_m > 0.0)
      lp -= std::log(std_normal_cdf((mu_m - std::log(data.years[y].harvest_m)) / breed_m));
  }
  // Year-one constraint is normalized against the initial-state prior.
  if (data.years[0].harvest_f > 0.0)
    lp -= std::log(std_normal_cdf(
        (priors.mu_n0 - std::log(data.years[0].harvest_f)) / priors.sigma_n0));
  if (data.years[0].harvest_m > 0.0)
    lp -= std::log(std_normal_cdf(
        (priors.mu_n0 - std::log(data.years[0].harvest_m)) / priors.sigma_n0));

  // Harvest transitions.
  for (int y = 0; y < T; ++y) {
    lp += log_normal_pdf(traj.post_f[y],
                         std::log(traj.pre_f[y] - data.years[y].harvest_f), hunt_f);
    lp += log_normal_pdf(traj.post_m[y],
                         std::log(traj.pre_m[y] - data.years[y].harvest_m), hunt_m);
  }

  // Observations.
  for (int y = 0; y < T; ++y) {
    const popindex::YearRecord& rec = data.years[y];
    lp += poisson_pmf_log(rec.count_f, params.a[y] * rec.effort * traj.pre_f[y]);
    lp += poisson_pmf_log(rec.count_m, params.a[y] * rec.effort * traj.pre_m[y]);
    if (rec.survey) {
      lp += normal_pdf_log(std::log(rec.survey->est_f), std::log(traj.post_f[y]),
                           rec.survey->sd_log);
      lp += normal_pdf_log(std::log(rec.survey->est_m), std::log(traj.post_m[y]),
                           rec.survey->sd_log);
    }
  }

  // Priors.
  if (variable) {
    for (int y = 0; y < T; ++y)
      lp += log_normal_pdf(params.a[y], std::log(params.a_bar), sigma_a);
    lp += beta_pdf_log(params.omega, priors.alpha_omega, priors.beta_omega);
    lp += normal_pdf_log(params.a_bar, priors.mu_abar, priors.sigma_abar);
  } else {
    lp += normal_pdf_log(params.a[0], priors.mu_abar, priors.sigma_abar);
  }
  lp += exponential_pdf_log(params.tau, priors.beta_tau);
  lp += gamma_pdf_log(params.nu, priors.alpha_nu, priors.beta_nu);
  lp += normal_pdf_log(params.r, priors.mu_r, priors.sigma_r);
  if (config.with_k) lp += exponential_pdf_log(params.k, priors.beta_k);
  lp += log_normal_pdf(traj.pre_f[0], priors.mu_n0, priors.sigma_n0);
  lp += log_normal_pdf(traj.pre_m[0], priors.mu_n0, priors.sigma_n0);

  // Change of variables: one log|dx/dtheta| per transformed coordinate.
  for (int y = 0; y < T; ++y) {
    lp += std::log(traj.pre_f[y]) + std::log(traj.post_f[y]);
    lp += std::log(traj.pre_m[y]) + std::log(traj.post_m[y]);
  }
  if (variable) {
    for (int y = 0; y < T; ++y) lp += std::log(params.a[y]);
    lp += std::log(params.a_bar);
    lp += std::log(params.omega * (1.0 - params.omega));
  } else {
    lp += std::log(params.a[0]);
  }
  lp += std::log(params.tau) + std::log(params.nu);
  if (config.with_k) lp += std::log(params.k);
  return lp;
}

}  // namespace oracle
