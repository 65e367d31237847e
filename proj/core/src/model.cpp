#include "popindex/model.hpp"

#include <cmath>
#include <stdexcept>

namespace popindex {

Variances derive_variances(double tau, double omega, double nu) {
  if (!(tau >= 0.0)) throw std::invalid_argument("derive_variances: tau must be >= 0");
  if (!(omega >= 0.0 && omega <= 1.0))
    throw std::invalid_argument("derive_variances: omega must be in [0, 1]");
  if (!(nu >= 0.0)) throw std::invalid_argument("derive_variances: nu must be >= 0");
  return {omega * tau, omega * tau * nu, (1.0 - omega) * tau};
}

double recruitment_rate(double r, double k, double n_female) {
  if (!(n_female > 0.0))
    throw std::invalid_argument("recruitment_rate: n_female must be > 0");
  if (!(k >= 0.0)) throw std::invalid_argument("recruitment_rate: k must be >= 0");
  if (k == 0.0) return std::exp(r);  // constant-rate model, independent of n
  return std::exp(r - k * std::log(n_female));
}

namespace {

void require_finite(std::vector<ValidationIssue>& issues, int year, const char* field,
                    double value) {
  if (!std::isfinite(value))
    issues.push_back({year, field, "value is not finite"});
}

}  // namespace

std::vector<ValidationIssue> validate_dataset(const Dataset& data) {
  std::vector<ValidationIssue> issues;
  if (data.empty()) {
    issues.push_back({0, "years", "dataset has no years"});
    return issues;
  }
  const int first = data.years.front().year;
  for (int y = 0; y < data.size(); ++y) {
    const YearRecord& rec = data.years[y];
    if (rec.year != first + y)
      issues.push_back({rec.year, "year",
                        "year labels must be consecutive; expected " +
                            std::to_string(first + y)});
    if (rec.count_f < 0) issues.push_back({rec.year, "count_f", "count must be >= 0"});
    if (rec.count_m < 0) issues.push_back({rec.year, "count_m", "count must be >= 0"});
    require_finite(issues, rec.year, "effort", rec.effort);
    if (!(rec.effort > 0.0))
      issues.push_back({rec.year, "effort", "effort must be > 0"});
    require_finite(issues, rec.year, "harvest_f", rec.harvest_f);
    require_finite(issues, rec.year, "harvest_m", rec.harvest_m);
    if (rec.harvest_f < 0.0)
      issues.push_back({rec.year, "harvest_f", "harvest must be >= 0"});
    if (rec.harvest_m < 0.0)
      issues.push_back({rec.year, "harvest_m", "harvest must be >= 0"});
    if (rec.survey) {
      if (!(rec.survey->est_f > 0.0))
        issues.push_back({rec.year, "survey_f", "survey estimate must be > 0"});
      if (!(rec.survey->est_m > 0.0))
        issues.push_back({rec.year, "survey_m", "survey estimate must be > 0"});
      if (!(rec.survey->sd_log > 0.0))
        issues.push_back({rec.year, "survey_sd_log", "survey log-sd must be > 0"});
    }
  }
  return issues;
}

std::vector<ValidationIssue> validate_trajectory(const PopulationTrajectory& traj,
                                                 const Dataset& data) {
  std::vector<ValidationIssue> issues;
  if (traj.years() != data.size()) {
    issues.push_back({0, "trajectory", "trajectory length does not match the dataset"});
    return issues;
  }
  for (int y = 0; y < traj.years(); ++y) {
    const int year = data.years[y].year;
    if (!(traj.pre_f[y] > 0.0) || !(traj.post_f[y] > 0.0) || !(traj.pre_m[y] > 0.0) ||
        !(traj.post_m[y] > 0.0))
      issues.push_back({year, "abundance", "abundances must be > 0"});
    if (!(traj.pre_f[y] > data.years[y].harvest_f))
      issues.push_back(
          {year, "pre_f", "pre-hunt female abundance must exceed the harvest"});
    if (!(traj.pre_m[y] > data.years[y].harvest_m))
      issues.push_back(
          {year, "pre_m", "pre-hunt male abundance must exceed the harvest"});
  }
  return issues;
}

std::vector<ValidationIssue> validate_priors(const PriorConfig& p) {
  std::vector<ValidationIssue> issues;
  auto positive = [&issues](const char* field, double v) {
    if (!(v > 0.0) || !std::isfinite(v))
      issues.push_back({0, field, "must be > 0"});
  };
  positive("beta_tau", p.beta_tau);
  positive("alpha_omega", p.alpha_omega);
  positive("beta_omega", p.beta_omega);
  positive("alpha_nu", p.alpha_nu);
  positive("beta_nu", p.beta_nu);
  positive("sigma_abar", p.sigma_abar);
  positive("mu_abar", p.mu_abar);  // the mean countability itself must be positive
  positive("sigma_r", p.sigma_r);
  positive("beta_k", p.beta_k);
  positive("sigma_n0", p.sigma_n0);
  if (!std::isfinite(p.mu_r)) issues.push_back({0, "mu_r", "must be finite"});
  if (!std::isfinite(p.mu_n0)) issues.push_back({0, "mu_n0", "must be finite"});
  return issues;
}

}  // namespace popindex
