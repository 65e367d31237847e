#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace popindex {

// Female/male pair of one quantity (abundance, harvest, ...).
struct SexPair {
  double female = 0.0;
  double male = 0.0;
};

// Latent abundances on the half-year grid 1, 1.5, 2, ..., T + 0.5.
// Year y (0-based) contributes two points: pre-hunt (integer time,
// when index counts are taken) and post-hunt (half time, when surveys
// are taken). All abundances are strictly positive in a valid state.
struct PopulationTrajectory {
  std::vector<double> pre_f, post_f, pre_m, post_m;

  PopulationTrajectory() = default;
  explicit PopulationTrajectory(int years)
      : pre_f(years, 0.0),
        post_f(years, 0.0),
        pre_m(years, 0.0),
        post_m(years, 0.0) {}

  int years() const { return static_cast<int>(pre_f.size()); }
};

struct ModelParameters {
  double r = 0.0;      // log recruitment level
  double k = 0.0;      // density dependence of recruitment; 0 = constant rate
  double tau = 0.0;    // total variability scale
  double omega = 1.0;  // share of variability from population dynamics, in [0,1]
  double nu = 1.0;     // male/female variability ratio
  double a_bar = 0.0;  // mean countability (per-effort-unit detection intensity)
  std::vector<double> a;  // yearly countability, one per modeled year

  double sigma_f() const { return omega * tau; }
  double sigma_m() const { return omega * tau * nu; }
  double sigma_a() const { return (1.0 - omega) * tau; }
};

// Unbiased abundance estimate for the post-hunt state of one year.
struct SurveyRecord {
  double est_f = 0.0;
  double est_m = 0.0;
  double sd_log = 0.0;  // log-scale standard deviation of the estimate
};

struct YearRecord {
  int year = 0;           // calendar label
  long long count_f = 0;  // index count, females
  long long count_m = 0;  // index count, males
  double effort = 0.0;    // observation effort, e.g. observer-hours
  double harvest_f = 0.0; // animals shot, known exactly
  double harvest_m = 0.0;
  std::optional<SurveyRecord> survey;
};

struct Dataset {
  std::vector<YearRecord> years;

  int size() const { return static_cast<int>(years.size()); }
  bool empty() const { return years.empty(); }
};

struct PriorConfig {
  double beta_tau = 1.0;      // exponential rate for tau
  double alpha_omega = 1.0;   // Beta(alpha, beta) for omega
  double beta_omega = 1.0;
  double alpha_nu = 2.0;      // Gamma(shape, rate) for nu
  double beta_nu = 2.0;
  double mu_abar = 1e-4;      // normal prior for the mean countability
  double sigma_abar = 1e-4;
  double mu_r = -1.0;         // normal prior for r
  double sigma_r = 1.0;
  double beta_k = 10.0;       // exponential rate for k
  double mu_n0 = 6.2146080984221914;  // log-normal initial-state prior per sex,
  double sigma_n0 = 1.0;              // location defaults to log(500)
};

// Countability structure of the fitted model: one a_t per year with a
// hierarchical layer, or a single shared a.
enum class ModelVariant { variable, fixed };

struct ModelConfig {
  ModelVariant variant = ModelVariant::variable;
  bool with_k = false;  // density-dependent recruitment extension
};

struct ValidationIssue {
  int year = 0;  // calendar year, or 0 when not tied to a year
  std::string field;
  std::string message;
};

}  // namespace popindex
