#include "popindex/likelihood.hpp"

#include <cmath>
#include <sstream>

#include "densities.hpp"
#include "popindex/errors.hpp"
#include "popindex/model.hpp"

namespace popindex {

using detail::kNegInf;

// Variance split of the yearly scale: nine months of breeding, three of
// hunting.
namespace {
constexpr double kBreedSd = 0.8660254037844386;    // sqrt(3/4)
constexpr double kHarvestSd = 0.5;                 // sqrt(1/4)
}  // namespace

TransitionLaw breeding_law(const SexPair& post_prev, const ModelParameters& params) {
  const double rt = recruitment_rate(params.r, params.k, post_prev.female);
  return {std::log((rt + 1.0) * post_prev.female), kBreedSd * params.sigma_f(),
          std::log(post_prev.male + rt * post_prev.female),
          kBreedSd * params.sigma_m()};
}

TransitionLaw initial_law(const PriorConfig& priors) {
  return {priors.mu_n0, priors.sigma_n0, priors.mu_n0, priors.sigma_n0};
}

double log_breeding_transition(const SexPair& post_prev, const SexPair& pre_next,
                               const ModelParameters& params) {
  const TransitionLaw law = breeding_law(post_prev, params);
  return detail::lognormal_lpdf(pre_next.female, law.mu_f, law.sd_f) +
         detail::lognormal_lpdf(pre_next.male, law.mu_m, law.sd_m);
}

double log_harvest_transition(const SexPair& n_pre, const SexPair& n_post,
                              const SexPair& harvest, const ModelParameters& params,
                              const TransitionLaw& origin) {
  if (!(n_pre.female > harvest.female) || !(n_pre.male > harvest.male)) return kNegInf;
  double lp =
      detail::lognormal_lpdf(n_post.female, std::log(n_pre.female - harvest.female),
                             kHarvestSd * params.sigma_f()) +
      detail::lognormal_lpdf(n_post.male, std::log(n_pre.male - harvest.male),
                             kHarvestSd * params.sigma_m());
  // Truncation normalizer of the preceding step: condition on its outcome
  // exceeding the known harvest. Exactly zero when nothing is harvested.
  if (harvest.female > 0.0)
    lp -= detail::log_std_normal_cdf((origin.mu_f - std::log(harvest.female)) /
                                     origin.sd_f);
  if (harvest.male > 0.0)
    lp -= detail::log_std_normal_cdf((origin.mu_m - std::log(harvest.male)) /
                                     origin.sd_m);
  return lp;
}

double log_observation(const PopulationTrajectory& traj, const ModelParameters& params,
                       const Dataset& data) {
  double lp = 0.0;
  for (int y = 0; y < data.size(); ++y) {
    const YearRecord& rec = data.years[y];
    const double scale = params.a[y] * rec.effort;
    lp += detail::poisson_lpmf(static_cast<double>(rec.count_f),
                               scale * traj.pre_f[y]);
    lp += detail::poisson_lpmf(static_cast<double>(rec.count_m),
                               scale * traj.pre_m[y]);
    if (rec.survey) {
      lp += detail::normal_lpdf(std::log(rec.survey->est_f), std::log(traj.post_f[y]),
                                rec.survey->sd_log);
      lp += detail::normal_lpdf(std::log(rec.survey->est_m), std::log(traj.post_m[y]),
                                rec.survey->sd_log);
    }
  }
  return lp;
}

double log_prior(const ModelParameters& params, const SexPair& initial,
                 const PriorConfig& priors, const ModelConfig& config) {
  double lp = 0.0;
  if (config.variant == ModelVariant::variable) {
    const double sigma_a = params.sigma_a();
    const double log_abar = std::log(params.a_bar);
    for (double a_t : params.a)
      lp += detail::lognormal_lpdf(a_t, log_abar, sigma_a);
    lp += detail::beta_lpdf(params.omega, priors.alpha_omega, priors.beta_omega);
    lp += detail::normal_lpdf(params.a_bar, priors.mu_abar, priors.sigma_abar);
  } else {
    // Single shared countability with the same normal prior as a_bar.
    lp += detail::normal_lpdf(params.a.empty() ? params.a_bar : params.a.front(),
                              priors.mu_abar, priors.sigma_abar);
  }
  lp += detail::exponential_lpdf(params.tau, priors.beta_tau);
  lp += detail::gamma_lpdf(params.nu, priors.alpha_nu, priors.beta_nu);
  lp += detail::normal_lpdf(params.r, priors.mu_r, priors.sigma_r);
  if (config.with_k) lp += detail::exponential_lpdf(params.k, priors.beta_k);
  lp += detail::lognormal_lpdf(initial.female, priors.mu_n0, priors.sigma_n0);
  lp += detail::lognormal_lpdf(initial.male, priors.mu_n0, priors.sigma_n0);
  return lp;
}

LogPosterior::LogPosterior(Dataset data, PriorConfig priors, ModelConfig config)
    : data_(std::move(data)),
      priors_(priors),
      config_(config),
      layout_(data_.size(), config) {
  auto issues = validate_dataset(data_);
  auto prior_issues = validate_priors(priors_);
  issues.insert(issues.end(), prior_issues.begin(), prior_issues.end());
  if (!issues.empty()) {
    std::ostringstream msg;
    msg << "invalid model inputs:";
    for (const auto& issue : issues)
      msg << "\n  year " << issue.year << ", " << issue.field << ": " << issue.message;
    throw ValidationError(msg.str());
  }
  log_count_factorial_f_.resize(data_.size());
  log_count_factorial_m_.resize(data_.size());
  for (int y = 0; y < data_.size(); ++y) {
    log_count_factorial_f_[y] =
        detail::lgamma_safe(static_cast<double>(data_.years[y].count_f) + 1.0);
    log_count_factorial_m_[y] =
        detail::lgamma_safe(static_cast<double>(data_.years[y].count_m) + 1.0);
  }
  // First-year harvest truncation is normalized against the initial-state
  // prior; it depends only on fixed hyperparameters, so fold it in once.
  const TransitionLaw law0 = initial_law(priors_);
  year1_truncation_ = 0.0;
  if (data_.years.front().harvest_f > 0.0)
    year1_truncation_ -= detail::log_std_normal_cdf(
        (law0.mu_f - std::log(data_.years.front().harvest_f)) / law0.sd_f);
  if (data_.years.front().harvest_m > 0.0)
    year1_truncation_ -= detail::log_std_normal_cdf(
        (law0.mu_m - std::log(data_.years.front().harvest_m)) / law0.sd_m);
  lgamma_alpha_nu_ = detail::lgamma_safe(priors_.alpha_nu);
  log_beta_fn_omega_ = detail::lgamma_safe(priors_.alpha_omega) +
                       detail::lgamma_safe(priors_.beta_omega) -
                       detail::lgamma_safe(priors_.alpha_omega + priors_.beta_omega);
}

LogPosteriorBreakdown LogPosterior::evaluate(const Eigen::VectorXd& state) const {
  LogPosteriorBreakdown out;
  if (state.size() != layout_.dim())
    throw std::invalid_argument("log posterior: state dimension mismatch");

  // exp would overflow past this point; treat as out of support.
  for (int i = 0; i < state.size(); ++i) {
    if (!(std::abs(state[i]) <= 700.0)) {
      out.l1 = out.total = kNegInf;
      return out;
    }
  }

  PopulationTrajectory traj;
  ModelParameters params;
  layout_.unpack(state, traj, params);
  const int T = layout_.years();
  const double sd_bf = kBreedSd * params.sigma_f();
  const double sd_bm = kBreedSd * params.sigma_m();
  const double sd_hf = kHarvestSd * params.sigma_f();
  const double sd_hm = kHarvestSd * params.sigma_m();

  // l1: breeding transitions into years 2..T.
  for (int y = 1; y < T; ++y) {
    const double fhp = traj.post_f[y - 1];
    const double rt = std::exp(params.r - params.k * std::log(fhp));
    const double mu_f = std::log((rt + 1.0) * fhp);
    const double mu_m = std::log(traj.post_m[y - 1] + rt * fhp);
    out.l1 += detail::lognormal_lpdf(traj.pre_f[y], mu_f, sd_bf);
    out.l1 += detail::lognormal_lpdf(traj.pre_m[y], mu_m, sd_bm);
    // l3: normalizer of the harvest constraint on this breeding outcome.
    const double hf = data_.years[y].harvest_f;
    const double hm = data_.years[y].harvest_m;
    if (hf > 0.0)
      out.l3 -= detail::log_std_normal_cdf((mu_f - std::log(hf)) / sd_bf);
    if (hm > 0.0)
      out.l3 -= detail::log_std_normal_cdf((mu_m - std::log(hm)) / sd_bm);
  }
  out.l3 += year1_truncation_;

  // l2: harvest transitions within each year.
  for (int y = 0; y < T; ++y) {
    const double af = traj.pre_f[y] - data_.years[y].harvest_f;
    const double am = traj.pre_m[y] - data_.years[y].harvest_m;
    if (!(af > 0.0) || !(am > 0.0)) {
      out.l2 = kNegInf;
      break;
    }
    out.l2 += detail::lognormal_lpdf(traj.post_f[y], std::log(af), sd_hf);
    out.l2 += detail::lognormal_lpdf(traj.post_m[y], std::log(am), sd_hm);
  }

  // l4: Poisson index counts at the pre-hunt states, survey terms at the
  // post-hunt states.
  for (int y = 0; y < T; ++y) {
    const YearRecord& rec = data_.years[y];
    const double scale = params.a[y] * rec.effort;
    const double lambda_f = scale * traj.pre_f[y];
    const double lambda_m = scale * traj.pre_m[y];
    if (!std::isfinite(lambda_f) || !std::isfinite(lambda_m)) {
      out.l4 = kNegInf;
      break;
    }
    out.l4 += static_cast<double>(rec.count_f) * std::log(lambda_f) - lambda_f -
              log_count_factorial_f_[y];
    out.l4 += static_cast<double>(rec.count_m) * std::log(lambda_m) - lambda_m -
              log_count_factorial_m_[y];
    if (rec.survey) {
      out.l4 += detail::normal_lpdf(std::log(rec.survey->est_f),
                                    std::log(traj.post_f[y]), rec.survey->sd_log);
      out.l4 += detail::normal_lpdf(std::log(rec.survey->est_m),
                                    std::log(traj.post_m[y]), rec.survey->sd_log);
    }
  }

  out.l5 = log_prior(params, {traj.pre_f[0], traj.pre_m[0]}, priors_, config_);
  out.jacobian = layout_.log_jacobian(state);
  out.total = out.l1 + out.l2 + out.l3 + out.l4 + out.l5 + out.jacobian;
  if (std::isnan(out.total)) out.total = kNegInf;
  return out;
}

}  // namespace popindex
