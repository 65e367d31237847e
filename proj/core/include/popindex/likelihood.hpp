#pragma once

#include <Eigen/Dense>
#include <vector>

#include "popindex/transforms.hpp"
#include "popindex/types.hpp"

namespace popindex {

// Additive pieces of the log posterior: latent transitions (l1 breeding,
// l2 harvest, l3 truncation normalizer), observations (l4), priors (l5),
// and the log Jacobian of the unconstrained transform.
struct LogPosteriorBreakdown {
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
  double l4 = 0.0;
  double l5 = 0.0;
  double jacobian = 0.0;
  double total = 0.0;
};

// Log-scale location and spread, per sex, of the law that produced a
// pre-hunt state. Needed to normalize the harvest-truncated transition.
struct TransitionLaw {
  double mu_f = 0.0;
  double sd_f = 0.0;
  double mu_m = 0.0;
  double sd_m = 0.0;
};

// Law of (N^F_t, N^M_t) given the previous post-hunt state.
TransitionLaw breeding_law(const SexPair& post_prev, const ModelParameters& params);
// Law of the first pre-hunt state under the initial-state prior.
TransitionLaw initial_law(const PriorConfig& priors);

// Sum of the two breeding log densities: female LN(log((r_t+1) N^F), 0.75 sigma_F^2),
// male LN(log(N^M + r_t N^F), 0.75 sigma_M^2), full normalizing constants included.
// A zero sigma yields 0 on the deterministic path and -inf off it.
double log_breeding_transition(const SexPair& post_prev, const SexPair& pre_next,
                               const ModelParameters& params);

// Sum of the two harvest log densities LN(log(N_pre - H), 0.25 sigma^2),
// minus the log normalizer of the truncation N_pre > H under `origin`
// (the law that generated n_pre). Returns -inf when n_pre <= harvest.
// Zero harvest contributes no truncation term.
double log_harvest_transition(const SexPair& n_pre, const SexPair& n_post,
                              const SexPair& harvest, const ModelParameters& params,
                              const TransitionLaw& origin);

// Poisson index terms with mean a_t E_t N_t per sex, plus the Gaussian
// log-survey terms for years carrying a survey.
double log_observation(const PopulationTrajectory& traj, const ModelParameters& params,
                       const Dataset& data);

// Hierarchical a_t layer, parameter priors, and the initial-state priors.
double log_prior(const ModelParameters& params, const SexPair& initial,
                 const PriorConfig& priors, const ModelConfig& config);

// Full posterior over the unconstrained state. Non-finite values are
// propagated as -inf in `total`, never thrown.
class LogPosterior {
 public:
  LogPosterior(Dataset data, PriorConfig priors, ModelConfig config);

  const StateLayout& layout() const { return layout_; }
  const Dataset& data() const { return data_; }
  const PriorConfig& priors() const { return priors_; }
  const ModelConfig& config() const { return config_; }

  LogPosteriorBreakdown evaluate(const Eigen::VectorXd& state) const;
  double value(const Eigen::VectorXd& state) const { return evaluate(state).total; }

  // Exact gradient with respect to every unconstrained coordinate.
  // Returns false (and leaves `grad` unspecified) when the posterior is
  // not finite at `state`.
  bool gradient(const Eigen::VectorXd& state, Eigen::VectorXd& grad) const;

 private:
  Dataset data_;
  PriorConfig priors_;
  ModelConfig config_;
  StateLayout layout_;
  std::vector<double> log_count_factorial_f_;  // log(count!) per year, fixed by data
  std::vector<double> log_count_factorial_m_;
  double year1_truncation_ = 0.0;  // state-independent normalizer, see evaluate()
  double lgamma_alpha_nu_ = 0.0;
  double log_beta_fn_omega_ = 0.0;
};

}  // namespace popindex
