#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "popindex/likelihood.hpp"
#include "popindex/types.hpp"

namespace popindex {

// A differentiable log density the sampler can draw from.
struct Target {
  int dim = 0;
  std::function<double(const Eigen::VectorXd&)> log_density;
  // Returns false when the log density is not finite at the point.
  std::function<bool(const Eigen::VectorXd&, Eigen::VectorXd&)> gradient;
};

Target make_target(const LogPosterior& posterior);

// SPD proposal preconditioner M = L L^T.
class Preconditioner {
 public:
  static Preconditioner identity(int dim);
  // Fails (nullopt) when the matrix is not positive definite.
  static std::optional<Preconditioner> from_covariance(const Eigen::MatrixXd& cov);

  int dim() const { return dim_; }
  bool is_identity() const { return identity_; }
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;        // M v
  Eigen::VectorXd scale_noise(const Eigen::VectorXd& z) const;  // L z
  Eigen::VectorXd whiten(const Eigen::VectorXd& v) const;       // L^{-1} v

 private:
  int dim_ = 0;
  bool identity_ = true;
  Eigen::MatrixXd m_;
  Eigen::MatrixXd chol_;  // lower triangular
};

enum class AdaptationMode { step_only, step_and_covariance };

struct SamplerConfig {
  long long n_burnin = 20000;
  long long n_iterations = 100000;
  long long thin = 20;          // store every thin-th draw
  std::uint64_t seed = 0;
  double initial_step = 0.1;
  double target_acceptance = 0.574;
  long long adapt_window = 250; // iterations between adaptation events
  AdaptationMode adaptation = AdaptationMode::step_and_covariance;
};

struct ChainOutput {
  Eigen::MatrixXd draws;  // stored draws x dim, unconstrained coordinates
  std::vector<std::string> coordinate_names;
  double acceptance_rate = 0.0;  // over the sampling phase
  long long n_accepted = 0;
  long long n_steps = 0;
  std::vector<double> step_size_trace;      // one entry per iteration, burn-in included
  std::vector<double> log_posterior_trace;  // same indexing
  std::uint64_t seed = 0;
};

struct MalaStep {
  Eigen::VectorXd state;
  double log_density = 0.0;
  Eigen::VectorXd grad;
  bool accepted = false;
  double acceptance_prob = 0.0;
};

// One Metropolis-adjusted Langevin step from `current`, whose log density
// and gradient must be supplied (and are returned for the next step).
// Proposal: current + (step^2/2) M grad + step L xi. A proposal with
// non-finite density is rejected outright.
MalaStep mala_step(const Target& target, const Eigen::VectorXd& current,
                   double current_log_density, const Eigen::VectorXd& current_grad,
                   double step_size, const Preconditioner& precond,
                   std::mt19937_64& rng);

struct AdaptResult {
  double step_size = 0.0;
  Preconditioner preconditioner;
};

// One adaptation event (burn-in only). The step size moves toward the
// target acceptance rate with gain adapt_index^(-0.6); the preconditioner
// is the ridge-regularized covariance of `recent_draws` (rows) when
// covariance adaptation is on and enough draws are available, falling
// back to the diagonal and then to `current` when degenerate.
AdaptResult adapt(double step_size, const Preconditioner& current,
                  const Eigen::MatrixXd& recent_draws,
                  const std::vector<unsigned char>& accepted, long long adapt_index,
                  const SamplerConfig& config);

// Burn-in with adaptation, then sampling with the kernel frozen.
// Deterministic given the seed.
ChainOutput sample_chain(const Target& target, const Eigen::VectorXd& init,
                         const SamplerConfig& config);

// Data-driven starting point: abundances from counts / (prior-mean a * effort),
// parameters at prior-typical values.
Eigen::VectorXd initial_state(const Dataset& data, const PriorConfig& priors,
                              const ModelConfig& config);

// Fit the population model: builds the posterior, finds a finite start
// (jittered retries if needed), runs the chain. Throws NumericalError if
// no finite starting point is found after 100 retries.
ChainOutput run_chain(const Dataset& data, const PriorConfig& priors,
                      const SamplerConfig& config, const ModelConfig& model,
                      std::optional<Eigen::VectorXd> init = std::nullopt);

// Independent chains with per-chain derived seeds, run concurrently.
std::vector<ChainOutput> run_chains(const Dataset& data, const PriorConfig& priors,
                                    const SamplerConfig& config, const ModelConfig& model,
                                    int n_chains, int n_threads = 0);

}  // namespace popindex
