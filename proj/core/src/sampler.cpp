#include "popindex/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "popindex/errors.hpp"

namespace popindex {

Target make_target(const LogPosterior& posterior) {
  Target t;
  t.dim = posterior.layout().dim();
  t.log_density = [&posterior](const Eigen::VectorXd& x) { return posterior.value(x); };
  t.gradient = [&posterior](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    return posterior.gradient(x, g);
  };
  return t;
}

Preconditioner Preconditioner::identity(int dim) {
  Preconditioner p;
  p.dim_ = dim;
  p.identity_ = true;
  return p;
}

std::optional<Preconditioner> Preconditioner::from_covariance(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() == 0) return std::nullopt;
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) return std::nullopt;
  Preconditioner p;
  p.dim_ = static_cast<int>(cov.rows());
  p.identity_ = false;
  p.m_ = cov;
  p.chol_ = llt.matrixL();
  if (!p.chol_.allFinite()) return std::nullopt;
  return p;
}

Eigen::VectorXd Preconditioner::apply(const Eigen::VectorXd& v) const {
  return identity_ ? v : Eigen::VectorXd(m_ * v);
}

Eigen::VectorXd Preconditioner::scale_noise(const Eigen::VectorXd& z) const {
  return identity_ ? z
                   : Eigen::VectorXd(chol_.triangularView<Eigen::Lower>() * z);
}

Eigen::VectorXd Preconditioner::whiten(const Eigen::VectorXd& v) const {
  return identity_ ? v
                   : Eigen::VectorXd(chol_.triangularView<Eigen::Lower>().solve(v));
}

MalaStep mala_step(const Target& target, const Eigen::VectorXd& current,
                   double current_log_density, const Eigen::VectorXd& current_grad,
                   double step_size, const Preconditioner& precond,
                   std::mt19937_64& rng) {
  thread_local std::normal_distribution<double> normal;
  const int dim = target.dim;
  Eigen::VectorXd noise(dim);
  for (int i = 0; i < dim; ++i) noise[i] = normal(rng);
  const double u = std::uniform_real_distribution<double>()(rng);

  const double half_step2 = 0.5 * step_size * step_size;
  const Eigen::VectorXd forward_mean = current + half_step2 * precond.apply(current_grad);
  const Eigen::VectorXd proposal = forward_mean + step_size * precond.scale_noise(noise);

  MalaStep out;
  out.state = current;
  out.log_density = current_log_density;
  out.grad = current_grad;

  const double proposal_lp = target.log_density(proposal);
  Eigen::VectorXd proposal_grad;
  if (!std::isfinite(proposal_lp) || !target.gradient(proposal, proposal_grad))
    return out;  // acceptance probability zero

  // Langevin proposal densities in both directions; the forward quadratic
  // form is just the noise itself.
  const Eigen::VectorXd reverse_mean = proposal + half_step2 * precond.apply(proposal_grad);
  const double log_q_forward = -0.5 * noise.squaredNorm();
  const double log_q_reverse =
      -0.5 * (precond.whiten(current - reverse_mean) / step_size).squaredNorm();
  const double log_alpha =
      proposal_lp - current_log_density + log_q_reverse - log_q_forward;
  out.acceptance_prob = std::min(1.0, std::exp(log_alpha));
  if (std::log(u) < log_alpha) {
    out.state = proposal;
    out.log_density = proposal_lp;
    out.grad = std::move(proposal_grad);
    out.accepted = true;
  }
  return out;
}

namespace {

// Sample covariance of the rows, ridge-regularized; falls back to the
// diagonal of variances, then to the previous preconditioner.
Preconditioner covariance_preconditioner(const Eigen::MatrixXd& draws,
                                         const Preconditioner& fallback) {
  const auto n = draws.rows();
  const auto dim = draws.cols();
  if (n < 2 * dim || dim == 0) return fallback;
  const Eigen::RowVectorXd mean = draws.colwise().mean();
  const Eigen::MatrixXd centered = draws.rowwise() - mean;
  Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(n - 1);
  const double ridge = 1e-6 * cov.diagonal().mean();
  if (!(ridge > 0.0) || !std::isfinite(ridge)) return fallback;
  cov.diagonal().array() += ridge;
  if (auto p = Preconditioner::from_covariance(cov)) return *p;
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(dim, dim);
  diag.diagonal() = cov.diagonal();
  if (auto p = Preconditioner::from_covariance(diag)) return *p;
  return fallback;
}

}  // namespace

AdaptResult adapt(double step_size, const Preconditioner& current,
                  const Eigen::MatrixXd& recent_draws,
                  const std::vector<unsigned char>& accepted, long long adapt_index,
                  const SamplerConfig& config) {
  double mean_acceptance = config.target_acceptance;
  if (!accepted.empty()) {
    double sum = 0.0;
    for (unsigned char flag : accepted) sum += flag ? 1.0 : 0.0;
    mean_acceptance = sum / static_cast<double>(accepted.size());
  }
  const double gain = std::pow(static_cast<double>(std::max<long long>(1, adapt_index)), -0.6);
  AdaptResult out;
  out.step_size =
      step_size * std::exp(gain * (mean_acceptance - config.target_acceptance));
  out.preconditioner = config.adaptation == AdaptationMode::step_and_covariance
                           ? covariance_preconditioner(recent_draws, current)
                           : current;
  return out;
}

namespace {

void check_config(const SamplerConfig& config, int dim) {
  if (config.thin < 1) throw std::invalid_argument("sampler: thin must be >= 1");
  if (config.n_iterations < config.thin)
    throw std::invalid_argument("sampler: n_iterations must be >= thin");
  if (config.n_burnin < 0) throw std::invalid_argument("sampler: n_burnin must be >= 0");
  if (!(config.initial_step > 0.0))
    throw std::invalid_argument("sampler: initial_step must be > 0");
  if (!(config.target_acceptance > 0.0 && config.target_acceptance < 1.0))
    throw std::invalid_argument("sampler: target_acceptance must be in (0, 1)");
  if (config.adapt_window < 1)
    throw std::invalid_argument("sampler: adapt_window must be >= 1");
  if (dim < 1) throw std::invalid_argument("sampler: empty target");
}

}  // namespace

ChainOutput sample_chain(const Target& target, const Eigen::VectorXd& init,
                         const SamplerConfig& config) {
  check_config(config, target.dim);
  if (init.size() != target.dim)
    throw std::invalid_argument("sampler: init dimension mismatch");

  std::mt19937_64 rng(config.seed);
  Eigen::VectorXd state = init;
  double lp = target.log_density(state);
  Eigen::VectorXd grad;
  if (!std::isfinite(lp) || !target.gradient(state, grad))
    throw NumericalError("sampler: initial state has non-finite posterior");

  ChainOutput out;
  out.seed = config.seed;
  out.step_size_trace.reserve(config.n_burnin + config.n_iterations);
  out.log_posterior_trace.reserve(config.n_burnin + config.n_iterations);

  double step = config.initial_step;
  Preconditioner precond = Preconditioner::identity(target.dim);

  // Burn-in with adaptation. Covariance estimates use a ring buffer of
  // recent draws.
  const long long buffer_capacity = std::min<long long>(config.n_burnin, 10000);
  Eigen::MatrixXd buffer(std::max<long long>(buffer_capacity, 1), target.dim);
  long long buffered = 0;
  std::vector<unsigned char> window_flags;
  window_flags.reserve(config.adapt_window);
  long long adapt_events = 0;

  for (long long iter = 1; iter <= config.n_burnin; ++iter) {
    MalaStep result = mala_step(target, state, lp, grad, step, precond, rng);
    state = std::move(result.state);
    lp = result.log_density;
    grad = std::move(result.grad);
    out.step_size_trace.push_back(step);
    out.log_posterior_trace.push_back(lp);
    if (buffer_capacity > 0) {
      buffer.row(buffered % buffer_capacity) = state.transpose();
      ++buffered;
    }
    window_flags.push_back(result.accepted ? 1 : 0);
    if (iter % config.adapt_window == 0) {
      ++adapt_events;
      const long long filled = std::min(buffered, buffer_capacity);
      AdaptResult adapted = adapt(step, precond, buffer.topRows(filled), window_flags,
                                  adapt_events, config);
      step = adapted.step_size;
      precond = std::move(adapted.preconditioner);
      window_flags.clear();
    }
  }

  // Sampling with the kernel frozen.
  const long long n_stored = config.n_iterations / config.thin;
  out.draws.resize(n_stored, target.dim);
  long long stored = 0;
  for (long long iter = 1; iter <= config.n_iterations; ++iter) {
    MalaStep result = mala_step(target, state, lp, grad, step, precond, rng);
    state = std::move(result.state);
    lp = result.log_density;
    grad = std::move(result.grad);
    out.n_accepted += result.accepted ? 1 : 0;
    out.step_size_trace.push_back(step);
    out.log_posterior_trace.push_back(lp);
    if (iter % config.thin == 0) out.draws.row(stored++) = state.transpose();
  }
  out.n_steps = config.n_iterations;
  out.acceptance_rate =
      static_cast<double>(out.n_accepted) / static_cast<double>(out.n_steps);
  return out;
}

Eigen::VectorXd initial_state(const Dataset& data, const PriorConfig& priors,
                              const ModelConfig& config) {
  const int T = data.size();
  PopulationTrajectory traj(T);
  for (int y = 0; y < T; ++y) {
    const YearRecord& rec = data.years[y];
    const double from_count = static_cast<double>(rec.count_f + rec.count_m) /
                              std::max(1e-300, priors.mu_abar * rec.effort);
    const double floor_f = 1.5 * rec.harvest_f + 1.0;
    const double floor_m = 1.5 * rec.harvest_m + 1.0;
    traj.pre_f[y] = std::max({from_count * 0.5, floor_f, 1.0});
    traj.pre_m[y] = std::max({from_count * 0.5, floor_m, 1.0});
    traj.post_f[y] = traj.pre_f[y] - rec.harvest_f;
    traj.post_m[y] = traj.pre_m[y] - rec.harvest_m;
  }
  ModelParameters params;
  params.a.assign(T, priors.mu_abar);
  params.a_bar = priors.mu_abar;
  params.tau = 0.5;
  params.omega = config.variant == ModelVariant::variable ? 0.5 : 1.0;
  params.nu = 1.0;
  params.r = priors.mu_r;
  params.k = config.with_k ? 0.01 : 0.0;
  return StateLayout(T, config).pack(traj, params);
}

ChainOutput run_chain(const Dataset& data, const PriorConfig& priors,
                      const SamplerConfig& config, const ModelConfig& model,
                      std::optional<Eigen::VectorXd> init) {
  LogPosterior posterior(data, priors, model);
  const Target target = make_target(posterior);
  Eigen::VectorXd start = init ? *init : initial_state(data, priors, model);
  if (start.size() != target.dim)
    throw std::invalid_argument("run_chain: init dimension mismatch");

  // Jittered retries around the starting point until the posterior is finite.
  Eigen::VectorXd candidate = start;
  std::mt19937_64 jitter_rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> normal(0.0, 0.25);
  bool ok = false;
  for (int attempt = 0; attempt <= 100; ++attempt) {
    if (std::isfinite(posterior.value(candidate))) {
      ok = true;
      break;
    }
    candidate = start;
    for (int i = 0; i < candidate.size(); ++i) candidate[i] += normal(jitter_rng);
  }
  if (!ok) {
    const LogPosteriorBreakdown b = posterior.evaluate(start);
    std::ostringstream msg;
    msg << "run_chain: no finite starting point after 100 retries; at the initial "
           "state l1="
        << b.l1 << " l2=" << b.l2 << " l3=" << b.l3 << " l4=" << b.l4 << " l5=" << b.l5
        << " jacobian=" << b.jacobian;
    throw NumericalError(msg.str());
  }

  ChainOutput out = sample_chain(target, candidate, config);
  out.coordinate_names =
      posterior.layout().coordinate_names(data.years.front().year);
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<ChainOutput> run_chains(const Dataset& data, const PriorConfig& priors,
                                    const SamplerConfig& config, const ModelConfig& model,
                                    int n_chains, int n_threads) {
  if (n_chains < 1) throw std::invalid_argument("run_chains: n_chains must be >= 1");
  if (n_threads <= 0)
    n_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<ChainOutput> outputs(n_chains);
  std::vector<std::future<void>> pending;
  for (int c = 0; c < n_chains; ++c) {
    auto task = [&, c]() {
      SamplerConfig chain_config = config;
      chain_config.seed = n_chains == 1 ? config.seed : splitmix64(config.seed + c);
      outputs[c] = run_chain(data, priors, chain_config, model);
    };
    if (n_threads == 1) {
      task();
    } else {
      pending.push_back(std::async(std::launch::async, task));
      if (static_cast<int>(pending.size()) == n_threads) {
        for (auto& f : pending) f.get();
        pending.clear();
      }
    }
  }
  for (auto& f : pending) f.get();
  return outputs;
}

}  // namespace popindex
