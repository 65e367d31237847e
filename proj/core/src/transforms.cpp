#include "popindex/transforms.hpp"

#include <cmath>
#include <stdexcept>

#include "densities.hpp"

namespace popindex {

StateLayout::StateLayout(int years, ModelConfig config)
    : years_(years), config_(config) {
  if (years <= 0) throw std::invalid_argument("StateLayout: years must be > 0");
  // 4T abundances + countability block + scalar parameters.
  dim_ = variable() ? 5 * years_ + 5 : 4 * years_ + 4;
  if (config_.with_k) ++dim_;
}

std::vector<std::string> StateLayout::coordinate_names(int first_year) const {
  std::vector<std::string> names(dim_);
  for (int y = 0; y < years_; ++y) {
    const std::string label = std::to_string(first_year + y);
    names[pre_f(y)] = "log_npre_f_" + label;
    names[post_f(y)] = "log_npost_f_" + label;
    names[pre_m(y)] = "log_npre_m_" + label;
    names[post_m(y)] = "log_npost_m_" + label;
    if (variable()) names[a(y)] = "log_a_" + label;
  }
  if (variable()) {
    names[a_bar()] = "log_a_bar";
    names[omega()] = "logit_omega";
  } else {
    names[a(0)] = "log_a";
  }
  names[tau()] = "log_tau";
  names[nu()] = "log_nu";
  names[r()] = "r";
  if (config_.with_k) names[k()] = "log_k";
  return names;
}

std::vector<std::string> StateLayout::decoded_names(int first_year) const {
  std::vector<std::string> names;
  names.reserve(dim_ + 4);
  for (int y = 0; y < years_; ++y) {
    const std::string label = std::to_string(first_year + y);
    names.push_back("npre_f_" + label);
    names.push_back("npost_f_" + label);
  }
  for (int y = 0; y < years_; ++y) {
    const std::string label = std::to_string(first_year + y);
    names.push_back("npre_m_" + label);
    names.push_back("npost_m_" + label);
  }
  if (variable()) {
    for (int y = 0; y < years_; ++y)
      names.push_back("a_" + std::to_string(first_year + y));
    names.push_back("a_bar");
  } else {
    names.push_back("a");
  }
  names.push_back("tau");
  if (variable()) names.push_back("omega");
  names.push_back("nu");
  names.push_back("r");
  names.push_back("k");
  names.push_back("sigma_f");
  names.push_back("sigma_m");
  names.push_back("sigma_a");
  return names;
}

Eigen::VectorXd StateLayout::pack(const PopulationTrajectory& traj,
                                  const ModelParameters& params) const {
  if (traj.years() != years_)
    throw std::invalid_argument("pack: trajectory length mismatch");
  if (variable() && static_cast<int>(params.a.size()) != years_)
    throw std::invalid_argument("pack: countability vector length mismatch");
  Eigen::VectorXd state(dim_);
  for (int y = 0; y < years_; ++y) {
    state[pre_f(y)] = std::log(traj.pre_f[y]);
    state[post_f(y)] = std::log(traj.post_f[y]);
    state[pre_m(y)] = std::log(traj.pre_m[y]);
    state[post_m(y)] = std::log(traj.post_m[y]);
  }
  if (variable()) {
    for (int y = 0; y < years_; ++y) state[a(y)] = std::log(params.a[y]);
    state[a_bar()] = std::log(params.a_bar);
    const double w = params.omega;
    if (!(w > 0.0 && w < 1.0))
      throw std::invalid_argument("pack: omega must lie strictly inside (0, 1)");
    state[omega()] = std::log(w) - std::log1p(-w);
  } else {
    state[a(0)] = std::log(params.a.empty() ? params.a_bar : params.a.front());
  }
  state[tau()] = std::log(params.tau);
  state[nu()] = std::log(params.nu);
  state[r()] = params.r;
  if (config_.with_k) state[k()] = std::log(params.k);
  return state;
}

void StateLayout::unpack(const Eigen::VectorXd& state, PopulationTrajectory& traj,
                         ModelParameters& params) const {
  if (state.size() != dim_) throw std::invalid_argument("unpack: dimension mismatch");
  traj = PopulationTrajectory(years_);
  for (int y = 0; y < years_; ++y) {
    traj.pre_f[y] = std::exp(state[pre_f(y)]);
    traj.post_f[y] = std::exp(state[post_f(y)]);
    traj.pre_m[y] = std::exp(state[pre_m(y)]);
    traj.post_m[y] = std::exp(state[post_m(y)]);
  }
  params.a.assign(years_, 0.0);
  if (variable()) {
    for (int y = 0; y < years_; ++y) params.a[y] = std::exp(state[a(y)]);
    params.a_bar = std::exp(state[a_bar()]);
    params.omega = detail::logistic(state[omega()]);
  } else {
    const double a0 = std::exp(state[a(0)]);
    params.a.assign(years_, a0);
    params.a_bar = a0;
    params.omega = 1.0;
  }
  params.tau = std::exp(state[tau()]);
  params.nu = std::exp(state[nu()]);
  params.r = state[r()];
  params.k = config_.with_k ? std::exp(state[k()]) : 0.0;
}

double StateLayout::log_jacobian(const Eigen::VectorXd& state) const {
  // Every log coordinate contributes its own value; the logit coordinate
  // contributes log(omega (1 - omega)).
  double jac = 0.0;
  for (int i = 0; i < dim_; ++i) {
    if (i == r()) continue;
    if (variable() && i == omega()) {
      const double t = state[i];
      jac += detail::log_logistic(t) + detail::log_logistic(-t);
      continue;
    }
    jac += state[i];
  }
  return jac;
}

Eigen::VectorXd StateLayout::decode(const Eigen::VectorXd& state) const {
  PopulationTrajectory traj;
  ModelParameters params;
  unpack(state, traj, params);
  Eigen::VectorXd row(static_cast<int>(decoded_names().size()));
  int i = 0;
  for (int y = 0; y < years_; ++y) {
    row[i++] = traj.pre_f[y];
    row[i++] = traj.post_f[y];
  }
  for (int y = 0; y < years_; ++y) {
    row[i++] = traj.pre_m[y];
    row[i++] = traj.post_m[y];
  }
  if (variable()) {
    for (int y = 0; y < years_; ++y) row[i++] = params.a[y];
    row[i++] = params.a_bar;
  } else {
    row[i++] = params.a.front();
  }
  row[i++] = params.tau;
  if (variable()) row[i++] = params.omega;
  row[i++] = params.nu;
  row[i++] = params.r;
  row[i++] = params.k;
  row[i++] = params.sigma_f();
  row[i++] = params.sigma_m();
  row[i++] = params.sigma_a();
  return row;
}

}  // namespace popindex
