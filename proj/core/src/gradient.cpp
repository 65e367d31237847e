// Exact gradient of the log posterior in unconstrained coordinates.
//
// The density terms are differentiated in natural (x) space and mapped
// through the transform: a log coordinate picks up a factor x plus the +1
// from its Jacobian term, the logit coordinate a factor omega(1-omega)
// plus (1 - 2 omega). The sigma contributions are accumulated against
// (sigma_F, sigma_M, sigma_a) and pushed through the (tau, omega, nu)
// parameterization at the end.

#include <cmath>

#include "densities.hpp"
#include "popindex/likelihood.hpp"

namespace popindex {

namespace {
constexpr double kBreedSd = 0.8660254037844386;  // sqrt(3/4)
constexpr double kHarvestSd = 0.5;               // sqrt(1/4)
}  // namespace

bool LogPosterior::gradient(const Eigen::VectorXd& state, Eigen::VectorXd& grad) const {
  if (!std::isfinite(evaluate(state).total)) return false;

  PopulationTrajectory traj;
  ModelParameters params;
  layout_.unpack(state, traj, params);
  const int T = layout_.years();
  const bool variable = config_.variant == ModelVariant::variable;

  const double sigma_f = params.sigma_f();
  const double sigma_m = params.sigma_m();
  const double sigma_a = params.sigma_a();
  if (!(sigma_f > 0.0) || !(sigma_m > 0.0) || (variable && !(sigma_a > 0.0)))
    return false;  // degenerate scale: the density is not differentiable here

  const double sd_bf = kBreedSd * sigma_f;
  const double sd_bm = kBreedSd * sigma_m;
  const double sd_hf = kHarvestSd * sigma_f;
  const double sd_hm = kHarvestSd * sigma_m;

  std::vector<double> d_pre_f(T, 0.0), d_post_f(T, 0.0);
  std::vector<double> d_pre_m(T, 0.0), d_post_m(T, 0.0);
  std::vector<double> d_a(T, 0.0);
  double d_abar = 0.0;
  double d_sf = 0.0, d_sm = 0.0, d_sa = 0.0;  // per-sigma accumulators
  double d_r = 0.0, d_k = 0.0;

  // Breeding transitions and their truncation normalizers.
  for (int y = 1; y < T; ++y) {
    const double fhp = traj.post_f[y - 1];
    const double mhp = traj.post_m[y - 1];
    const double log_fhp = std::log(fhp);
    const double rt = std::exp(params.r - params.k * log_fhp);
    const double bf = (rt + 1.0) * fhp;
    const double bm = mhp + rt * fhp;
    const double mu_f = std::log(bf);
    const double mu_m = std::log(bm);
    const double delta_f = std::log(traj.pre_f[y]) - mu_f;
    const double delta_m = std::log(traj.pre_m[y]) - mu_m;

    d_pre_f[y] += (-1.0 - delta_f / (sd_bf * sd_bf)) / traj.pre_f[y];
    d_pre_m[y] += (-1.0 - delta_m / (sd_bm * sd_bm)) / traj.pre_m[y];
    double d_mu_f = delta_f / (sd_bf * sd_bf);
    double d_mu_m = delta_m / (sd_bm * sd_bm);
    d_sf += (-1.0 / sd_bf + delta_f * delta_f / (sd_bf * sd_bf * sd_bf)) * kBreedSd;
    d_sm += (-1.0 / sd_bm + delta_m * delta_m / (sd_bm * sd_bm * sd_bm)) * kBreedSd;

    const double hf = data_.years[y].harvest_f;
    const double hm = data_.years[y].harvest_m;
    if (hf > 0.0) {
      const double z = (mu_f - std::log(hf)) / sd_bf;
      const double mills = detail::mills_ratio(z);
      d_mu_f -= mills / sd_bf;
      d_sf += mills * z / sd_bf * kBreedSd;
    }
    if (hm > 0.0) {
      const double z = (mu_m - std::log(hm)) / sd_bm;
      const double mills = detail::mills_ratio(z);
      d_mu_m -= mills / sd_bm;
      d_sm += mills * z / sd_bm * kBreedSd;
    }

    // Chain the location derivatives back to the previous post-hunt state
    // and to (r, k).
    const double dmu_f_dfhp = (rt + 1.0 - params.k * rt) / bf;
    const double dmu_m_dfhp = rt * (1.0 - params.k) / bm;
    const double dmu_m_dmhp = 1.0 / bm;
    d_post_f[y - 1] += d_mu_f * dmu_f_dfhp + d_mu_m * dmu_m_dfhp;
    d_post_m[y - 1] += d_mu_m * dmu_m_dmhp;
    d_r += d_mu_f * rt / (rt + 1.0) + d_mu_m * rt * fhp / bm;
    if (config_.with_k)
      d_k += -log_fhp * (d_mu_f * rt / (rt + 1.0) + d_mu_m * rt * fhp / bm);
  }

  // Harvest transitions.
  for (int y = 0; y < T; ++y) {
    const double af = traj.pre_f[y] - data_.years[y].harvest_f;
    const double am = traj.pre_m[y] - data_.years[y].harvest_m;
    const double delta_f = std::log(traj.post_f[y]) - std::log(af);
    const double delta_m = std::log(traj.post_m[y]) - std::log(am);
    d_post_f[y] += (-1.0 - delta_f / (sd_hf * sd_hf)) / traj.post_f[y];
    d_post_m[y] += (-1.0 - delta_m / (sd_hm * sd_hm)) / traj.post_m[y];
    d_pre_f[y] += delta_f / (sd_hf * sd_hf) / af;
    d_pre_m[y] += delta_m / (sd_hm * sd_hm) / am;
    d_sf += (-1.0 / sd_hf + delta_f * delta_f / (sd_hf * sd_hf * sd_hf)) * kHarvestSd;
    d_sm += (-1.0 / sd_hm + delta_m * delta_m / (sd_hm * sd_hm * sd_hm)) * kHarvestSd;
  }

  // Observations.
  for (int y = 0; y < T; ++y) {
    const YearRecord& rec = data_.years[y];
    const double scale = params.a[y] * rec.effort;
    const double lambda_f = scale * traj.pre_f[y];
    const double lambda_m = scale * traj.pre_m[y];
    const double resid_f = static_cast<double>(rec.count_f) / lambda_f - 1.0;
    const double resid_m = static_cast<double>(rec.count_m) / lambda_m - 1.0;
    d_pre_f[y] += resid_f * scale;
    d_pre_m[y] += resid_m * scale;
    d_a[y] += resid_f * rec.effort * traj.pre_f[y] + resid_m * rec.effort * traj.pre_m[y];
    if (rec.survey) {
      const double sd2 = rec.survey->sd_log * rec.survey->sd_log;
      d_post_f[y] += (std::log(rec.survey->est_f) - std::log(traj.post_f[y])) / sd2 /
                     traj.post_f[y];
      d_post_m[y] += (std::log(rec.survey->est_m) - std::log(traj.post_m[y])) / sd2 /
                     traj.post_m[y];
    }
  }

  // Priors.
  double d_tau = -priors_.beta_tau;
  double d_omega = 0.0;
  double d_nu = (priors_.alpha_nu - 1.0) / params.nu - priors_.beta_nu;
  if (variable) {
    const double log_abar = std::log(params.a_bar);
    for (int y = 0; y < T; ++y) {
      const double delta = std::log(params.a[y]) - log_abar;
      d_a[y] += (-1.0 - delta / (sigma_a * sigma_a)) / params.a[y];
      d_abar += delta / (sigma_a * sigma_a) / params.a_bar;
      d_sa += -1.0 / sigma_a + delta * delta / (sigma_a * sigma_a * sigma_a);
    }
    d_omega += (priors_.alpha_omega - 1.0) / params.omega -
               (priors_.beta_omega - 1.0) / (1.0 - params.omega);
    d_abar += -(params.a_bar - priors_.mu_abar) / (priors_.sigma_abar * priors_.sigma_abar);
  } else {
    d_a[0] += -(params.a[0] - priors_.mu_abar) / (priors_.sigma_abar * priors_.sigma_abar);
  }
  d_r += -(params.r - priors_.mu_r) / (priors_.sigma_r * priors_.sigma_r);
  if (config_.with_k) d_k += -priors_.beta_k;
  {
    const double s2 = priors_.sigma_n0 * priors_.sigma_n0;
    d_pre_f[0] += (-1.0 - (std::log(traj.pre_f[0]) - priors_.mu_n0) / s2) / traj.pre_f[0];
    d_pre_m[0] += (-1.0 - (std::log(traj.pre_m[0]) - priors_.mu_n0) / s2) / traj.pre_m[0];
  }

  // Push sigma contributions through the parameterization.
  if (variable) {
    d_tau += d_sf * params.omega + d_sm * params.omega * params.nu +
             d_sa * (1.0 - params.omega);
    d_omega += d_sf * params.tau + d_sm * params.tau * params.nu - d_sa * params.tau;
    d_nu += d_sm * params.omega * params.tau;
  } else {
    d_tau += d_sf + d_sm * params.nu;
    d_nu += d_sm * params.tau;
  }

  // Map to unconstrained coordinates; each log coordinate adds +1 from the
  // Jacobian term, the logit coordinate adds (1 - 2 omega).
  grad.resize(layout_.dim());
  for (int y = 0; y < T; ++y) {
    grad[layout_.pre_f(y)] = traj.pre_f[y] * d_pre_f[y] + 1.0;
    grad[layout_.post_f(y)] = traj.post_f[y] * d_post_f[y] + 1.0;
    grad[layout_.pre_m(y)] = traj.pre_m[y] * d_pre_m[y] + 1.0;
    grad[layout_.post_m(y)] = traj.post_m[y] * d_post_m[y] + 1.0;
  }
  if (variable) {
    for (int y = 0; y < T; ++y)
      grad[layout_.a(y)] = params.a[y] * d_a[y] + 1.0;
    grad[layout_.a_bar()] = params.a_bar * d_abar + 1.0;
    grad[layout_.omega()] =
        params.omega * (1.0 - params.omega) * d_omega + (1.0 - 2.0 * params.omega);
  } else {
    double d_a_total = 0.0;  // the shared a collects every year's term
    for (double v : d_a) d_a_total += v;
    grad[layout_.a(0)] = params.a[0] * d_a_total + 1.0;
  }
  grad[layout_.tau()] = params.tau * d_tau + 1.0;
  grad[layout_.nu()] = params.nu * d_nu + 1.0;
  grad[layout_.r()] = d_r;
  if (config_.with_k) grad[layout_.k()] = params.k * d_k + 1.0;
  return grad.allFinite();
}

}  // namespace popindex
