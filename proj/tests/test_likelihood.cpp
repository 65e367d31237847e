#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "popindex/likelihood.hpp"
#include "testutil/oracles.hpp"
#include "testutil/posterior_oracle.hpp"
#include "testutil/quadrature.hpp"
#include "testutil/scenarios.hpp"

using namespace popindex;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ModelParameters params_with(double sigma_f, double sigma_m, double r, double k = 0.0) {
  // tau/omega/nu chosen to hit the requested sigmas with omega = 1
  ModelParameters p;
  p.omega = 1.0;
  p.tau = sigma_f;
  p.nu = sigma_f > 0.0 ? sigma_m / sigma_f : 1.0;
  p.r = r;
  p.k = k;
  return p;
}

}  // namespace

TEST_SUITE("likelihood") {

TEST_CASE("breeding transition at the medians") {
  // r_t = 1, locations at 2*100 and 50 + 1*100; density at the median of a
  // log-normal is 1/(x s sqrt(2 pi)).
  const ModelParameters p = params_with(1.0, 1.0, 0.0);
  const double lp = log_breeding_transition({100.0, 50.0}, {200.0, 150.0}, p);
  const double s = std::sqrt(0.75);
  const double expected = -std::log(200.0 * s * std::sqrt(2.0 * M_PI)) -
                          std::log(150.0 * s * std::sqrt(2.0 * M_PI));
  CHECK(lp == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("breeding transition equals two oracle log-normal densities") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    ModelParameters p = params_with(0.1 + unit(rng), 0.1 + unit(rng),
                                    -1.0 + 2.0 * unit(rng), 0.1 * unit(rng));
    const SexPair prev{50.0 + 500.0 * unit(rng), 40.0 + 400.0 * unit(rng)};
    const SexPair next{50.0 + 800.0 * unit(rng), 40.0 + 700.0 * unit(rng)};
    const double rt = std::exp(p.r - p.k * std::log(prev.female));
    const double expected =
        oracle::log_normal_pdf(next.female, std::log((rt + 1.0) * prev.female),
                               std::sqrt(0.75) * p.sigma_f()) +
        oracle::log_normal_pdf(next.male,
                               std::log(prev.male + rt * prev.female),
                               std::sqrt(0.75) * p.sigma_m());
    CHECK(log_breeding_transition(prev, next, p) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("degenerate breeding scale") {
  const ModelParameters p = params_with(0.0, 0.0, 0.0);
  // on the deterministic path: (r_t + 1) N = 2 * 100, M + r_t N = 150
  CHECK(log_breeding_transition({100.0, 50.0}, {200.0, 150.0}, p) == 0.0);
  CHECK(log_breeding_transition({100.0, 50.0}, {201.0, 150.0}, p) == -kInf);
}

TEST_CASE("harvest transition median value and truncation behavior") {
  const ModelParameters p = params_with(1.0, 1.0, 0.0);
  const TransitionLaw origin{std::log(600.0), std::sqrt(0.75), std::log(500.0),
                             std::sqrt(0.75)};

  SUBCASE("zero harvest contributes no truncation term") {
    const double with_zero =
        log_harvest_transition({500.0, 400.0}, {450.0, 380.0}, {0.0, 0.0}, p, origin);
    const double female = oracle::log_normal_pdf(450.0, std::log(500.0), 0.5);
    const double male = oracle::log_normal_pdf(380.0, std::log(400.0), 0.5);
    CHECK(with_zero == doctest::Approx(female + male).epsilon(1e-12));
  }

  SUBCASE("median value with harvest") {
    const double lp =
        log_harvest_transition({500.0, 400.0}, {400.0, 300.0}, {100.0, 100.0}, p, origin);
    const double female = -std::log(400.0) - std::log(0.5) - 0.5 * std::log(2.0 * M_PI);
    const double male = -std::log(300.0) - std::log(0.5) - 0.5 * std::log(2.0 * M_PI);
    const double trunc_f =
        std::log(oracle::std_normal_cdf((origin.mu_f - std::log(100.0)) / origin.sd_f));
    const double trunc_m =
        std::log(oracle::std_normal_cdf((origin.mu_m - std::log(100.0)) / origin.sd_m));
    CHECK(lp == doctest::Approx(female + male - trunc_f - trunc_m).epsilon(1e-12));
  }

  SUBCASE("harvest at or above the pre-hunt population") {
    CHECK(log_harvest_transition({100.0, 50.0}, {10.0, 10.0}, {100.0, 0.0}, p, origin) ==
          -kInf);
    CHECK(log_harvest_transition({100.0, 50.0}, {10.0, 10.0}, {0.0, 60.0}, p, origin) ==
          -kInf);
  }
}

TEST_CASE("truncated breeding density integrates to one") {
  // The l3 normalizer must make the constrained breeding density a proper
  // density on (H, inf).
  for (const double sigma : {0.05, 0.1, 0.2, 0.4, 0.8}) {
    for (const double harvest : {300.0, 600.0}) {
      const ModelParameters p = params_with(sigma, sigma, std::log(0.3));
      const SexPair prev{500.0, 400.0};
      const TransitionLaw law = breeding_law(prev, p);
      const double log_z = std::log(oracle::std_normal_cdf(
          (law.mu_f - std::log(harvest)) / law.sd_f));
      auto density = [&](double n) {
        return std::exp(oracle::log_normal_pdf(n, law.mu_f, law.sd_f) - log_z);
      };
      const double upper = std::exp(law.mu_f + 10.0 * law.sd_f);
      const double integral =
          quadrature::integrate(density, harvest, upper, 1e-10);
      CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("observation terms") {
  Dataset data;
  data.years.push_back({2000, 0, 20, 100.0, 0.0, 0.0, std::nullopt});
  PopulationTrajectory traj(1);
  traj.pre_f[0] = 30.0;
  traj.pre_m[0] = 20.0;
  traj.post_f[0] = 25.0;
  traj.post_m[0] = 15.0;
  ModelParameters p = params_with(0.5, 0.5, 0.0);
  p.a.assign(1, 0.01);
  p.a_bar = 0.01;

  SUBCASE("zero count contributes -lambda; pinned Poisson value") {
    const double lambda_f = 0.01 * 100.0 * 30.0;  // count 0
    const double lambda_m = 0.01 * 100.0 * 20.0;  // count 20, lambda 20
    const double expected = -lambda_f + 20.0 * std::log(lambda_m) - lambda_m -
                            std::lgamma(21.0);
    CHECK(log_observation(traj, p, data) == doctest::Approx(expected).epsilon(1e-12));
  }

  SUBCASE("survey at its mean") {
    data.years[0].survey = SurveyRecord{25.0, 15.0, 0.1};
    const double base = log_observation(traj, p, data);
    // each sex adds a Gaussian at its mean: -log sigma - log(sqrt(2 pi))
    Dataset no_survey = data;
    no_survey.years[0].survey.reset();
    const double at_mean = -std::log(0.1) - 0.5 * std::log(2.0 * M_PI);
    CHECK(base == doctest::Approx(log_observation(traj, p, no_survey) + 2.0 * at_mean)
                      .epsilon(1e-12));
  }

  SUBCASE("raising a count by one changes l4 by log(lambda/(Y+1))") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long long> counts(0, 50);
    for (int rep = 0; rep < 50; ++rep) {
      data.years[0].count_f = counts(rng);
      const double before = log_observation(traj, p, data);
      data.years[0].count_f += 1;
      const double after = log_observation(traj, p, data);
      const double lambda = 0.01 * 100.0 * 30.0;
      CHECK(after - before ==
            doctest::Approx(std::log(lambda / static_cast<double>(data.years[0].count_f)))
                .epsilon(1e-10));
    }
  }
}

TEST_CASE("prior terms") {
  const PriorConfig priors = scenarios::test_priors();
  const ModelConfig config{ModelVariant::variable, false};

  SUBCASE("uniform beta contributes zero anywhere, including the boundary") {
    ModelParameters p = params_with(0.2, 0.2, 0.0);
    p.a.assign(2, priors.mu_abar);
    p.a_bar = priors.mu_abar;
    // omega = 1: sigma_a = 0 and all a_t equal a_bar, so the hierarchy
    // contributes zero; the Beta(1,1) term must also vanish.
    double lp = log_prior(p, {500.0, 400.0}, priors, config);
    ModelParameters q = p;
    q.omega = 0.5;
    q.tau = 0.4;  // same sigma_f, now sigma_a = 0.2 > 0
    double expected_hierarchy = 0.0;
    for (double a_t : q.a)
      expected_hierarchy += oracle::log_normal_pdf(a_t, std::log(q.a_bar), q.sigma_a());
    CHECK(log_prior(q, {500.0, 400.0}, priors, config) - lp ==
          doctest::Approx(expected_hierarchy).epsilon(1e-9));
  }

  SUBCASE("exponential tau prior with unit rate") {
    ModelParameters p = params_with(0.0, 0.0, 0.0);
    p.tau = 2.0;
    p.omega = 1.0;
    p.a.assign(1, priors.mu_abar);
    p.a_bar = priors.mu_abar;
    const double base = log_prior(p, {500.0, 400.0}, priors, config);
    ModelParameters q = p;
    q.tau = 0.0;
    // beta_tau = 1: the tau contribution at tau=2 is exactly -2 (log rate = 0)
    CHECK(base - log_prior(q, {500.0, 400.0}, priors, config) ==
          doctest::Approx(-2.0).epsilon(1e-12));
  }

  SUBCASE("zero sigma_a with any off-center a_t is -inf") {
    ModelParameters p = params_with(0.3, 0.3, 0.0);  // omega = 1 -> sigma_a = 0
    p.a.assign(3, priors.mu_abar);
    p.a[1] = priors.mu_abar * 1.5;
    p.a_bar = priors.mu_abar;
    CHECK(log_prior(p, {500.0, 400.0}, priors, config) == -kInf);
  }

  SUBCASE("full prior equals the sum of oracle densities") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
      ModelParameters p;
      p.tau = 0.1 + unit(rng);
      p.omega = 0.1 + 0.8 * unit(rng);
      p.nu = 0.5 + unit(rng);
      p.r = -1.0 + 2.0 * unit(rng);
      p.k = 0.2 * unit(rng);
      p.a_bar = 1e-4 * (0.5 + unit(rng));
      p.a = {p.a_bar * (0.8 + 0.4 * unit(rng)), p.a_bar * (0.8 + 0.4 * unit(rng))};
      const SexPair init{300.0 + 400.0 * unit(rng), 250.0 + 300.0 * unit(rng)};
      const ModelConfig with_k{ModelVariant::variable, true};

      double expected = 0.0;
      for (double a_t : p.a)
        expected += oracle::log_normal_pdf(a_t, std::log(p.a_bar), p.sigma_a());
      expected += oracle::beta_pdf_log(p.omega, priors.alpha_omega, priors.beta_omega);
      expected += oracle::exponential_pdf_log(p.tau, priors.beta_tau);
      expected += oracle::gamma_pdf_log(p.nu, priors.alpha_nu, priors.beta_nu);
      expected += oracle::normal_pdf_log(p.a_bar, priors.mu_abar, priors.sigma_abar);
      expected += oracle::normal_pdf_log(p.r, priors.mu_r, priors.sigma_r);
      expected += oracle::exponential_pdf_log(p.k, priors.beta_k);
      expected += oracle::log_normal_pdf(init.female, priors.mu_n0, priors.sigma_n0);
      expected += oracle::log_normal_pdf(init.male, priors.mu_n0, priors.sigma_n0);
      CHECK(log_prior(p, init, priors, with_k) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("log posterior: breakdown sums to total") {
  std::mt19937_64 rng(23);
  const PriorConfig priors = scenarios::test_priors();
  for (const bool with_k : {false, true}) {
    for (const ModelVariant variant : {ModelVariant::variable, ModelVariant::fixed}) {
      const ModelConfig config{variant, with_k};
      const Dataset data = scenarios::random_dataset(3, rng);
      const LogPosterior posterior(data, priors, config);
      for (int rep = 0; rep < 25; ++rep) {
        const Eigen::VectorXd state = scenarios::random_valid_state(data, config, rng);
        const LogPosteriorBreakdown b = posterior.evaluate(state);
        CHECK(b.total == b.l1 + b.l2 + b.l3 + b.l4 + b.l5 + b.jacobian);
        CHECK(std::isfinite(b.total));
      }
    }
  }
}

TEST_CASE("log posterior matches the hand-assembled oracle") {
  std::mt19937_64 rng(29);
  const PriorConfig priors = scenarios::test_priors();
  std::uniform_int_distribution<int> t_dist(2, 4);
  for (int rep = 0; rep < 60; ++rep) {
    const ModelConfig config{rep % 2 == 0 ? ModelVariant::variable : ModelVariant::fixed,
                             rep % 3 == 0};
    const Dataset data = scenarios::random_dataset(t_dist(rng), rng);
    const LogPosterior posterior(data, priors, config);
    const Eigen::VectorXd state = scenarios::random_valid_state(data, config, rng);
    const double expected = oracle::assembled_log_posterior(state, data, priors, config);
    CHECK(posterior.value(state) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("fixed variant aliases the variable model at a_t == a") {
  std::mt19937_64 rng(31);
  const PriorConfig priors = scenarios::test_priors();
  const Dataset data = scenarios::random_dataset(4, rng);

  const ModelConfig fixed_config{ModelVariant::fixed, false};
  const LogPosterior fixed_posterior(data, priors, fixed_config);
  const Eigen::VectorXd fixed_state =
      scenarios::random_valid_state(data, fixed_config, rng);

  // Rebuild the same point in the variable layout: a_t = a_bar = a, and
  // omega pushed to 1 so that sigma_f matches (sigma_a = 0).
  PopulationTrajectory traj;
  ModelParameters params;
  fixed_posterior.layout().unpack(fixed_state, traj, params);

  const ModelConfig var_config{ModelVariant::variable, false};
  const StateLayout var_layout(4, var_config);
  Eigen::VectorXd var_state(var_layout.dim());
  for (int y = 0; y < 4; ++y) {
    var_state[var_layout.pre_f(y)] = std::log(traj.pre_f[y]);
    var_state[var_layout.post_f(y)] = std::log(traj.post_f[y]);
    var_state[var_layout.pre_m(y)] = std::log(traj.pre_m[y]);
    var_state[var_layout.post_m(y)] = std::log(traj.post_m[y]);
    var_state[var_layout.a(y)] = std::log(params.a[y]);
  }
  var_state[var_layout.a_bar()] = std::log(params.a_bar);
  var_state[var_layout.tau()] = std::log(params.tau);
  var_state[var_layout.omega()] = 40.0;  // logistic(40) rounds to 1 exactly
  var_state[var_layout.nu()] = std::log(params.nu);
  var_state[var_layout.r()] = params.r;

  const LogPosterior var_posterior(data, priors, var_config);
  const LogPosteriorBreakdown fixed_b = fixed_posterior.evaluate(fixed_state);
  const LogPosteriorBreakdown var_b = var_posterior.evaluate(var_state);
  CHECK(var_b.l1 == doctest::Approx(fixed_b.l1).epsilon(1e-10));
  CHECK(var_b.l2 == doctest::Approx(fixed_b.l2).epsilon(1e-10));
  CHECK(var_b.l3 == doctest::Approx(fixed_b.l3).epsilon(1e-10));
  CHECK(var_b.l4 == doctest::Approx(fixed_b.l4).epsilon(1e-10));
}

TEST_CASE("non-finite states are reported, not thrown") {
  std::mt19937_64 rng(37);
  const PriorConfig priors = scenarios::test_priors();
  const ModelConfig config{ModelVariant::variable, false};
  Dataset data = scenarios::random_dataset(3, rng);
  data.years[1].harvest_f = 5000.0;  // no random state will clear this
  const LogPosterior posterior(data, priors, config);
  Dataset plain = data;
  plain.years[1].harvest_f = 10.0;
  const Eigen::VectorXd state =
      scenarios::random_valid_state(plain, config, rng);
  const LogPosteriorBreakdown b = posterior.evaluate(state);
  CHECK(b.total == -kInf);
}

}  // TEST_SUITE
