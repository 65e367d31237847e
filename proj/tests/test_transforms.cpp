#include <doctest.h>

#include <random>

#include "popindex/transforms.hpp"
#include "testutil/scenarios.hpp"

using namespace popindex;

TEST_SUITE("transforms") {

TEST_CASE("pack/unpack round trip is the identity") {
  std::mt19937_64 rng(42);
  for (const ModelVariant variant : {ModelVariant::variable, ModelVariant::fixed}) {
    for (const bool with_k : {false, true}) {
      const ModelConfig config{variant, with_k};
      const Dataset data = scenarios::random_dataset(5, rng);
      const StateLayout layout(5, config);
      for (int rep = 0; rep < 20; ++rep) {
        const Eigen::VectorXd state = scenarios::random_valid_state(data, config, rng);
        PopulationTrajectory traj;
        ModelParameters params;
        layout.unpack(state, traj, params);
        const Eigen::VectorXd back = layout.pack(traj, params);
        REQUIRE(back.size() == state.size());
        for (int i = 0; i < state.size(); ++i)
          CHECK(back[i] == doctest::Approx(state[i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("layout dimensions and names") {
  const StateLayout variable(14, {ModelVariant::variable, false});
  CHECK(variable.dim() == 5 * 14 + 5);
  CHECK(variable.coordinate_names(2000).size() == static_cast<size_t>(variable.dim()));

  const StateLayout with_k(14, {ModelVariant::variable, true});
  CHECK(with_k.dim() == 5 * 14 + 6);
  CHECK(with_k.coordinate_names().back() == "log_k");

  const StateLayout fixed(14, {ModelVariant::fixed, false});
  CHECK(fixed.dim() == 4 * 14 + 4);
  CHECK(fixed.omega() == -1);
  CHECK(fixed.a(0) == fixed.a(13));

  // every coordinate gets a distinct name
  auto names = variable.coordinate_names(2000);
  std::sort(names.begin(), names.end());
  CHECK(std::adjacent_find(names.begin(), names.end()) == names.end());
}

TEST_CASE("decode exposes derived sigmas") {
  std::mt19937_64 rng(3);
  const ModelConfig config{ModelVariant::variable, false};
  const Dataset data = scenarios::random_dataset(3, rng);
  const StateLayout layout(3, config);
  const Eigen::VectorXd state = scenarios::random_valid_state(data, config, rng);

  PopulationTrajectory traj;
  ModelParameters params;
  layout.unpack(state, traj, params);
  const Eigen::VectorXd row = layout.decode(state);
  const auto names = layout.decoded_names(2000);
  REQUIRE(row.size() == static_cast<Eigen::Index>(names.size()));

  auto value_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return row[static_cast<Eigen::Index>(i)];
    FAIL("missing column ", name);
    return 0.0;
  };
  CHECK(value_of("sigma_f") == doctest::Approx(params.sigma_f()).epsilon(1e-12));
  CHECK(value_of("sigma_m") == doctest::Approx(params.sigma_m()).epsilon(1e-12));
  CHECK(value_of("sigma_a") == doctest::Approx(params.sigma_a()).epsilon(1e-12));
  CHECK(value_of("npre_f_2000") == doctest::Approx(traj.pre_f[0]).epsilon(1e-12));
  CHECK(value_of("npost_m_2002") == doctest::Approx(traj.post_m[2]).epsilon(1e-12));
}

}  // TEST_SUITE
