#include "popindex/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numeric>
#include <stdexcept>

#include "popindex/csv.hpp"

namespace popindex {

double quantile_type7(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

EssResult effective_sample_size(std::span<const double> draws) {
  const auto n = static_cast<long long>(draws.size());
  if (n < 2) return {static_cast<double>(n), n == 0};
  const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
  double c0 = 0.0;
  for (double x : draws) c0 += (x - mean) * (x - mean);
  c0 /= static_cast<double>(n);
  if (!(c0 > 0.0)) return {0.0, true};

  auto autocorr = [&](long long lag) {
    double c = 0.0;
    for (long long i = 0; i + lag < n; ++i)
      c += (draws[i] - mean) * (draws[i + lag] - mean);
    return c / static_cast<double>(n) / c0;
  };

  // Integrated autocorrelation time, truncated at the first nonpositive
  // pair sum (initial positive sequence).
  double tau = -1.0;
  for (long long m = 0; 2 * m + 1 < n; ++m) {
    const double rho_even = m == 0 ? 1.0 : autocorr(2 * m);
    const double pair = rho_even + autocorr(2 * m + 1);
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  tau = std::max(tau, 1e-3);
  return {static_cast<double>(n) / tau, false};
}

std::optional<double> potential_scale_reduction(
    const std::vector<std::span<const double>>& chains) {
  const auto m = chains.size();
  if (m < 2) return std::nullopt;
  std::size_t n = chains.front().size();
  for (const auto& c : chains) n = std::min(n, c.size());
  if (n < 2) return std::nullopt;

  std::vector<double> means(m), vars(m);
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += chains[j][i];
    means[j] = s / static_cast<double>(n);
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = chains[j][i] - means[j];
      v += d * d;
    }
    vars[j] = v / static_cast<double>(n - 1);
  }
  const double w = std::accumulate(vars.begin(), vars.end(), 0.0) / static_cast<double>(m);
  if (!(w > 0.0)) return std::nullopt;
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(m);
  double between = 0.0;
  for (double mu : means) between += (mu - grand) * (mu - grand);
  between /= static_cast<double>(m - 1);  // = B/n in the usual notation
  const double v_hat =
      (static_cast<double>(n) - 1.0) / static_cast<double>(n) * w + between;
  // Values below 1 are finite-sample noise; floor so identical chains
  // report exactly 1.
  return std::sqrt(std::max(v_hat / w, 1.0));
}

PosteriorSummary summarize(const std::vector<ChainOutput>& chains,
                           const StateLayout& layout, int first_year) {
  if (chains.empty()) throw std::invalid_argument("summarize: no chains");
  const std::vector<std::string> names = layout.decoded_names(first_year);
  const int n_cols = static_cast<int>(names.size());

  // Decode every stored draw once.
  std::vector<Eigen::MatrixXd> decoded(chains.size());
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const auto& draws = chains[c].draws;
    decoded[c].resize(draws.rows(), n_cols);
    for (Eigen::Index i = 0; i < draws.rows(); ++i)
      decoded[c].row(i) = layout.decode(draws.row(i).transpose()).transpose();
  }

  PosteriorSummary summary;
  summary.draws_per_chain = decoded.front().rows();
  for (const auto& chain : chains) {
    summary.acceptance_rates.push_back(chain.acceptance_rate);
    summary.seeds.push_back(chain.seed);
  }

  std::vector<double> pooled;
  for (int col = 0; col < n_cols; ++col) {
    pooled.clear();
    double ess_sum = 0.0;
    bool degenerate = false;
    std::vector<std::vector<double>> per_chain(chains.size());
    for (std::size_t c = 0; c < chains.size(); ++c) {
      per_chain[c].resize(decoded[c].rows());
      for (Eigen::Index i = 0; i < decoded[c].rows(); ++i)
        per_chain[c][i] = decoded[c](i, col);
      pooled.insert(pooled.end(), per_chain[c].begin(), per_chain[c].end());
      const EssResult ess = effective_sample_size(per_chain[c]);
      ess_sum += ess.ess;
      degenerate = degenerate || ess.degenerate;
    }
    ParameterSummary param;
    param.name = names[col];
    param.mean = std::accumulate(pooled.begin(), pooled.end(), 0.0) /
                 static_cast<double>(pooled.size());
    param.q025 = quantile_type7(pooled, 0.025);
    param.q10 = quantile_type7(pooled, 0.10);
    param.q50 = quantile_type7(pooled, 0.50);
    param.q90 = quantile_type7(pooled, 0.90);
    param.q975 = quantile_type7(pooled, 0.975);
    param.median = param.q50;
    param.ess = ess_sum;
    param.ess_degenerate = degenerate;
    if (chains.size() >= 2) {
      std::vector<std::span<const double>> views;
      views.reserve(per_chain.size());
      for (const auto& v : per_chain) views.emplace_back(v);
      param.psrf = potential_scale_reduction(views);
    }
    summary.parameters.push_back(std::move(param));
  }
  return summary;
}

std::string summary_to_json(const PosteriorSummary& summary) {
  nlohmann::json root;
  root["draws_per_chain"] = summary.draws_per_chain;
  root["acceptance_rates"] = summary.acceptance_rates;
  root["seeds"] = summary.seeds;
  nlohmann::json params = nlohmann::json::array();
  for (const auto& p : summary.parameters) {
    nlohmann::json item;
    item["name"] = p.name;
    item["mean"] = p.mean;
    item["median"] = p.median;
    item["q2.5"] = p.q025;
    item["q10"] = p.q10;
    item["q50"] = p.q50;
    item["q90"] = p.q90;
    item["q97.5"] = p.q975;
    if (p.ess_degenerate)
      item["ess"] = nullptr;
    else
      item["ess"] = p.ess;
    item["ess_degenerate"] = p.ess_degenerate;
    if (p.psrf) item["psrf"] = *p.psrf;
    params.push_back(std::move(item));
  }
  root["parameters"] = std::move(params);
  return root.dump(2) + "\n";
}

}  // namespace popindex
