#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "popindex/diagnostics.hpp"

namespace popindex {

namespace {

// Tie-group sizes of a series.
std::vector<long long> tie_groups(std::span<const double> x) {
  std::map<double, long long> counts;
  for (double v : x) ++counts[v];
  std::vector<long long> sizes;
  for (const auto& [value, count] : counts)
    if (count > 1) sizes.push_back(count);
  return sizes;
}

// Number of permutations of n items by inversion count; the exact null
// distribution of the concordance statistic for untied data.
std::vector<double> inversion_counts(int n) {
  std::vector<double> counts{1.0};
  for (int k = 2; k <= n; ++k) {
    std::vector<double> next(counts.size() + k - 1, 0.0);
    for (std::size_t i = 0; i < counts.size(); ++i)
      for (int j = 0; j < k; ++j) next[i + j] += counts[i];
    counts = std::move(next);
  }
  return counts;
}

double exact_p_value(int n, double s_obs) {
  const std::vector<double> counts = inversion_counts(n);
  const double n0 = 0.5 * n * (n - 1);
  double total = 0.0, extreme = 0.0;
  for (std::size_t inv = 0; inv < counts.size(); ++inv) {
    total += counts[inv];
    const double s = n0 - 2.0 * static_cast<double>(inv);
    if (std::abs(s) >= std::abs(s_obs) - 1e-9) extreme += counts[inv];
  }
  return extreme / total;
}

}  // namespace

KendallResult kendall_tau(std::span<const double> a, std::span<const double> b) {
  const auto n = static_cast<long long>(a.size());
  if (b.size() != a.size()) throw std::invalid_argument("kendall_tau: length mismatch");
  if (n < 3) throw std::invalid_argument("kendall_tau: need at least 3 observations");

  long long concordant = 0, discordant = 0;
  for (long long i = 0; i < n; ++i) {
    for (long long j = i + 1; j < n; ++j) {
      const double da = a[i] - a[j];
      const double db = b[i] - b[j];
      const double prod = da * db;
      if (prod > 0.0) ++concordant;
      else if (prod < 0.0) ++discordant;
    }
  }
  const double s = static_cast<double>(concordant - discordant);

  const auto ties_a = tie_groups(a);
  const auto ties_b = tie_groups(b);
  auto pair_sum = [](const std::vector<long long>& groups, int order) {
    double total = 0.0;
    for (long long t : groups) {
      double term = static_cast<double>(t) * (t - 1);
      if (order >= 3) term *= (t - 2);
      total += term;
    }
    return total;
  };
  const double n0 = 0.5 * n * (n - 1);
  const double n1 = 0.5 * pair_sum(ties_a, 2);
  const double n2 = 0.5 * pair_sum(ties_b, 2);
  const double denom = std::sqrt((n0 - n1) * (n0 - n2));
  if (!(denom > 0.0))
    throw std::invalid_argument("kendall_tau: a series is constant (all tied)");

  KendallResult out;
  out.tau = s / denom;

  const bool has_ties = !ties_a.empty() || !ties_b.empty();
  if (!has_ties && n <= 12) {
    out.p_value = exact_p_value(static_cast<int>(n), s);
    return out;
  }

  // Normal approximation with tie correction.
  auto v_term = [](const std::vector<long long>& groups) {
    double total = 0.0;
    for (long long t : groups)
      total += static_cast<double>(t) * (t - 1) * (2.0 * t + 5.0);
    return total;
  };
  const double nd = static_cast<double>(n);
  const double v0 = nd * (nd - 1.0) * (2.0 * nd + 5.0);
  double variance = (v0 - v_term(ties_a) - v_term(ties_b)) / 18.0;
  variance += pair_sum(ties_a, 2) * pair_sum(ties_b, 2) / (2.0 * nd * (nd - 1.0));
  variance += pair_sum(ties_a, 3) * pair_sum(ties_b, 3) /
              (9.0 * nd * (nd - 1.0) * (nd - 2.0));
  if (!(variance > 0.0)) {
    out.p_value = 1.0;
    return out;
  }
  const double z = s / std::sqrt(variance);
  out.p_value = std::erfc(std::abs(z) * M_SQRT1_2);
  return out;
}

}  // namespace popindex
