#include "ebm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ebm/errors.hpp"

namespace ebm {

namespace {

// log(1 + e^x) without overflow
double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double log_sigmoid(double x) { return -softplus(-x); }

double logsumexp(const std::vector<double>& values) {
  const double m = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - m);
  return m + std::log(sum);
}

}  // namespace

double free_energy(const RbmLayer& layer, const Vector& v) {
  if (v.size() != layer.m)
    throw ContractError("free_energy: dimension mismatch");
  const Vector z = layer.W.transpose() * v + layer.b;
  double hidden_term = 0.0;
  for (Eigen::Index j = 0; j < z.size(); ++j) hidden_term += softplus(z(j));
  return -layer.a.dot(v) - hidden_term;
}

double log_pseudo_likelihood(const RbmLayer& layer, const Matrix& data,
                             Rng& rng) {
  if (data.cols() != layer.m)
    throw ContractError("log_pseudo_likelihood: dimension mismatch");
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    const Vector v = data.row(i).transpose();
    Vector flipped = v;
    const auto bit = static_cast<Eigen::Index>(
        rng.uniform_index(static_cast<std::size_t>(layer.m)));
    flipped(bit) = 1.0 - flipped(bit);
    total += layer.m *
             log_sigmoid(free_energy(layer, flipped) - free_energy(layer, v));
  }
  return total / static_cast<double>(data.rows());
}

double exact_log_partition(const RbmLayer& layer) {
  if (layer.m + layer.n > 20)
    throw ContractError("exact_log_partition: model too large to enumerate");
  // Enumerate the smaller side; the other side marginalises in closed form.
  const bool over_visible = layer.m <= layer.n;
  const int bits = over_visible ? layer.m : layer.n;
  std::vector<double> terms;
  terms.reserve(std::size_t{1} << bits);
  Vector s(bits);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
    for (int i = 0; i < bits; ++i) s(i) = (mask >> i) & 1 ? 1.0 : 0.0;
    if (over_visible) {
      terms.push_back(-free_energy(layer, s));
    } else {
      const Vector z = layer.W * s + layer.a;
      double visible_term = 0.0;
      for (Eigen::Index i = 0; i < z.size(); ++i)
        visible_term += softplus(z(i));
      terms.push_back(layer.b.dot(s) + visible_term);
    }
  }
  return logsumexp(terms);
}

double exact_log_likelihood(const RbmLayer& layer, const Matrix& data) {
  if (data.cols() != layer.m)
    throw ContractError("exact_log_likelihood: dimension mismatch");
  const double log_z = exact_log_partition(layer);
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    total += -free_energy(layer, data.row(i).transpose()) - log_z;
  return total / static_cast<double>(data.rows());
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x,
                                    const std::vector<double>& y) {
  if (x.size() != y.size())
    throw ContractError("wilcoxon_signed_rank: unequal lengths");
  if (x.size() < 5)
    throw ContractError("wilcoxon_signed_rank: need at least 5 pairs");

  std::vector<double> diffs;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (d != 0.0) diffs.push_back(d);
  }
  if (diffs.empty())
    throw ContractError("wilcoxon_signed_rank: no nonzero differences");

  const int n = static_cast<int>(diffs.size());
  std::vector<std::size_t> order(diffs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(diffs[a]) < std::abs(diffs[b]);
  });

  // Average ranks over tie groups; doubled so they stay integral.
  std::vector<long> rank2(diffs.size());
  std::vector<long> tie_sizes;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() &&
           std::abs(diffs[order[j]]) == std::abs(diffs[order[i]]))
      ++j;
    // positions i..j-1 share the average of ranks i+1..j
    const long sum2 = static_cast<long>(i + 1 + j);  // 2 * average rank
    for (std::size_t k = i; k < j; ++k) rank2[order[k]] = sum2;
    tie_sizes.push_back(static_cast<long>(j - i));
    i = j;
  }

  long w_plus2 = 0;
  long total2 = 0;
  for (std::size_t k = 0; k < diffs.size(); ++k) {
    total2 += rank2[k];
    if (diffs[k] > 0.0) w_plus2 += rank2[k];
  }
  const long w_minus2 = total2 - w_plus2;
  const long w2 = std::min(w_plus2, w_minus2);

  WilcoxonResult result;
  result.w_statistic = static_cast<double>(w2) / 2.0;
  result.n_effective = n;

  if (n <= 25) {
    result.method = WilcoxonMethod::Exact;
    // Distribution of W+ over all 2^n sign assignments, in doubled-rank
    // units, by subset-sum counting.
    std::vector<unsigned long long> counts(
        static_cast<std::size_t>(total2) + 1, 0);
    counts[0] = 1;
    for (std::size_t k = 0; k < diffs.size(); ++k) {
      const auto r = static_cast<std::size_t>(rank2[k]);
      for (std::size_t s = counts.size(); s-- > r;)
        counts[s] += counts[s - r];
    }
    unsigned long long tail = 0;
    for (long s = 0; s <= w2; ++s)
      tail += counts[static_cast<std::size_t>(s)];
    result.p_value = std::min(
        1.0, 2.0 * static_cast<double>(tail) / std::ldexp(1.0, n));
  } else {
    result.method = WilcoxonMethod::NormalApprox;
    const double nd = n;
    const double mean = nd * (nd + 1.0) / 4.0;
    double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0;
    for (long t : tie_sizes)
      var -= static_cast<double>(t * t * t - t) / 48.0;
    const double w = result.w_statistic;
    const double z = (w - mean + 0.5) / std::sqrt(var);
    result.p_value = std::min(1.0, std::erfc(-z / std::sqrt(2.0)));
  }

  result.significant_at_0_05 = result.p_value < 0.05;
  return result;
}

std::pair<double, double> summarize(const std::vector<double>& values) {
  if (values.size() < 2)
    throw ContractError("summarize: need at least 2 values");
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) /
      static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

}  // namespace ebm
