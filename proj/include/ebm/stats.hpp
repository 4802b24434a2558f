#pragma once

#include <utility>
#include <vector>

#include "ebm/rbm.hpp"

namespace ebm {

/// Free energy F(v) = -a'v - sum_j log(1 + e^(b_j + (W'v)_j)), the
/// marginal unnormalised negative log-probability of a visible vector.
double free_energy(const RbmLayer& layer, const Vector& v);

/// Stochastic log pseudo-likelihood estimate: per image one uniformly
/// chosen bit is flipped and the contribution is
/// m * log sigmoid(F(v_flipped) - F(v)); returns the mean over images.
double log_pseudo_likelihood(const RbmLayer& layer, const Matrix& data,
                             Rng& rng);

/// Exact mean log P(v) by full enumeration; requires m + n <= 20.
double exact_log_likelihood(const RbmLayer& layer, const Matrix& data);

/// log Z by enumeration over the smaller of the two unit sides.
double exact_log_partition(const RbmLayer& layer);

enum class WilcoxonMethod { Exact, NormalApprox };

struct WilcoxonResult {
  double w_statistic = 0.0;  // min(W+, W-)
  int n_effective = 0;       // pairs with nonzero difference
  double p_value = 1.0;      // two-sided
  WilcoxonMethod method = WilcoxonMethod::Exact;
  bool significant_at_0_05 = false;
};

/// Paired two-sided Wilcoxon signed-rank test. Zero differences are
/// dropped; ties get average ranks. Exact p (full sign-assignment
/// distribution) when the effective sample is <= 25, otherwise a normal
/// approximation with tie-corrected variance and continuity correction.
/// Throws ContractError when every difference is zero.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x,
                                    const std::vector<double>& y);

/// Arithmetic mean and sample (n-1) standard deviation.
std::pair<double, double> summarize(const std::vector<double>& values);

}  // namespace ebm
