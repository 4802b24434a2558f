#pragma once

#include <Eigen/Dense>
#include <optional>

#include "ebm/rng.hpp"

namespace ebm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Numerically safe logistic function; saturates instead of overflowing.
inline double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// One visible/hidden pair of a Bernoulli-Bernoulli RBM.
///
/// W is m x n (visible x hidden), a the visible bias, b the hidden bias.
/// The *_prev members hold the previous update step for momentum.
struct RbmLayer {
  int m = 0;
  int n = 0;
  Matrix W;
  Vector a;
  Vector b;
  Matrix dW_prev;
  Vector da_prev;
  Vector db_prev;
};

enum class Learner { CD, PCD };

struct TrainConfig {
  double eta = 0.1;      // learning rate
  double lambda = 0.0;   // weight decay (applied to W only)
  double alpha = 0.0;    // momentum
  int epochs = 10;
  int batch_size = 20;
  Learner learner = Learner::CD;
  int gibbs_steps = 1;   // k in CD-k / PCD-k
};

/// Persistent negative-phase particles for PCD. One fantasy state per
/// mini-batch slot; rows are binary visible vectors.
struct PcdChains {
  Matrix fantasy_v;  // batch_size x m, entries in {0,1}
};

/// Fresh layer: W ~ Normal(0, init_sigma^2), biases and momentum zero.
RbmLayer init_layer(int m, int n, Rng& rng, double init_sigma = 0.01);

/// E(v,h) of the Bernoulli-Bernoulli energy.
double energy(const RbmLayer& layer, const Vector& v, const Vector& h);

/// P(h_j = 1 | v), componentwise. Accepts mean activations as input.
Vector prob_h_given_v(const RbmLayer& layer, const Vector& v);

/// P(v_i = 1 | h), componentwise.
Vector prob_v_given_h(const RbmLayer& layer, const Vector& h);

/// Batch variants: one row per sample.
Matrix prob_h_given_v(const RbmLayer& layer, const Matrix& v_rows);
Matrix prob_v_given_h(const RbmLayer& layer, const Matrix& h_rows);

/// Entry i is 1 with probability p[i]; consumes one rng draw per entry
/// in index order.
Vector sample_bernoulli(const Vector& p, Rng& rng);
Matrix sample_bernoulli(const Matrix& p, Rng& rng);

/// One CD-k / PCD-k parameter update on a mini-batch (rows of `batch`
/// are binary visible vectors). For PCD the chains are required and are
/// overwritten with the new fantasy states. Returns the mean squared
/// one-step reconstruction error of the batch.
///
/// Update rule: dW = eta * (P(h|v)' v - P(h~|v~)' v~) / N - lambda * W
///              + alpha * dW_prev, biases analogous without the decay
/// term. Negative statistics use mean (probability) values; the Gibbs
/// chain itself uses sampled binary states.
double cd_step(RbmLayer& layer, const Matrix& batch, const TrainConfig& cfg,
               PcdChains* chains, Rng& rng);

/// Runs cfg.epochs passes of cd_step over `data` in mini-batches of
/// cfg.batch_size (last batch may be short). For PCD the chains are
/// initialised from the first mini-batch. Returns mean reconstruction
/// error per epoch.
std::vector<double> train_rbm(RbmLayer& layer, const Matrix& data,
                              const TrainConfig& cfg, Rng& rng);

}  // namespace ebm
