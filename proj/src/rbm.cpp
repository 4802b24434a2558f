#include "ebm/rbm.hpp"

#include <string>
#include <vector>

#include "ebm/errors.hpp"

namespace ebm {

namespace {

Matrix sigmoid_rows(Matrix z) {
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = sigmoid(z(i, j));
  return z;
}

void check_dim(Eigen::Index got, int want, const char* what) {
  if (got != want) {
    throw ContractError(std::string(what) + ": expected length " +
                        std::to_string(want) + ", got " +
                        std::to_string(got));
  }
}

}  // namespace

RbmLayer init_layer(int m, int n, Rng& rng, double init_sigma) {
  if (m < 1 || n < 1) throw ContractError("init_layer: m and n must be >= 1");
  RbmLayer layer;
  layer.m = m;
  layer.n = n;
  layer.W = Matrix(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) layer.W(i, j) = rng.normal(0.0, init_sigma);
  layer.a = Vector::Zero(m);
  layer.b = Vector::Zero(n);
  layer.dW_prev = Matrix::Zero(m, n);
  layer.da_prev = Vector::Zero(m);
  layer.db_prev = Vector::Zero(n);
  return layer;
}

double energy(const RbmLayer& layer, const Vector& v, const Vector& h) {
  check_dim(v.size(), layer.m, "energy: v");
  check_dim(h.size(), layer.n, "energy: h");
  return -layer.a.dot(v) - layer.b.dot(h) - v.dot(layer.W * h);
}

Vector prob_h_given_v(const RbmLayer& layer, const Vector& v) {
  check_dim(v.size(), layer.m, "prob_h_given_v: v");
  Vector z = layer.W.transpose() * v + layer.b;
  for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = sigmoid(z(j));
  return z;
}

Vector prob_v_given_h(const RbmLayer& layer, const Vector& h) {
  check_dim(h.size(), layer.n, "prob_v_given_h: h");
  Vector z = layer.W * h + layer.a;
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = sigmoid(z(i));
  return z;
}

Matrix prob_h_given_v(const RbmLayer& layer, const Matrix& v_rows) {
  check_dim(v_rows.cols(), layer.m, "prob_h_given_v: v rows");
  Matrix z = v_rows * layer.W;
  z.rowwise() += layer.b.transpose();
  return sigmoid_rows(std::move(z));
}

Matrix prob_v_given_h(const RbmLayer& layer, const Matrix& h_rows) {
  check_dim(h_rows.cols(), layer.n, "prob_v_given_h: h rows");
  Matrix z = h_rows * layer.W.transpose();
  z.rowwise() += layer.a.transpose();
  return sigmoid_rows(std::move(z));
}

Vector sample_bernoulli(const Vector& p, Rng& rng) {
  Vector out(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i)
    out(i) = rng.uniform() < p(i) ? 1.0 : 0.0;
  return out;
}

Matrix sample_bernoulli(const Matrix& p, Rng& rng) {
  Matrix out(p.rows(), p.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < p.cols(); ++j)
      out(i, j) = rng.uniform() < p(i, j) ? 1.0 : 0.0;
  return out;
}

double cd_step(RbmLayer& layer, const Matrix& batch, const TrainConfig& cfg,
               PcdChains* chains, Rng& rng) {
  check_dim(batch.cols(), layer.m, "cd_step: batch rows");
  if (cfg.learner == Learner::PCD && chains == nullptr)
    throw ContractError("cd_step: PCD selected but no persistent chains given");

  const double batch_n = static_cast<double>(batch.rows());

  // Positive phase: data-driven hidden probabilities.
  const Matrix ph_pos = prob_h_given_v(layer, batch);

  // Negative phase: k Gibbs steps, starting from the data (CD) or from
  // the persistent fantasy particles (PCD). The chain runs on sampled
  // binary states; the final statistics use probabilities.
  Matrix v_state =
      cfg.learner == Learner::PCD ? chains->fantasy_v : batch;
  Matrix pv_neg;
  for (int k = 0; k < cfg.gibbs_steps; ++k) {
    const Matrix h_sample =
        sample_bernoulli(prob_h_given_v(layer, v_state), rng);
    pv_neg = prob_v_given_h(layer, h_sample);
    v_state = sample_bernoulli(pv_neg, rng);
  }
  const Matrix ph_neg = prob_h_given_v(layer, pv_neg);

  if (cfg.learner == Learner::PCD) chains->fantasy_v = v_state;

  const Matrix dW = cfg.eta *
                        (batch.transpose() * ph_pos -
                         pv_neg.transpose() * ph_neg) /
                        batch_n -
                    cfg.lambda * layer.W + cfg.alpha * layer.dW_prev;
  const Vector da =
      cfg.eta * (batch.colwise().mean() - pv_neg.colwise().mean()).transpose() +
      cfg.alpha * layer.da_prev;
  const Vector db =
      cfg.eta * (ph_pos.colwise().mean() - ph_neg.colwise().mean()).transpose() +
      cfg.alpha * layer.db_prev;

  layer.W += dW;
  layer.a += da;
  layer.b += db;
  layer.dW_prev = dW;
  layer.da_prev = da;
  layer.db_prev = db;

  // One-step mean reconstruction from the data-driven hidden means.
  const Matrix recon = prob_v_given_h(layer, ph_pos);
  return (batch - recon).squaredNorm() / (batch_n * layer.m);
}

std::vector<double> train_rbm(RbmLayer& layer, const Matrix& data,
                              const TrainConfig& cfg, Rng& rng) {
  if (cfg.eta <= 0.0 || cfg.lambda < 0.0 || cfg.alpha < 0.0 ||
      cfg.epochs < 0 || cfg.batch_size < 1 || cfg.gibbs_steps < 1)
    throw ContractError("train_rbm: invalid TrainConfig");
  check_dim(data.cols(), layer.m, "train_rbm: data rows");

  PcdChains chains;  // lives for the whole run under PCD
  PcdChains* chains_ptr = nullptr;
  if (cfg.learner == Learner::PCD) {
    const int first = std::min<int>(cfg.batch_size, data.rows());
    chains.fantasy_v = data.topRows(first);
    chains_ptr = &chains;
  }

  std::vector<double> epoch_errors;
  epoch_errors.reserve(cfg.epochs);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double err_sum = 0.0;
    int batches = 0;
    for (Eigen::Index start = 0; start < data.rows();
         start += cfg.batch_size) {
      const Eigen::Index count =
          std::min<Eigen::Index>(cfg.batch_size, data.rows() - start);
      Matrix batch = data.middleRows(start, count);
      if (cfg.learner == Learner::PCD &&
          chains.fantasy_v.rows() != batch.rows()) {
        // Short final batch: run the matching prefix of the chains.
        PcdChains short_chains{chains.fantasy_v.topRows(batch.rows())};
        err_sum += cd_step(layer, batch, cfg, &short_chains, rng);
        chains.fantasy_v.topRows(batch.rows()) = short_chains.fantasy_v;
      } else {
        err_sum += cd_step(layer, batch, cfg, chains_ptr, rng);
      }
      ++batches;
    }
    epoch_errors.push_back(batches > 0 ? err_sum / batches : 0.0);
  }
  return epoch_errors;
}

}  // namespace ebm
