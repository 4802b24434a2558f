#include "ebm/deep.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "ebm/errors.hpp"

namespace ebm {

namespace {

void check_stack(const StackedModel& model) {
  if (model.layers.empty())
    throw ContractError("StackedModel: at least one layer required");
  for (std::size_t i = 0; i + 1 < model.layers.size(); ++i) {
    if (model.layers[i].n != model.layers[i + 1].m)
      throw ContractError("StackedModel: layer " + std::to_string(i) +
                          " hidden size does not match layer " +
                          std::to_string(i + 1) + " visible size");
  }
}

}  // namespace

std::vector<std::vector<double>> train_greedy(
    StackedModel& model, const Matrix& data,
    const std::vector<TrainConfig>& per_layer_cfg, Rng& rng,
    const EpochObserver& observer) {
  check_stack(model);
  if (per_layer_cfg.size() != model.layers.size())
    throw ContractError("train_greedy: one TrainConfig per layer required");
  if (data.cols() != model.layers.front().m)
    throw ContractError("train_greedy: data width does not match layer 0");

  std::vector<std::vector<double>> traces;
  traces.reserve(model.layers.size());
  Matrix input = data;
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    RbmLayer& layer = model.layers[i];
    const TrainConfig& cfg = per_layer_cfg[i];
    if (observer) {
      // Re-run epoch by epoch so the observer sees intermediate state.
      std::vector<double> trace;
      TrainConfig one = cfg;
      one.epochs = 1;
      PcdChains chains;
      for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        // train_rbm owns chain setup per call; for PCD continuity we
        // drive cd_step directly here.
        double err_sum = 0.0;
        int batches = 0;
        if (cfg.learner == Learner::PCD && epoch == 0) {
          const int first = std::min<int>(cfg.batch_size, input.rows());
          chains.fantasy_v = input.topRows(first);
        }
        for (Eigen::Index start = 0; start < input.rows();
             start += cfg.batch_size) {
          const Eigen::Index count =
              std::min<Eigen::Index>(cfg.batch_size, input.rows() - start);
          Matrix batch = input.middleRows(start, count);
          if (cfg.learner == Learner::PCD &&
              chains.fantasy_v.rows() != batch.rows()) {
            PcdChains short_chains{chains.fantasy_v.topRows(batch.rows())};
            err_sum += cd_step(layer, batch, cfg, &short_chains, rng);
            chains.fantasy_v.topRows(batch.rows()) = short_chains.fantasy_v;
          } else {
            err_sum += cd_step(
                layer, batch, cfg,
                cfg.learner == Learner::PCD ? &chains : nullptr, rng);
          }
          ++batches;
        }
        const double err = batches > 0 ? err_sum / batches : 0.0;
        trace.push_back(err);
        observer(static_cast<int>(i), epoch, layer, err);
      }
      traces.push_back(std::move(trace));
    } else {
      traces.push_back(train_rbm(layer, input, cfg, rng));
    }
    if (i + 1 < model.layers.size())
      input = prob_h_given_v(layer, input);  // mean activations, not samples
  }
  return traces;
}

Matrix dbn_reconstruct(const StackedModel& model, const Matrix& v) {
  check_stack(model);
  Matrix up = v;
  for (const RbmLayer& layer : model.layers) up = prob_h_given_v(layer, up);
  Matrix down = up;
  for (auto it = model.layers.rbegin(); it != model.layers.rend(); ++it)
    down = prob_v_given_h(*it, down);
  return down;
}

Matrix dbm_reconstruct(const StackedModel& model, const Matrix& v,
                       int sweeps) {
  check_stack(model);
  const std::size_t depth = model.layers.size();
  // One layer has no top-down term, and zero sweeps means no feedback
  // inference at all: both are exactly the up-then-down pass.
  if (depth == 1 || sweeps <= 0) return dbn_reconstruct(model, v);

  // Bottom-up initialisation of the hidden means.
  std::vector<Matrix> h(depth);
  {
    Matrix up = v;
    for (std::size_t i = 0; i < depth; ++i) {
      up = prob_h_given_v(model.layers[i], up);
      h[i] = up;
    }
  }

  // Mean sweeps with visible units clamped to the data. Interior layer i
  // combines the bottom-up input through W^i with the top-down input
  // through W^{i+1}; the top layer has no top-down term.
  for (int s = 0; s < sweeps; ++s) {
    for (std::size_t i = 0; i < depth; ++i) {
      const RbmLayer& layer = model.layers[i];
      const Matrix& below = i == 0 ? v : h[i - 1];
      Matrix z = below * layer.W;
      z.rowwise() += layer.b.transpose();
      if (i + 1 < depth)
        z += h[i + 1] * model.layers[i + 1].W.transpose();
      for (Eigen::Index r = 0; r < z.rows(); ++r)
        for (Eigen::Index c = 0; c < z.cols(); ++c) z(r, c) = sigmoid(z(r, c));
      h[i] = std::move(z);
    }
  }

  return prob_v_given_h(model.layers.front(), h[0]);
}

Matrix reconstruct(const StackedModel& model, const Matrix& v, int sweeps) {
  return model.kind == ModelKind::DBM ? dbm_reconstruct(model, v, sweeps)
                                      : dbn_reconstruct(model, v);
}

double reconstruction_mse(const StackedModel& model, const Matrix& data,
                          int sweeps) {
  if (data.rows() == 0) throw ContractError("reconstruction_mse: empty data");
  const Matrix recon = reconstruct(model, data, sweeps);
  return (data - recon).squaredNorm() /
         static_cast<double>(data.rows() * data.cols());
}

namespace {

constexpr char kMagic[4] = {'E', 'B', 'M', 'M'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char buf[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t read_u32(std::istream& in) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  return static_cast<std::uint32_t>(buf[0]) |
         (static_cast<std::uint32_t>(buf[1]) << 8) |
         (static_cast<std::uint32_t>(buf[2]) << 16) |
         (static_cast<std::uint32_t>(buf[3]) << 24);
}

void write_doubles(std::ostream& out, const double* p, std::size_t count) {
  out.write(reinterpret_cast<const char*>(p),
            static_cast<std::streamsize>(count * sizeof(double)));
}

void read_doubles(std::istream& in, double* p, std::size_t count) {
  in.read(reinterpret_cast<char*>(p),
          static_cast<std::streamsize>(count * sizeof(double)));
}

}  // namespace

void save_model(const StackedModel& model, const std::string& path) {
  check_stack(model);
  if (model.layers.size() > 255)
    throw ContractError("save_model: too many layers");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("save_model: cannot open " + path);

  out.write(kMagic, 4);
  write_u32(out, kVersion);
  const unsigned char kind = model.kind == ModelKind::DBM ? 1 : 0;
  const unsigned char depth = static_cast<unsigned char>(model.layers.size());
  out.put(static_cast<char>(kind));
  out.put(static_cast<char>(depth));
  const char padding[6] = {};
  out.write(padding, 6);

  for (const RbmLayer& layer : model.layers) {
    write_u32(out, static_cast<std::uint32_t>(layer.m));
    write_u32(out, static_cast<std::uint32_t>(layer.n));
    // Row-major weight dump regardless of Eigen's internal layout.
    for (int i = 0; i < layer.m; ++i)
      for (int j = 0; j < layer.n; ++j) {
        const double w = layer.W(i, j);
        write_doubles(out, &w, 1);
      }
    write_doubles(out, layer.a.data(), static_cast<std::size_t>(layer.m));
    write_doubles(out, layer.b.data(), static_cast<std::size_t>(layer.n));
  }
  if (!out) throw DataError("save_model: write failed for " + path);
}

StackedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("load_model: cannot open " + path);

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("load_model: bad magic in " + path);
  const std::uint32_t version = read_u32(in);
  if (version != kVersion)
    throw DataError("load_model: unsupported version " +
                    std::to_string(version));
  const int kind = in.get();
  const int depth = in.get();
  char padding[6];
  in.read(padding, 6);
  if (!in || depth < 1) throw DataError("load_model: truncated header");

  StackedModel model;
  model.kind = kind == 1 ? ModelKind::DBM : ModelKind::DBN;
  model.layers.reserve(static_cast<std::size_t>(depth));
  for (int l = 0; l < depth; ++l) {
    RbmLayer layer;
    layer.m = static_cast<int>(read_u32(in));
    layer.n = static_cast<int>(read_u32(in));
    if (!in || layer.m < 1 || layer.n < 1)
      throw DataError("load_model: bad layer dimensions");
    layer.W = Matrix(layer.m, layer.n);
    for (int i = 0; i < layer.m; ++i)
      for (int j = 0; j < layer.n; ++j) read_doubles(in, &layer.W(i, j), 1);
    layer.a = Vector(layer.m);
    layer.b = Vector(layer.n);
    read_doubles(in, layer.a.data(), static_cast<std::size_t>(layer.m));
    read_doubles(in, layer.b.data(), static_cast<std::size_t>(layer.n));
    if (!in) throw DataError("load_model: truncated layer payload");
    layer.dW_prev = Matrix::Zero(layer.m, layer.n);
    layer.da_prev = Vector::Zero(layer.m);
    layer.db_prev = Vector::Zero(layer.n);
    model.layers.push_back(std::move(layer));
  }
  check_stack(model);
  return model;
}

}  // namespace ebm
