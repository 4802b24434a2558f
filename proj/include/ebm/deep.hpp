#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ebm/rbm.hpp"

namespace ebm {

enum class ModelKind { DBN, DBM };

/// Stack of RBM layers; layer i's hidden side feeds layer i+1's visible
/// side. The kind tag only changes reconstruction inference: a DBM adds
/// the top-down feedback term for interior hidden layers.
struct StackedModel {
  ModelKind kind = ModelKind::DBN;
  std::vector<RbmLayer> layers;
};

/// Called after each training epoch of each layer; `error` is the mean
/// reconstruction error of that epoch.
using EpochObserver = std::function<void(int layer, int epoch,
                                         const RbmLayer& state, double error)>;

/// Greedy layer-wise training: layer 0 on the raw data, each layer above
/// on the mean hidden activations of the (already trained) layer below.
/// Returns per-layer per-epoch reconstruction error traces.
std::vector<std::vector<double>> train_greedy(
    StackedModel& model, const Matrix& data,
    const std::vector<TrainConfig>& per_layer_cfg, Rng& rng,
    const EpochObserver& observer = nullptr);

/// Deterministic mean-field pass: propagate mean activations up through
/// all layers, then back down. Rows of `v` are inputs.
Matrix dbn_reconstruct(const StackedModel& model, const Matrix& v);

/// DBM reconstruction: bottom-up initialisation of the hidden means,
/// then `sweeps` deterministic sweeps where interior layers combine the
/// bottom-up and top-down inputs, finally a downward pass to visible
/// means. The visible units stay clamped to the data during sweeps.
Matrix dbm_reconstruct(const StackedModel& model, const Matrix& v,
                       int sweeps = 3);

/// Kind-appropriate reconstruction.
Matrix reconstruct(const StackedModel& model, const Matrix& v, int sweeps = 3);

/// Mean over images and pixels of (v - v_hat)^2.
double reconstruction_mse(const StackedModel& model, const Matrix& data,
                          int sweeps = 3);

/// Flat binary container: 16-byte header (magic "EBMM", version u32 LE,
/// kind u8, layer count u8, 6 bytes padding), then per layer m and n as
/// u32 LE followed by row-major 64-bit floats for W, a, b.
void save_model(const StackedModel& model, const std::string& path);
StackedModel load_model(const std::string& path);

}  // namespace ebm
