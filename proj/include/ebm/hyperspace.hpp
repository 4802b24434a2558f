#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ebm/rbm.hpp"

namespace ebm {

/// Per-layer hyperparameter ranges used to build the 4L tuning space.
struct LayerBounds {
  double n_min = 5, n_max = 100;
  double eta_min = 0.1, eta_max = 0.9;
  double phi_min = 0.00001, phi_max = 0.01;
  double lambda_min = 0.1, lambda_max = 0.9;
};

/// Box-constrained search space. For the RBM tuning problem each layer
/// contributes four dimensions in the order (n, eta, phi, lambda); the
/// class itself is just bounds and works for any black-box problem.
class SearchSpace {
 public:
  SearchSpace(Vector lower, Vector upper);

  using LayerBounds = ebm::LayerBounds;

  static SearchSpace for_layers(int layer_count,
                                const LayerBounds& bounds = {});

  int dims() const { return static_cast<int>(lower_.size()); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  /// Componentwise projection onto the bounds; idempotent.
  Vector clamp(Vector x) const;

  bool contains(const Vector& x) const;

 private:
  Vector lower_;
  Vector upper_;
};

struct Candidate {
  Vector x;
  std::optional<double> fitness;
  std::uint64_t eval_seed = 0;
};

/// Hyperparameters of one layer decoded from a 4-dim slice.
struct LayerHyperparams {
  int n = 0;        // hidden units
  double eta = 0;   // learning rate
  double phi = 0;   // momentum
  double lambda = 0;  // weight decay
};

/// Decode a 4L position vector into per-layer records. The hidden-unit
/// dimension is rounded half away from zero and clamped to its integer
/// bounds; continuous dimensions are clamped to theirs.
std::vector<LayerHyperparams> decode(const SearchSpace& space,
                                     const Vector& x);

/// Uniform sample inside the bounds; doubles as the Random Search
/// proposal distribution.
Candidate sample_uniform(const SearchSpace& space, Rng& rng);

}  // namespace ebm
