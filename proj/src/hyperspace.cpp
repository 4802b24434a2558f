#include "ebm/hyperspace.hpp"

#include <cmath>

#include "ebm/errors.hpp"

namespace ebm {

SearchSpace::SearchSpace(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size() || lower_.size() == 0)
    throw ContractError("SearchSpace: bound vectors must match and be nonempty");
  for (Eigen::Index d = 0; d < lower_.size(); ++d)
    if (!(lower_(d) < upper_(d)))
      throw ContractError("SearchSpace: lower bound must be below upper at dim " +
                          std::to_string(d));
}

SearchSpace SearchSpace::for_layers(int layer_count,
                                    const LayerBounds& bounds) {
  if (layer_count < 1)
    throw ContractError("SearchSpace::for_layers: need at least one layer");
  Vector lower(4 * layer_count);
  Vector upper(4 * layer_count);
  for (int j = 0; j < layer_count; ++j) {
    lower(4 * j + 0) = bounds.n_min;
    upper(4 * j + 0) = bounds.n_max;
    lower(4 * j + 1) = bounds.eta_min;
    upper(4 * j + 1) = bounds.eta_max;
    lower(4 * j + 2) = bounds.phi_min;
    upper(4 * j + 2) = bounds.phi_max;
    lower(4 * j + 3) = bounds.lambda_min;
    upper(4 * j + 3) = bounds.lambda_max;
  }
  return SearchSpace(std::move(lower), std::move(upper));
}

Vector SearchSpace::clamp(Vector x) const {
  if (x.size() != lower_.size())
    throw ContractError("SearchSpace::clamp: dimension mismatch");
  for (Eigen::Index d = 0; d < x.size(); ++d)
    x(d) = std::min(std::max(x(d), lower_(d)), upper_(d));
  return x;
}

bool SearchSpace::contains(const Vector& x) const {
  if (x.size() != lower_.size()) return false;
  for (Eigen::Index d = 0; d < x.size(); ++d)
    if (x(d) < lower_(d) || x(d) > upper_(d)) return false;
  return true;
}

std::vector<LayerHyperparams> decode(const SearchSpace& space,
                                     const Vector& x) {
  if (x.size() != space.dims() || space.dims() % 4 != 0)
    throw ContractError("decode: expected a 4L position vector");
  const Vector clamped = space.clamp(x);
  const int layers = space.dims() / 4;
  std::vector<LayerHyperparams> out(static_cast<std::size_t>(layers));
  for (int j = 0; j < layers; ++j) {
    const int n_lo =
        static_cast<int>(std::llround(space.lower()(4 * j)));
    const int n_hi =
        static_cast<int>(std::llround(space.upper()(4 * j)));
    // round half away from zero
    const int n = static_cast<int>(std::llround(clamped(4 * j)));
    out[j].n = std::min(std::max(n, n_lo), n_hi);
    out[j].eta = clamped(4 * j + 1);
    out[j].phi = clamped(4 * j + 2);
    out[j].lambda = clamped(4 * j + 3);
  }
  return out;
}

Candidate sample_uniform(const SearchSpace& space, Rng& rng) {
  Candidate c;
  c.x = Vector(space.dims());
  for (int d = 0; d < space.dims(); ++d)
    c.x(d) = rng.uniform(space.lower()(d), space.upper()(d));
  return c;
}

}  // namespace ebm
