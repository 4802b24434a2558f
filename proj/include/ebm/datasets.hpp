#pragma once

#include <string>

#include "ebm/rbm.hpp"

namespace ebm {

/// Binary image collection; rows of `images` are flattened width*height
/// pixel vectors with entries in {0, 1}.
struct BinaryDataset {
  Matrix images;
  int width = 0;
  int height = 0;
  std::string name;

  Eigen::Index size() const { return images.rows(); }
  int pixels() const { return width * height; }
};

/// IDX image file (big-endian magic 0x00000803, then N, rows, cols and
/// N*rows*cols unsigned bytes). Pixels above `threshold` become 1.
BinaryDataset load_idx(const std::string& path, int threshold = 127);

/// Semeion text format: per line 256 space-separated 0/1 floats followed
/// by a 10-field one-hot label, which is discarded.
BinaryDataset load_semeion(const std::string& path);

/// Comma-separated rows of width*height cells, each exactly 0 or 1.
BinaryDataset load_csv_binary(const std::string& path, int width, int height);

/// Write the CSV interchange format produced by load_csv_binary.
void save_csv_binary(const BinaryDataset& ds, const std::string& path);

/// Uniform shuffle by seed; first ceil(fraction * N) images go to train,
/// the rest to test. Both sides must end up nonempty.
std::pair<BinaryDataset, BinaryDataset> split_train_test(
    const BinaryDataset& ds, double train_fraction, Rng& rng);

/// Uniform subsample without replacement; 1 <= count <= N.
BinaryDataset subsample(const BinaryDataset& ds, Eigen::Index count, Rng& rng);

}  // namespace ebm
