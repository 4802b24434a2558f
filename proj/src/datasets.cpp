#include "ebm/datasets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <vector>

#include "ebm/errors.hpp"

namespace ebm {

namespace {

std::uint32_t read_be_u32(std::istream& in) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  return (static_cast<std::uint32_t>(buf[0]) << 24) |
         (static_cast<std::uint32_t>(buf[1]) << 16) |
         (static_cast<std::uint32_t>(buf[2]) << 8) |
         static_cast<std::uint32_t>(buf[3]);
}

}  // namespace

BinaryDataset load_idx(const std::string& path, int threshold) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("load_idx: cannot open " + path);

  const std::uint32_t magic = read_be_u32(in);
  if (!in || magic != 0x00000803u) {
    std::ostringstream msg;
    msg << "load_idx: bad magic 0x" << std::hex << magic << " at offset 0 in "
        << path;
    throw DataError(msg.str());
  }
  const std::uint32_t count = read_be_u32(in);
  const std::uint32_t rows = read_be_u32(in);
  const std::uint32_t cols = read_be_u32(in);
  if (!in) throw DataError("load_idx: truncated header in " + path);
  if (count == 0) throw DataError("load_idx: empty dataset in " + path);
  if (rows == 0 || cols == 0)
    throw DataError("load_idx: zero image dimensions in " + path);

  const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
  BinaryDataset ds;
  ds.width = static_cast<int>(cols);
  ds.height = static_cast<int>(rows);
  ds.name = path;
  ds.images = Matrix(count, static_cast<Eigen::Index>(pixels));

  std::vector<unsigned char> buf(pixels);
  for (std::uint32_t i = 0; i < count; ++i) {
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(pixels));
    if (!in) {
      const std::size_t offset = 16 + static_cast<std::size_t>(i) * pixels +
                                 static_cast<std::size_t>(in.gcount());
      throw DataError("load_idx: truncated payload at byte offset " +
                      std::to_string(offset) + " in " + path);
    }
    for (std::size_t p = 0; p < pixels; ++p)
      ds.images(i, static_cast<Eigen::Index>(p)) =
          buf[p] > threshold ? 1.0 : 0.0;
  }
  return ds;
}

BinaryDataset load_semeion(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("load_semeion: cannot open " + path);

  constexpr int kPixels = 256;
  constexpr int kFields = kPixels + 10;  // pixels plus one-hot label
  std::vector<std::array<double, kPixels>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<double> values;
    double v;
    while (fields >> v) values.push_back(v);
    if (values.empty()) continue;  // tolerate blank lines
    if (values.size() != kFields)
      throw DataError("load_semeion: line " + std::to_string(line_no) +
                      " has " + std::to_string(values.size()) +
                      " fields, expected " + std::to_string(kFields));
    std::array<double, kPixels> row{};
    for (int p = 0; p < kPixels; ++p) {
      if (values[p] != 0.0 && values[p] != 1.0)
        throw DataError("load_semeion: non-binary pixel at line " +
                        std::to_string(line_no));
      row[static_cast<std::size_t>(p)] = values[static_cast<std::size_t>(p)];
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw DataError("load_semeion: no data in " + path);

  BinaryDataset ds;
  ds.width = 16;
  ds.height = 16;
  ds.name = path;
  ds.images = Matrix(static_cast<Eigen::Index>(rows.size()), kPixels);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int p = 0; p < kPixels; ++p)
      ds.images(static_cast<Eigen::Index>(i), p) =
          rows[i][static_cast<std::size_t>(p)];
  return ds;
}

BinaryDataset load_csv_binary(const std::string& path, int width, int height) {
  if (width < 1 || height < 1)
    throw ContractError("load_csv_binary: invalid dimensions");
  std::ifstream in(path);
  if (!in) throw DataError("load_csv_binary: cannot open " + path);

  const int pixels = width * height;
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(pixels));
    std::istringstream cells(line);
    std::string cell;
    int col = 0;
    while (std::getline(cells, cell, ',')) {
      ++col;
      if (cell == "0") {
        row.push_back(0.0);
      } else if (cell == "1") {
        row.push_back(1.0);
      } else {
        throw DataError("load_csv_binary: non-binary cell '" + cell +
                        "' at row " + std::to_string(line_no) + ", column " +
                        std::to_string(col));
      }
    }
    if (static_cast<int>(row.size()) != pixels)
      throw DataError("load_csv_binary: row " + std::to_string(line_no) +
                      " has " + std::to_string(row.size()) +
                      " cells, expected " + std::to_string(pixels));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("load_csv_binary: no data in " + path);

  BinaryDataset ds;
  ds.width = width;
  ds.height = height;
  ds.name = path;
  ds.images = Matrix(static_cast<Eigen::Index>(rows.size()), pixels);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int p = 0; p < pixels; ++p)
      ds.images(static_cast<Eigen::Index>(i), p) =
          rows[i][static_cast<std::size_t>(p)];
  return ds;
}

void save_csv_binary(const BinaryDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("save_csv_binary: cannot open " + path);
  for (Eigen::Index i = 0; i < ds.images.rows(); ++i) {
    for (Eigen::Index p = 0; p < ds.images.cols(); ++p) {
      if (p > 0) out << ',';
      out << (ds.images(i, p) != 0.0 ? '1' : '0');
    }
    out << '\n';
  }
  if (!out) throw DataError("save_csv_binary: write failed for " + path);
}

namespace {

std::vector<Eigen::Index> shuffled_indices(Eigen::Index n, Rng& rng) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = idx.size(); i > 1; --i)
    std::swap(idx[i - 1], idx[rng.uniform_index(i)]);
  return idx;
}

BinaryDataset gather(const BinaryDataset& ds,
                     const std::vector<Eigen::Index>& which,
                     std::size_t begin, std::size_t end) {
  BinaryDataset out;
  out.width = ds.width;
  out.height = ds.height;
  out.name = ds.name;
  out.images = Matrix(static_cast<Eigen::Index>(end - begin),
                      ds.images.cols());
  for (std::size_t i = begin; i < end; ++i)
    out.images.row(static_cast<Eigen::Index>(i - begin)) =
        ds.images.row(which[i]);
  return out;
}

}  // namespace

std::pair<BinaryDataset, BinaryDataset> split_train_test(
    const BinaryDataset& ds, double train_fraction, Rng& rng) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ContractError("split_train_test: fraction must be in (0, 1)");
  const Eigen::Index n = ds.size();
  const auto train_n = static_cast<Eigen::Index>(
      std::ceil(train_fraction * static_cast<double>(n)));
  if (train_n < 1 || train_n >= n)
    throw ContractError("split_train_test: fraction yields an empty side");

  const auto idx = shuffled_indices(n, rng);
  return {gather(ds, idx, 0, static_cast<std::size_t>(train_n)),
          gather(ds, idx, static_cast<std::size_t>(train_n),
                 static_cast<std::size_t>(n))};
}

BinaryDataset subsample(const BinaryDataset& ds, Eigen::Index count,
                        Rng& rng) {
  if (count < 1) throw ContractError("subsample: count must be >= 1");
  if (count > ds.size())
    throw ContractError("subsample: count exceeds dataset size");
  const auto idx = shuffled_indices(ds.size(), rng);
  return gather(ds, idx, 0, static_cast<std::size_t>(count));
}

}  // namespace ebm
