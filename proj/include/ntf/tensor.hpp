#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ntf {

/// Dense N-way tensor of doubles with an explicit shape.
///
/// Entries are linearized with the last index running fastest:
///   flat(j_1,...,j_N) = ((j_1 * I_2 + j_2) * I_3 + j_3) * ... + j_N
/// All file formats and kernels share this convention.
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(std::vector<int> shape);
  DenseTensor(std::vector<int> shape, std::vector<double> data);

  int order() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  int dim(int mode) const { return shape_[static_cast<std::size_t>(mode)]; }
  std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
  double operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

  std::int64_t flat_index(const std::vector<int>& index) const;

  /// Squared Frobenius norm, accumulated in flat order.
  double norm_sq() const;

  bool same_shape(const DenseTensor& other) const { return shape_ == other.shape_; }

  // File I/O. The binary container is a little-endian "NTFT" block
  // (magic, version, order, shape, payload); the text variant is one
  // header line "N I_1 ... I_N" followed by whitespace-separated values.
  void save(const std::string& path) const;
  void save_text(const std::string& path) const;
  static DenseTensor load(const std::string& path);
  static DenseTensor load_text(const std::string& path);

 private:
  std::vector<int> shape_;
  std::vector<double> data_;
};

/// Product of shape entries; validates positivity.
std::int64_t shape_product(const std::vector<int>& shape);

/// Row-major strides for the linearization above (last entry is 1).
std::vector<std::int64_t> row_major_strides(const std::vector<int>& shape);

}  // namespace ntf
