#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace ntf {

/// Rank-r tensor in factored form: one I_i x r matrix per mode.
struct KruskalModel {
  std::vector<Eigen::MatrixXd> factors;

  KruskalModel() = default;
  explicit KruskalModel(std::vector<Eigen::MatrixXd> f);

  int order() const { return static_cast<int>(factors.size()); }
  int rank() const { return factors.empty() ? 0 : static_cast<int>(factors[0].cols()); }
  std::vector<int> shape() const;

  const Eigen::MatrixXd& factor(int mode) const { return factors[static_cast<std::size_t>(mode)]; }
  Eigen::MatrixXd& factor(int mode) { return factors[static_cast<std::size_t>(mode)]; }

  bool matches_shape(const std::vector<int>& tensor_shape) const;
  bool is_nonnegative() const;

  /// Throws if factor column counts disagree.
  void validate() const;

  // Text sidecar: "N r" header, then per mode "I_i" followed by the
  // row-major entries of that factor.
  void save_text(const std::string& path) const;
  static KruskalModel load_text(const std::string& path);
};

}  // namespace ntf
