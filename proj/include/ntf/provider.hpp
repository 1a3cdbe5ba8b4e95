#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ntf/kruskal.hpp"
#include "ntf/tensor.hpp"

namespace ntf {

/// Data source behind the solver drivers: the constant objective term and
/// the per-mode MTTKRP. Dense tensors and compressed formats implement the
/// same surface, so every driver runs unchanged on either.
class ObjectiveProvider {
 public:
  virtual ~ObjectiveProvider() = default;
  virtual std::vector<int> shape() const = 0;
  virtual double norm_sq() const = 0;
  virtual Eigen::MatrixXd mttkrp(const KruskalModel& m, int mode) const = 0;
};

/// View over a dense tensor; does not own it.
class DenseProvider final : public ObjectiveProvider {
 public:
  explicit DenseProvider(const DenseTensor& t);

  std::vector<int> shape() const override { return tensor_->shape(); }
  double norm_sq() const override { return norm_sq_; }
  Eigen::MatrixXd mttkrp(const KruskalModel& m, int mode) const override;

 private:
  const DenseTensor* tensor_;
  double norm_sq_;
};

}  // namespace ntf
