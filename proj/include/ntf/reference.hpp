#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ntf/kruskal.hpp"
#include "ntf/tensor.hpp"

namespace ntf::ref {

// Serial reference kernels. Each one follows the defining formula with
// plain index enumeration and no blocking, so the parallel kernels can be
// checked (and benchmarked) against them.

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

Eigen::MatrixXd khatri_rao(const std::vector<Eigen::MatrixXd>& ms);

Eigen::MatrixXd unfold(const DenseTensor& t, int mode);

DenseTensor reconstruct(const KruskalModel& m);

/// unfold(t, mode) * khatri_rao(factors from mode N-1 down to 0, skipping mode).
Eigen::MatrixXd mttkrp(const DenseTensor& t, const KruskalModel& m, int mode);

/// 0.5 * ||t - reconstruct(m)||_F^2 by explicit residual.
double objective(const DenseTensor& t, const KruskalModel& m);

}  // namespace ntf::ref
