#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ntf/kruskal.hpp"
#include "ntf/trace.hpp"

namespace ntf {

/// Each nonzero column scaled to unit Euclidean norm; zero columns pass
/// through unchanged.
Eigen::MatrixXd normalize_columns(const Eigen::MatrixXd& a);

struct PermutationAssignment {
  std::vector<int> mapping;  // row i is assigned column mapping[i]
  double cost = 0.0;
};

/// Minimum-cost assignment on a square cost matrix (shortest augmenting
/// path, O(n^3)).
PermutationAssignment hungarian(const Eigen::MatrixXd& cost);

/// Factor fitting error: one permutation is chosen over all modes jointly
/// (cost = summed squared distances between normalized columns), then the
/// normalized relative Frobenius distances are averaged over the modes.
double factor_error(const KruskalModel& est, const KruskalModel& truth);

/// Piecewise-linear interpolation of (times, values) onto grid points.
/// Grid points must lie within [times.front(), times.back()].
std::vector<double> interpolate_curve(const std::vector<double>& times,
                                      const std::vector<double>& values,
                                      const std::vector<double>& grid);
std::vector<double> interpolate_curve(const RunTrace& trace, const std::vector<double>& grid);

/// Pointwise median of equal-length curves (mean of the two central values
/// for an even count).
std::vector<double> median_curve(const std::vector<std::vector<double>>& curves);

}  // namespace ntf
