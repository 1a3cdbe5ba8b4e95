#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "ntf/kruskal.hpp"
#include "ntf/tensor.hpp"

namespace ntf::testing {

// Deterministic generators for randomized test instances. These use the
// C++ standard engine directly (the distributions are hand-rolled so the
// draws are identical everywhere).

inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, std::mt19937_64& gen,
                                     double lo = 0.0, double hi = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = lo + (hi - lo) * uniform01(gen);
  return m;
}

inline KruskalModel random_model(const std::vector<int>& shape, int r, std::mt19937_64& gen,
                                 double lo = 0.0, double hi = 1.0) {
  KruskalModel m;
  for (int d : shape) m.factors.push_back(random_matrix(d, r, gen, lo, hi));
  return m;
}

inline DenseTensor random_tensor(const std::vector<int>& shape, std::mt19937_64& gen,
                                 double lo = 0.0, double hi = 1.0) {
  DenseTensor t(shape);
  for (std::int64_t i = 0; i < t.size(); ++i) t[i] = lo + (hi - lo) * uniform01(gen);
  return t;
}

inline double rel_err(double got, double want) {
  const double scale = std::max({1e-300, std::abs(want), std::abs(got)});
  return std::abs(got - want) / scale;
}

inline double rel_err(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  const double scale = std::max(1e-300, want.norm());
  return (got - want).norm() / scale;
}

}  // namespace ntf::testing
