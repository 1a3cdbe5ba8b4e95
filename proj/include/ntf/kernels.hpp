#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "ntf/kruskal.hpp"
#include "ntf/tensor.hpp"

namespace ntf {

/// Kronecker product, block layout: block (p,q) equals A(p,q) * B.
Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Column-wise Kronecker product of an ordered list of matrices sharing a
/// column count. Row index runs over the multi-index with the LAST listed
/// matrix's row fastest.
Eigen::MatrixXd khatri_rao(const std::vector<Eigen::MatrixXd>& ms);

/// Factors of `m` excluding `mode`, listed from mode N-1 down to 0.
/// khatri_rao of this list is the coefficient matrix of the mode-`mode`
/// unfolding identity (smaller modes vary fastest along its rows).
std::vector<Eigen::MatrixXd> factors_excluding(const KruskalModel& m, int mode);

/// Mode-i unfolding, shape I_i x prod_{l != i} I_l. Column index runs over
/// the remaining modes with the smallest mode fastest, so that
/// unfold(reconstruct(m), i) == m.factor(i) * khatri_rao(factors_excluding(m, i))^T.
Eigen::MatrixXd unfold(const DenseTensor& t, int mode);

/// Inverse of unfold for the given shape.
DenseTensor fold(const Eigen::MatrixXd& m, int mode, const std::vector<int>& shape);

/// Matricized tensor times Khatri-Rao product: unfold(t, mode) * khatri_rao(others).
/// Contracted directly against the tensor; never materializes the unfolding.
Eigen::MatrixXd mttkrp(const DenseTensor& t, const KruskalModel& m, int mode);

inline Eigen::MatrixXd gram(const Eigen::MatrixXd& a) { return a.transpose() * a; }

/// Hadamard product of all grams except `skip`; equals B^T B for the
/// Khatri-Rao coefficient matrix B of that mode.
Eigen::MatrixXd hadamard_of_grams(const std::vector<Eigen::MatrixXd>& grams, int skip);

/// Dense tensor from a Kruskal model: entry j = sum_p prod_i A^(i)(j_i, p).
DenseTensor reconstruct(const KruskalModel& m);

/// Reorders the modes: out mode i is input mode perm[i]. Used to rotate a
/// tensor so the cheapest mode sits last before a run.
DenseTensor permute_modes(const DenseTensor& t, const std::vector<int>& perm);

/// Largest eigenvalue of a symmetric PSD matrix by power iteration
/// (tol 1e-10, at most 1000 sweeps), falling back to a symmetric
/// eigensolver when the iteration stalls.
double spectral_norm(const Eigen::MatrixXd& m);

/// Per-mode Gram matrices plus the cached tensor norm; owned by one solver
/// run and updated block by block.
struct GramCache {
  std::vector<Eigen::MatrixXd> grams;
  double tensor_norm_sq = 0.0;
  std::optional<std::pair<int, Eigen::MatrixXd>> last_mttkrp;

  static GramCache create(const DenseTensor& t, const KruskalModel& m);
  static GramCache create(double norm_sq, const KruskalModel& m);

  void refresh(int mode, const Eigen::MatrixXd& factor);
};

/// 0.5*||T||^2 - <A, C> + 0.5*<A^T A, G> with C the mode MTTKRP and G the
/// Hadamard Gram of the other blocks; equals 0.5*||T - X||_F^2 at the model
/// the parts were built from.
double cheap_objective(double tensor_norm_sq, const Eigen::MatrixXd& a,
                       const Eigen::MatrixXd& g, const Eigen::MatrixXd& c);

/// Objective through the pivot-mode formula (recomputes the pivot MTTKRP).
double objective(const DenseTensor& t, const KruskalModel& m, const GramCache& cache,
                 int pivot_mode = -1);

/// Gradient of the objective with respect to one factor: A*G - MTTKRP.
Eigen::MatrixXd block_gradient(const DenseTensor& t, const KruskalModel& m, int mode,
                               const GramCache& cache);

/// Lipschitz constant of the block gradient: spectral norm of the
/// Hadamard Gram of the other blocks.
double block_lipschitz(const GramCache& cache, int mode);

}  // namespace ntf
