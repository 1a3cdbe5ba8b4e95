#pragma once

#include <Eigen/Dense>
#include <string>

namespace ntf {

/// Block subproblem in normal-equation form:
///   min_{W >= 0}  0.5 * <W^T W, G> - <W, C>
/// with G = B^T B and C the MTTKRP result, so the tensor itself never
/// enters the inner loop.
struct NnlsProblem {
  Eigen::MatrixXd gram;    // r x r, symmetric PSD
  Eigen::MatrixXd target;  // I x r
  Eigen::MatrixXd init;    // I x r, entrywise >= 0
};

/// Inner-solver budget: stop after max_iters sweeps or when the step norm
/// drops below rel_change_tol times the first step norm.
struct InnerStop {
  int max_iters = 50;
  double rel_change_tol = 1e-2;
};

/// Quadratic part of the block objective (differs from F by a constant).
double nnls_objective(const NnlsProblem& p, const Eigen::MatrixXd& w);

/// One cyclic pass of column-wise closed-form updates. Columns whose Gram
/// diagonal is (relatively) zero are skipped.
Eigen::MatrixXd hals_pass(const NnlsProblem& p, Eigen::MatrixXd w);

/// Repeated HALS passes under the inner budget.
Eigen::MatrixXd ahals_solve(const NnlsProblem& p, const InnerStop& stop);

/// Accelerated projected gradient with step 1/||G|| and the classic
/// t_k = (1 + sqrt(1 + 4 t_{k-1}^2))/2 momentum; the best feasible iterate
/// seen is returned so the outer sweep never moves uphill.
Eigen::MatrixXd nesterov_solve(const NnlsProblem& p, const InnerStop& stop);

/// Plain projected gradient with step 1/||G||; monotone per step.
Eigen::MatrixXd pgd_solve(const NnlsProblem& p, const InnerStop& stop);

/// ADMM on the split (least-squares block, nonnegative block) with
/// rho = trace(G)/r and a single Cholesky factorization per call.
/// Returns the best feasible iterate seen.
Eigen::MatrixXd admm_solve(const NnlsProblem& p, const InnerStop& stop);

/// Exact NNLS optimum, one Lawson-Hanson active-set solve per row of W.
/// Requires a positive definite Gram; throws otherwise, and throws if the
/// pass budget (3 * r additions per row) runs out.
Eigen::MatrixXd active_set_solve(const NnlsProblem& p);

enum class NnlsSolver { ahals, admm, nesterov, pgd, active_set };

Eigen::MatrixXd solve_nnls(NnlsSolver solver, const NnlsProblem& p, const InnerStop& stop);

NnlsSolver nnls_solver_from_name(const std::string& name);
std::string nnls_solver_name(NnlsSolver solver);

}  // namespace ntf
