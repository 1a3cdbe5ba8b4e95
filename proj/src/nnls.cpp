#include "ntf/nnls.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ntf/kernels.hpp"

namespace ntf {

double nnls_objective(const NnlsProblem& p, const Eigen::MatrixXd& w) {
  return 0.5 * (gram(w).array() * p.gram.array()).sum() - (w.array() * p.target.array()).sum();
}

Eigen::MatrixXd hals_pass(const NnlsProblem& p, Eigen::MatrixXd w) {
  const Eigen::Index r = p.gram.rows();
  const double diag_floor = 1e-12 * p.gram.diagonal().maxCoeff();
  for (Eigen::Index j = 0; j < r; ++j) {
    const double gjj = p.gram(j, j);
    if (gjj <= diag_floor) continue;
    // C_{:,j} - sum_{l != j} W_{:,l} G_{l,j}, with the l = j term added back.
    Eigen::VectorXd numer = p.target.col(j) - w * p.gram.col(j) + gjj * w.col(j);
    w.col(j) = (numer / gjj).cwiseMax(0.0);
  }
  return w;
}

namespace {

// Shared sweep loop: applies `step` until the inner budget is exhausted.
template <typename Step>
Eigen::MatrixXd run_sweeps(Eigen::MatrixXd w, const InnerStop& stop, Step step) {
  double first_change = -1.0;
  for (int s = 0; s < stop.max_iters; ++s) {
    const Eigen::MatrixXd next = step(w, s);
    const double change = (next - w).norm();
    w = next;
    if (s == 0) first_change = change;
    if (change <= stop.rel_change_tol * first_change) break;
  }
  return w;
}

}  // namespace

Eigen::MatrixXd ahals_solve(const NnlsProblem& p, const InnerStop& stop) {
  return run_sweeps(p.init, stop,
                    [&](const Eigen::MatrixXd& w, int) { return hals_pass(p, w); });
}

Eigen::MatrixXd pgd_solve(const NnlsProblem& p, const InnerStop& stop) {
  const double lip = spectral_norm(p.gram);
  if (lip <= 0.0) throw std::runtime_error("pgd_solve: zero Gram matrix");
  return run_sweeps(p.init, stop, [&](const Eigen::MatrixXd& w, int) {
    return (w - (w * p.gram - p.target) / lip).cwiseMax(0.0).eval();
  });
}

Eigen::MatrixXd nesterov_solve(const NnlsProblem& p, const InnerStop& stop) {
  const double lip = spectral_norm(p.gram);
  if (lip <= 0.0) throw std::runtime_error("nesterov_solve: zero Gram matrix");

  Eigen::MatrixXd w = p.init;
  Eigen::MatrixXd y = w;
  Eigen::MatrixXd best = w;
  double best_obj = nnls_objective(p, w);
  double t = 1.0;
  double first_change = -1.0;
  for (int s = 0; s < stop.max_iters; ++s) {
    const Eigen::MatrixXd next = (y - (y * p.gram - p.target) / lip).cwiseMax(0.0);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - w);
    const double change = (next - w).norm();
    w = next;
    t = t_next;
    const double obj = nnls_objective(p, w);
    if (obj < best_obj) {
      best_obj = obj;
      best = w;
    }
    if (s == 0) first_change = change;
    if (change <= stop.rel_change_tol * first_change) break;
  }
  return best;
}

Eigen::MatrixXd admm_solve(const NnlsProblem& p, const InnerStop& stop) {
  const Eigen::Index r = p.gram.rows();
  const double rho = p.gram.trace() / static_cast<double>(r);
  if (rho <= 0.0) throw std::runtime_error("admm_solve: zero Gram matrix");

  Eigen::MatrixXd shifted = p.gram;
  shifted.diagonal().array() += rho;
  const Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) throw std::runtime_error("admm_solve: factorization failed");

  Eigen::MatrixXd z = p.init;
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(z.rows(), z.cols());
  Eigen::MatrixXd best = z;
  double best_obj = nnls_objective(p, z);
  double first_change = -1.0;
  for (int s = 0; s < stop.max_iters; ++s) {
    // W (G + rho I) = C + rho (Z - U)
    const Eigen::MatrixXd rhs = p.target + rho * (z - u);
    const Eigen::MatrixXd w = llt.solve(rhs.transpose()).transpose();
    const Eigen::MatrixXd z_next = (w + u).cwiseMax(0.0);
    u += w - z_next;
    const double change = (z_next - z).norm();
    z = z_next;
    const double obj = nnls_objective(p, z);
    if (obj < best_obj) {
      best_obj = obj;
      best = z;
    }
    if (s == 0) first_change = change;
    if (change <= stop.rel_change_tol * first_change) break;
  }
  return best;
}

namespace {

// Lawson-Hanson on the normal equations for one row:
//   min_{x >= 0} 0.5 x^T G x - c^T x.
// Returns false when the addition budget runs out.
bool solve_row_active_set(const Eigen::MatrixXd& g, const Eigen::VectorXd& c,
                          Eigen::VectorXd& x) {
  const Eigen::Index r = g.rows();
  const double enter_tol = 1e-11 * std::max({1.0, c.cwiseAbs().maxCoeff(),
                                             g.diagonal().maxCoeff()});
  x.setZero(r);
  std::vector<Eigen::Index> passive;
  passive.reserve(static_cast<std::size_t>(r));
  std::vector<bool> in_passive(static_cast<std::size_t>(r), false);
  const int max_additions = 3 * static_cast<int>(r);

  for (int additions = 0;; ++additions) {
    const Eigen::VectorXd dual = c - g * x;
    Eigen::Index enter = -1;
    double best = enter_tol;
    for (Eigen::Index j = 0; j < r; ++j)
      if (!in_passive[static_cast<std::size_t>(j)] && dual(j) > best) {
        best = dual(j);
        enter = j;
      }
    if (enter < 0) return true;  // KKT holds
    if (additions >= max_additions) return false;
    passive.push_back(enter);
    in_passive[static_cast<std::size_t>(enter)] = true;

    for (;;) {
      const Eigen::Index np = static_cast<Eigen::Index>(passive.size());
      Eigen::MatrixXd gp(np, np);
      Eigen::VectorXd cp(np);
      for (Eigen::Index a = 0; a < np; ++a) {
        cp(a) = c(passive[static_cast<std::size_t>(a)]);
        for (Eigen::Index b = 0; b < np; ++b)
          gp(a, b) = g(passive[static_cast<std::size_t>(a)], passive[static_cast<std::size_t>(b)]);
      }
      const Eigen::VectorXd zp = gp.llt().solve(cp);
      if ((zp.array() > 0.0).all()) {
        x.setZero();
        for (Eigen::Index a = 0; a < np; ++a) x(passive[static_cast<std::size_t>(a)]) = zp(a);
        break;
      }
      // Step toward zp until the first passive variable hits zero.
      double alpha = 1.0;
      for (Eigen::Index a = 0; a < np; ++a)
        if (zp(a) <= 0.0) {
          const double xa = x(passive[static_cast<std::size_t>(a)]);
          alpha = std::min(alpha, xa / (xa - zp(a)));
        }
      for (Eigen::Index a = 0; a < np; ++a) {
        const Eigen::Index j = passive[static_cast<std::size_t>(a)];
        x(j) += alpha * (zp(a) - x(j));
      }
      for (std::size_t a = passive.size(); a-- > 0;) {
        const Eigen::Index j = passive[a];
        if (x(j) <= 0.0 || (zp(static_cast<Eigen::Index>(a)) <= 0.0 && x(j) < 1e-14)) {
          x(j) = 0.0;
          in_passive[static_cast<std::size_t>(j)] = false;
          passive.erase(passive.begin() + static_cast<std::ptrdiff_t>(a));
        }
      }
    }
  }
}

}  // namespace

Eigen::MatrixXd active_set_solve(const NnlsProblem& p) {
  const Eigen::LLT<Eigen::MatrixXd> llt(p.gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("active_set_solve: Gram matrix is not positive definite");

  const Eigen::Index rows = p.target.rows();
  Eigen::MatrixXd w(rows, p.gram.cols());
  bool ok = true;
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < rows; ++i) {
    Eigen::VectorXd x;
    if (solve_row_active_set(p.gram, p.target.row(i).transpose(), x))
      w.row(i) = x.transpose();
    else {
#pragma omp atomic write
      ok = false;
    }
  }
  if (!ok) throw std::runtime_error("active_set_solve: pass budget exceeded");
  return w;
}

Eigen::MatrixXd solve_nnls(NnlsSolver solver, const NnlsProblem& p, const InnerStop& stop) {
  switch (solver) {
    case NnlsSolver::ahals: return ahals_solve(p, stop);
    case NnlsSolver::admm: return admm_solve(p, stop);
    case NnlsSolver::nesterov: return nesterov_solve(p, stop);
    case NnlsSolver::pgd: return pgd_solve(p, stop);
    case NnlsSolver::active_set: return active_set_solve(p);
  }
  throw std::logic_error("unknown solver");
}

NnlsSolver nnls_solver_from_name(const std::string& name) {
  if (name == "ahals") return NnlsSolver::ahals;
  if (name == "admm") return NnlsSolver::admm;
  if (name == "nesterov") return NnlsSolver::nesterov;
  if (name == "pgd") return NnlsSolver::pgd;
  if (name == "as" || name == "active_set") return NnlsSolver::active_set;
  throw std::invalid_argument("unknown NNLS solver: " + name);
}

std::string nnls_solver_name(NnlsSolver solver) {
  switch (solver) {
    case NnlsSolver::ahals: return "ahals";
    case NnlsSolver::admm: return "admm";
    case NnlsSolver::nesterov: return "nesterov";
    case NnlsSolver::pgd: return "pgd";
    case NnlsSolver::active_set: return "as";
  }
  return "?";
}

}  // namespace ntf
