#pragma once

#include <utility>
#include <vector>

#include "ntf/ao.hpp"
#include "ntf/kernels.hpp"

namespace ntf {

// Competing accelerators: extrapolation-after-update schemes (Bro's
// iteration-count rule, gradient-norm ratios, exact quadratic line search)
// in their original global-weight and block-wise modified forms, plus the
// block proximal-gradient methods with in-block momentum.

enum class ExtrapolationScheme { bro, gr, ls };
enum class SchemeForm { original, modified };

struct SchemeOptions {
  int bro_suppress_iters = 4;   // no extrapolation during the first sweeps
  bool force_zero_omega = false;  // diagnostic: reduces every scheme to plain AO
};

/// Weight-rule state for Bro's sequence: omega = k^(1/h) - 1, where h grows
/// by one on every iteration whose error increased.
struct BroState {
  int h = 3;
  int no_increase_streak = 0;
  double omega = 0.0;
};

/// Advances h by the given error signal, then evaluates omega at iteration
/// `iter` (1-based).
double bro_omega(int iter, BroState& state, bool error_increased);

/// Gradient-ratio weight for one block; zero when the previous gradient
/// vanished.
double gr_omega_block(double grad_now_norm, double grad_prev_norm);

/// Exact minimizer of the block objective along a_new + omega * d with
/// d = a_new - a_prev and the other blocks fixed (their effect enters
/// through g and c). Degenerate directions return zero.
double ls_omega_block(const Eigen::MatrixXd& a_new, const Eigen::MatrixXd& a_prev,
                      const Eigen::MatrixXd& g, const Eigen::MatrixXd& c);

/// AO accelerated by one of the three schemes. The original form applies a
/// single global weight to the stacked iterate after the sweep; the
/// modified form extrapolates each block right after its update with a
/// block-specific weight. Extrapolated iterates are not projected; when
/// the objective rises, the sweep reverts to the un-extrapolated solves.
/// The original LS form (degree-2N polynomial) is not supported.
std::pair<KruskalModel, RunTrace> extrapolated_ao_run(const ObjectiveProvider& data,
                                                      const KruskalModel& init,
                                                      const AoConfig& cfg,
                                                      ExtrapolationScheme scheme,
                                                      SchemeForm form,
                                                      const SchemeOptions& options = {});
std::pair<KruskalModel, RunTrace> extrapolated_ao_run(const DenseTensor& t,
                                                      const KruskalModel& init,
                                                      const AoConfig& cfg,
                                                      ExtrapolationScheme scheme,
                                                      SchemeForm form,
                                                      const SchemeOptions& options = {});

/// Shared momentum bookkeeping for the block proximal-gradient methods.
struct MomentumState {
  double t = 1.0;
  std::vector<Eigen::MatrixXd> prev_factors;   // A_{k-1}
  std::vector<Eigen::MatrixXd> prev2_factors;  // A_{k-2}
  std::vector<double> prev_lipschitz;          // L_{k-2}, per block
  double delta_w = 0.99;
  double inertia_multiplier = 1.01;
};

/// t_{k} = (1 + sqrt(1 + 4 t_{k-1}^2)) / 2.
double momentum_next(double t);

/// min(w_hat, delta_w * sqrt(l_prev / l_now)).
double momentum_weight(double w_hat, double delta_w, double l_prev, double l_now);

/// Alternating proximal gradient: per block one projected-gradient step
/// from an extrapolated point; if the sweep raised the objective it is
/// redone from the previous iterates without extrapolation.
std::pair<KruskalModel, RunTrace> apg_run(const ObjectiveProvider& data,
                                          const KruskalModel& init, const AoConfig& cfg,
                                          double delta_w = 0.99);
std::pair<KruskalModel, RunTrace> apg_run(const DenseTensor& t, const KruskalModel& init,
                                          const AoConfig& cfg, double delta_w = 0.99);

/// Inertial block proximal gradient: two extrapolation points per step
/// (one for the gradient, one inertial base), an inner repeat per block
/// under the shared inner budget, and no restart.
std::pair<KruskalModel, RunTrace> ibpg_run(const ObjectiveProvider& data,
                                           const KruskalModel& init, const AoConfig& cfg,
                                           double delta_w = 0.99,
                                           double inertia_multiplier = 1.01);
std::pair<KruskalModel, RunTrace> ibpg_run(const DenseTensor& t, const KruskalModel& init,
                                           const AoConfig& cfg, double delta_w = 0.99,
                                           double inertia_multiplier = 1.01);

}  // namespace ntf
