#pragma once

#include <functional>
#include <utility>

#include "ntf/ao.hpp"
#include "ntf/kernels.hpp"

namespace ntf {

/// Extrapolation weight dynamics. Defaults follow the recommended setting
/// beta0 = 0.5, gamma = 1.05, gamma_bar = 1.01, eta = 1.5.
struct HerParams {
  double beta0 = 0.5;
  double gamma = 1.05;
  double gamma_bar = 1.01;
  double eta = 1.5;

  /// Requires beta0 in (0,1) and 1 < gamma_bar <= gamma <= eta.
  void validate() const;
};

/// Mutable accelerator state: the extrapolated twin of every factor, the
/// current weight and its cap, and the last restart-criterion value.
struct HerState {
  KruskalModel hat_factors;
  KruskalModel prev_factors;
  double beta = 0.0;
  double beta_bar = 1.0;
  double f_hat_prev = 0.0;
};

/// max(0, A_new + beta * (A_new - A_old)), entrywise.
Eigen::MatrixXd extrapolate_block(const Eigen::MatrixXd& a_new, const Eigen::MatrixXd& a_old,
                                  double beta);

/// Weight update after an accepted or rejected sweep. On rejection the cap
/// drops to the old beta and beta shrinks by eta; on acceptance beta grows
/// by gamma but is clamped by the previous cap, and the cap grows by
/// gamma_bar up to 1.
void update_betas(HerState& state, bool restarted, const HerParams& params);

/// Restart criterion at the mixed point (extrapolated blocks 0..N-2, plain
/// last block), assembled from the quantities the last block update put in
/// the cache. Costs a few r x r products; the tensor is not touched.
double f_hat(const GramCache& hat_cache, const Eigen::MatrixXd& last_factor);

/// Per-iteration snapshot handed to an observer (used by tests and by
/// callers that want restart statistics beyond the trace).
struct HerIterationInfo {
  int iter = 0;
  double f_hat = 0.0;
  bool restarted = false;
  double beta_used = 0.0;
  const KruskalModel* factors = nullptr;
  const KruskalModel* hat_factors = nullptr;
};
using HerObserver = std::function<void(const HerIterationInfo&)>;

/// Extrapolation-with-restarts driver. Each block subproblem is built from
/// the extrapolated twins; after the sweep the cheap criterion decides
/// whether to keep the extrapolated sequence or abandon it and shrink beta.
std::pair<KruskalModel, RunTrace> her_run(const ObjectiveProvider& data,
                                          const KruskalModel& init, const AoConfig& cfg,
                                          const HerParams& params,
                                          const HerObserver& observer = {});
std::pair<KruskalModel, RunTrace> her_run(const DenseTensor& t, const KruskalModel& init,
                                          const AoConfig& cfg, const HerParams& params,
                                          const HerObserver& observer = {});

}  // namespace ntf
