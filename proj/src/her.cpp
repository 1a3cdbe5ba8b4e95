#include "ntf/her.hpp"

#include <algorithm>
#include <stdexcept>

#include "driver_common.hpp"

namespace ntf {

void HerParams::validate() const {
  if (!(beta0 > 0.0 && beta0 < 1.0)) throw std::invalid_argument("beta0 must lie in (0,1)");
  if (!(1.0 < gamma_bar && gamma_bar <= gamma && gamma <= eta))
    throw std::invalid_argument("parameters must satisfy 1 < gamma_bar <= gamma <= eta");
}

Eigen::MatrixXd extrapolate_block(const Eigen::MatrixXd& a_new, const Eigen::MatrixXd& a_old,
                                  double beta) {
  return (a_new + beta * (a_new - a_old)).cwiseMax(0.0);
}

void update_betas(HerState& state, bool restarted, const HerParams& params) {
  if (restarted) {
    state.beta_bar = state.beta;
    state.beta /= params.eta;
  } else {
    // The cap that limits beta's growth is the previous one.
    state.beta = std::min(state.beta_bar, state.beta * params.gamma);
    state.beta_bar = std::min(1.0, state.beta_bar * params.gamma_bar);
  }
}

double f_hat(const GramCache& hat_cache, const Eigen::MatrixXd& last_factor) {
  const int last = static_cast<int>(hat_cache.grams.size()) - 1;
  if (!hat_cache.last_mttkrp || hat_cache.last_mttkrp->first != last)
    throw std::logic_error("f_hat: cache does not hold the last block's MTTKRP");
  const Eigen::MatrixXd g = hadamard_of_grams(hat_cache.grams, last);
  return cheap_objective(hat_cache.tensor_norm_sq, last_factor, g, hat_cache.last_mttkrp->second);
}

std::pair<KruskalModel, RunTrace> her_run(const ObjectiveProvider& data,
                                          const KruskalModel& init, const AoConfig& cfg,
                                          const HerParams& params, const HerObserver& observer) {
  detail::check_run_inputs(data, init, cfg);
  params.validate();
  const int n = init.order();

  HerState state;
  state.prev_factors = init;  // accepted sequence; extrapolation base
  state.hat_factors = init;   // the twin starts at the same point
  state.beta = params.beta0;
  GramCache hat_cache = GramCache::create(data.norm_sq(), state.hat_factors);

  RunTrace trace;
  trace.f0 = detail::pivot_objective(data, state.prev_factors, hat_cache.grams);
  state.f_hat_prev = trace.f0;

  KruskalModel solved = init;  // this sweep's NNLS outputs
  detail::RunClock clock;
  for (int k = 1;; ++k) {
    KruskalModel& accepted = state.prev_factors;
    const double beta_used = state.beta;
    for (int i = 0; i < n; ++i) {
      NnlsProblem p;
      p.gram = hadamard_of_grams(hat_cache.grams, i);
      p.target = data.mttkrp(state.hat_factors, i);
      p.init = accepted.factor(i);
      solved.factor(i) = solve_nnls(cfg.solver, p, cfg.inner_stop);
      state.hat_factors.factor(i) =
          extrapolate_block(solved.factor(i), accepted.factor(i), beta_used);
      hat_cache.refresh(i, state.hat_factors.factor(i));
      if (i == n - 1) hat_cache.last_mttkrp = {i, std::move(p.target)};
    }
    const double f_hat_k = f_hat(hat_cache, solved.factor(n - 1));

    const bool restarted = f_hat_k > state.f_hat_prev;
    if (restarted) {
      // Abandon the extrapolated sequence.
      state.hat_factors = solved;
      for (int i = 0; i < n; ++i) hat_cache.refresh(i, state.hat_factors.factor(i));
      accepted = solved;
    } else {
      accepted = state.hat_factors;
    }
    state.f_hat_prev = f_hat_k;
    update_betas(state, restarted, params);

    TraceRecord rec;
    rec.iter = k;
    rec.time_s = clock.elapsed();
    rec.f = f_hat_k;
    rec.e = detail::maybe_factor_error(cfg, accepted);
    rec.restarted = restarted;
    rec.beta = beta_used;
    trace.records.push_back(std::move(rec));

    if (observer) {
      HerIterationInfo info;
      info.iter = k;
      info.f_hat = f_hat_k;
      info.restarted = restarted;
      info.beta_used = beta_used;
      info.factors = &accepted;
      info.hat_factors = &state.hat_factors;
      observer(info);
    }

    if (detail::budget_exhausted(cfg, k, trace.records.back().time_s)) break;
  }
  return {std::move(state.prev_factors), std::move(trace)};
}

std::pair<KruskalModel, RunTrace> her_run(const DenseTensor& t, const KruskalModel& init,
                                          const AoConfig& cfg, const HerParams& params,
                                          const HerObserver& observer) {
  return her_run(DenseProvider(t), init, cfg, params, observer);
}

}  // namespace ntf
