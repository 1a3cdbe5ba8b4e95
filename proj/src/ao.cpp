#include "ntf/ao.hpp"

#include <stdexcept>

#include "driver_common.hpp"
#include "ntf/kernels.hpp"

namespace ntf {

void AoConfig::validate() const {
  if (max_outer_iters <= 0 && max_time_s <= 0.0)
    throw std::invalid_argument("set an iteration or time budget");
  if (record_factor_error && ground_truth == nullptr)
    throw std::invalid_argument("factor error recording needs ground truth factors");
}

std::pair<KruskalModel, RunTrace> ao_run(const ObjectiveProvider& data,
                                         const KruskalModel& init, const AoConfig& cfg) {
  detail::check_run_inputs(data, init, cfg);
  const int n = init.order();

  KruskalModel model = init;
  GramCache cache = GramCache::create(data.norm_sq(), model);

  RunTrace trace;
  trace.f0 = detail::pivot_objective(data, model, cache.grams);

  detail::RunClock clock;
  for (int k = 1;; ++k) {
    double f = 0.0;
    for (int i = 0; i < n; ++i) {
      NnlsProblem p;
      p.gram = hadamard_of_grams(cache.grams, i);
      p.target = data.mttkrp(model, i);
      p.init = model.factor(i);
      Eigen::MatrixXd w = solve_nnls(cfg.solver, p, cfg.inner_stop);
      if (i == n - 1) f = cheap_objective(cache.tensor_norm_sq, w, p.gram, p.target);
      model.factor(i) = std::move(w);
      cache.refresh(i, model.factor(i));
    }

    TraceRecord rec;
    rec.iter = k;
    rec.time_s = clock.elapsed();
    rec.f = f;
    rec.e = detail::maybe_factor_error(cfg, model);
    trace.records.push_back(std::move(rec));

    if (detail::budget_exhausted(cfg, k, trace.records.back().time_s)) break;
  }
  return {std::move(model), std::move(trace)};
}

std::pair<KruskalModel, RunTrace> ao_run(const DenseTensor& t, const KruskalModel& init,
                                         const AoConfig& cfg) {
  return ao_run(DenseProvider(t), init, cfg);
}

}  // namespace ntf
