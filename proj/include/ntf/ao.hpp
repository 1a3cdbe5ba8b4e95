#pragma once

#include <utility>

#include "ntf/kruskal.hpp"
#include "ntf/nnls.hpp"
#include "ntf/provider.hpp"
#include "ntf/tensor.hpp"
#include "ntf/trace.hpp"

namespace ntf {

/// Shared driver configuration. At least one of the two budgets must be
/// set; the wall clock is checked once per outer iteration.
struct AoConfig {
  NnlsSolver solver = NnlsSolver::ahals;
  InnerStop inner_stop;
  int max_outer_iters = 0;   // 0 = no iteration cap
  double max_time_s = 0.0;   // 0 = no time cap
  bool record_factor_error = false;
  const KruskalModel* ground_truth = nullptr;  // required when record_factor_error

  void validate() const;
};

/// Alternating optimization: cycle over the blocks, solve each NNLS
/// subproblem from the cached (G, C) pair, warm-started at the current
/// block. The objective is recorded once per outer iteration by reusing
/// the last block's quantities; the full tensor is never reconstructed.
std::pair<KruskalModel, RunTrace> ao_run(const ObjectiveProvider& data,
                                         const KruskalModel& init, const AoConfig& cfg);
std::pair<KruskalModel, RunTrace> ao_run(const DenseTensor& t, const KruskalModel& init,
                                         const AoConfig& cfg);

}  // namespace ntf
