#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>

#include "ntf/ao.hpp"
#include "ntf/kernels.hpp"
#include "ntf/metrics.hpp"
#include "ntf/provider.hpp"

namespace ntf::detail {

inline void check_run_inputs(const ObjectiveProvider& data, const KruskalModel& init,
                             const AoConfig& cfg) {
  cfg.validate();
  init.validate();
  if (!init.matches_shape(data.shape()))
    throw std::invalid_argument("initial model does not match the tensor shape");
  if (!init.is_nonnegative())
    throw std::invalid_argument("initial model must be entrywise nonnegative");
  if (cfg.record_factor_error &&
      (cfg.ground_truth->order() != init.order() || cfg.ground_truth->rank() != init.rank()))
    throw std::invalid_argument("ground truth does not match the initial model");
}

class RunClock {
 public:
  RunClock() : start_(std::chrono::steady_clock::now()) {}
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline bool budget_exhausted(const AoConfig& cfg, int iters_done, double elapsed) {
  if (cfg.max_outer_iters > 0 && iters_done >= cfg.max_outer_iters) return true;
  if (cfg.max_time_s > 0.0 && elapsed >= cfg.max_time_s) return true;
  return false;
}

inline std::optional<double> maybe_factor_error(const AoConfig& cfg, const KruskalModel& m) {
  if (!cfg.record_factor_error) return std::nullopt;
  return factor_error(m, *cfg.ground_truth);
}

/// Objective at a model through the pivot-mode formula (one MTTKRP).
inline double pivot_objective(const ObjectiveProvider& data, const KruskalModel& m,
                              const std::vector<Eigen::MatrixXd>& grams) {
  const int pivot = m.order() - 1;
  const Eigen::MatrixXd c = data.mttkrp(m, pivot);
  const Eigen::MatrixXd g = hadamard_of_grams(grams, pivot);
  return cheap_objective(data.norm_sq(), m.factor(pivot), g, c);
}

}  // namespace ntf::detail
