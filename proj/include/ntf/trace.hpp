#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ntf {

/// One outer-iteration record. `e`, `restarted` and `beta` stay empty for
/// drivers that have no ground truth / restart / extrapolation weight.
struct TraceRecord {
  int iter = 0;
  double time_s = 0.0;
  double f = 0.0;
  std::optional<double> e;
  std::optional<bool> restarted;
  std::optional<double> beta;
};

/// Per-run convergence trace. `f0` is the objective at the shared initial
/// model, recorded before the first sweep.
struct RunTrace {
  double f0 = 0.0;
  std::vector<TraceRecord> records;

  /// Throws unless iterations strictly increase and time never decreases.
  void validate() const;

  int restart_count() const;
  double final_f() const;

  // CSV schema: header "iter,time_s,f,e,restarted,beta"; empty cells for
  // inapplicable fields. f/e cells are written with %.17g so equal values
  // serialize identically.
  void write_csv(const std::string& path) const;
  static RunTrace read_csv(const std::string& path);
};

}  // namespace ntf
