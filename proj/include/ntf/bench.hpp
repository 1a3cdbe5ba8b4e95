#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ntf/baselines.hpp"
#include "ntf/datagen.hpp"
#include "ntf/her.hpp"
#include "ntf/nnls.hpp"
#include "ntf/trace.hpp"

namespace ntf {

// Experiment runner: multi-seed comparisons with one shared initialization
// per run index, per-(algorithm, run) trace CSVs, a summary JSON and
// median curve files.

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidCombination : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InstanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AlgorithmSpec {
  enum class Driver { ao, her, bro, gr, ls, apg, ibpg };

  Driver driver = Driver::ao;
  NnlsSolver solver = NnlsSolver::ahals;
  SchemeForm form = SchemeForm::modified;
  HerParams her;
  double delta_w = 0.99;
  double inertia = 1.01;
  std::string label;  // filled with a default when empty

  std::string default_label() const;
  /// Throws InvalidCombination for unsupported driver/form pairs.
  void check() const;
};

struct ExperimentConfig {
  // Instance: a synthetic description or a tensor container on disk.
  std::optional<SyntheticSpec> synthetic;
  std::string tensor_file;
  std::string truth_file;  // factor sidecar; enables e for file instances

  int rank = 0;  // decomposition rank (defaults to the synthetic rank)
  std::vector<AlgorithmSpec> algorithms;
  int n_runs = 20;
  int max_outer_iters = 0;
  double max_time_s = 0.0;
  InnerStop inner_stop;
  bool record_e = false;
  std::vector<int> tucker_ranks;  // non-empty: drive solvers through HOSVD compression
  bool rotate_modes = false;      // pre-rotate so the smallest mode is last
  std::uint64_t seed = 0;

  /// Flat key-value text, one directive per line, `#` comments, and a
  /// required `version 1` line. See the README for the grammar.
  static ExperimentConfig parse(std::istream& in);
  static ExperimentConfig load(const std::string& path);

  void validate() const;
};

struct RunResult {
  std::string algorithm;
  int run_index = 0;
  RunTrace trace;
};

struct ExperimentResult {
  std::vector<RunResult> runs;
  double f_min = 0.0;  // curve shift used by postprocessing
};

/// Runs every (algorithm, run) pair, writes `<label>_run<j>.csv` traces
/// into output_dir, then the summary and median curves. Pairs may run in
/// parallel; each pair is single-threaded so timings stay comparable.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::string& output_dir,
                                int threads = 1);

/// Reads `*_run<j>.csv` traces back from a directory.
std::vector<RunResult> load_traces(const std::string& input_dir);

/// Summary JSON: global f_min/e_min plus per-algorithm final-f statistics
/// and restart totals.
void write_summary(const std::vector<RunResult>& runs, const std::string& path);

/// Median curves over iterations and over a shared time grid, shifted by
/// f_min: `<label>_median_iters.csv` and `<label>_median_time.csv`.
void postprocess(const std::vector<RunResult>& runs, double f_min,
                 const std::string& output_dir);

/// Parses "key=value ..." pairs (or a file of config directives) into a
/// synthetic instance description.
SyntheticSpec parse_synthetic_spec(const std::string& inline_or_path);

/// Loads a dense tensor container, binary or text.
DenseTensor load_tensor_any(const std::string& path);

}  // namespace ntf
