#include <CLI11.hpp>
#include <Eigen/Core>
#include <cstdio>
#include <limits>

#include "ntf/bench.hpp"
#include "ntf/datagen.hpp"

using namespace ntf;

int main(int argc, char** argv) {
  // Kernels carry their own parallel loops; keep Eigen's products serial so
  // per-iteration timings do not depend on thread scheduling.
  Eigen::setNbThreads(1);

  CLI::App app{"dense nonnegative tensor factorization benchmark"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
  std::string config_path;
  std::string output_dir = "bench_out";
  int threads = 1;
  run_cmd->add_option("--config", config_path, "experiment config file")->required();
  run_cmd->add_option("--output", output_dir, "output directory (default bench_out)");
  run_cmd->add_option("--threads", threads, "parallel (algorithm, run) pairs (default 1)");

  auto* gen_cmd = app.add_subcommand("gen", "export a synthetic instance with its ground truth");
  std::string spec_str;
  std::string out_path = "instance.nt";
  bool text = false;
  gen_cmd->add_option("--spec", spec_str, "inline key=value spec or a spec file")->required();
  gen_cmd->add_option("--out", out_path, "output tensor path (default instance.nt)");
  gen_cmd->add_flag("--text", text, "write the text container instead of binary");

  auto* sum_cmd = app.add_subcommand("summarize", "summarize trace CSVs from a directory");
  std::string input_dir;
  double fmin_override = std::numeric_limits<double>::quiet_NaN();
  sum_cmd->add_option("--input", input_dir, "directory holding *_run<j>.csv traces")->required();
  sum_cmd->add_option("--fmin", fmin_override,
                      "curve shift (default: smallest f seen; use 0 for noiseless data)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const ExperimentConfig cfg = ExperimentConfig::load(config_path);
      const ExperimentResult result = run_experiment(cfg, output_dir, threads);
      std::printf("%zu traces written under %s (summary.json, median curves)\n",
                  result.runs.size(), output_dir.c_str());
    } else if (gen_cmd->parsed()) {
      const SyntheticSpec spec = parse_synthetic_spec(spec_str);
      auto [tensor, truth] = generate(spec);
      if (text)
        tensor.save_text(out_path);
      else
        tensor.save(out_path);
      const std::string truth_path = out_path + ".truth.txt";
      truth.save_text(truth_path);
      std::printf("tensor -> %s\nfactors -> %s\n", out_path.c_str(), truth_path.c_str());
    } else if (sum_cmd->parsed()) {
      const std::vector<RunResult> runs = load_traces(input_dir);
      write_summary(runs, input_dir + "/summary.json");
      double f_min = fmin_override;
      if (std::isnan(f_min)) {
        f_min = std::numeric_limits<double>::infinity();
        for (const auto& run : runs)
          for (const auto& rec : run.trace.records) f_min = std::min(f_min, rec.f);
      }
      postprocess(runs, f_min, input_dir);
      std::printf("summary.json and median curves written under %s\n", input_dir.c_str());
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const InvalidCombination& e) {
    std::fprintf(stderr, "invalid algorithm combination: %s\n", e.what());
    return 3;
  } catch (const OutputError& e) {
    std::fprintf(stderr, "output error: %s\n", e.what());
    return 4;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return 5;
  } catch (const InstanceError& e) {
    std::fprintf(stderr, "instance error: %s\n", e.what());
    return 6;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
