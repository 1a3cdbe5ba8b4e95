#include "ntf/bench.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <map>
#include <memory>
#include <regex>
#include <sstream>

#include "ntf/ao.hpp"
#include "ntf/metrics.hpp"
#include "ntf/tucker.hpp"

namespace ntf {

namespace {

AlgorithmSpec::Driver driver_from_name(const std::string& name) {
  using Driver = AlgorithmSpec::Driver;
  if (name == "ao") return Driver::ao;
  if (name == "her") return Driver::her;
  if (name == "bro") return Driver::bro;
  if (name == "gr") return Driver::gr;
  if (name == "ls") return Driver::ls;
  if (name == "apg") return Driver::apg;
  if (name == "ibpg") return Driver::ibpg;
  throw ConfigError("unknown algorithm driver: " + name);
}

std::string driver_name(AlgorithmSpec::Driver d) {
  switch (d) {
    case AlgorithmSpec::Driver::ao: return "ao";
    case AlgorithmSpec::Driver::her: return "her";
    case AlgorithmSpec::Driver::bro: return "bro";
    case AlgorithmSpec::Driver::gr: return "gr";
    case AlgorithmSpec::Driver::ls: return "ls";
    case AlgorithmSpec::Driver::apg: return "apg";
    case AlgorithmSpec::Driver::ibpg: return "ibpg";
  }
  return "?";
}

bool is_scheme_driver(AlgorithmSpec::Driver d) {
  return d == AlgorithmSpec::Driver::bro || d == AlgorithmSpec::Driver::gr ||
         d == AlgorithmSpec::Driver::ls;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string AlgorithmSpec::default_label() const {
  const std::string base = driver_name(driver);
  if (driver == Driver::apg || driver == Driver::ibpg) return base;
  std::string out = base + "-" + nnls_solver_name(solver);
  if (is_scheme_driver(driver)) out += form == SchemeForm::original ? "-orig" : "-mod";
  return out;
}

void AlgorithmSpec::check() const {
  if (driver == Driver::ls && form == SchemeForm::original)
    throw InvalidCombination("ls does not support the original form");
  if (driver == Driver::her) {
    try {
      her.validate();
    } catch (const std::exception& e) {
      throw InvalidCombination(std::string("her parameters: ") + e.what());
    }
  }
  if ((driver == Driver::apg || driver == Driver::ibpg) && !(delta_w >= 0.0 && delta_w < 1.0))
    throw InvalidCombination("delta_w must lie in [0,1)");
}

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  ExperimentConfig cfg;
  SyntheticSpec spec;
  bool version_seen = false;
  bool synthetic_touched = false;
  std::string raw;
  int lineno = 0;

  const auto fail = [&](const std::string& what) {
    throw ConfigError("config line " + std::to_string(lineno) + ": " + what);
  };

  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    std::string key;
    if (!(ss >> key)) continue;

    if (key == "version") {
      int v = 0;
      if (!(ss >> v) || v != 1) fail("expected 'version 1'");
      version_seen = true;
    } else if (key == "shape") {
      spec.shape.clear();
      int d = 0;
      while (ss >> d) spec.shape.push_back(d);
      if (spec.shape.empty()) fail("shape needs at least one dimension");
      synthetic_touched = true;
    } else if (key == "rank") {
      if (!(ss >> cfg.rank)) fail("bad rank");
      spec.rank = cfg.rank;
    } else if (key == "noise") {
      if (!(ss >> spec.noise_sigma)) fail("bad noise level");
      synthetic_touched = true;
    } else if (key == "ill_conditioned") {
      int v = 0;
      if (!(ss >> v)) fail("bad ill_conditioned flag");
      spec.ill_conditioned = v != 0;
      synthetic_touched = true;
    } else if (key == "seed") {
      if (!(ss >> cfg.seed)) fail("bad seed");
      spec.seed = cfg.seed;
    } else if (key == "tensor") {
      if (!(ss >> cfg.tensor_file)) fail("bad tensor path");
    } else if (key == "truth") {
      if (!(ss >> cfg.truth_file)) fail("bad truth path");
    } else if (key == "runs") {
      if (!(ss >> cfg.n_runs)) fail("bad run count");
    } else if (key == "max_outer_iters") {
      if (!(ss >> cfg.max_outer_iters)) fail("bad iteration budget");
    } else if (key == "max_time_s") {
      if (!(ss >> cfg.max_time_s)) fail("bad time budget");
    } else if (key == "inner_iters") {
      if (!(ss >> cfg.inner_stop.max_iters)) fail("bad inner iteration cap");
    } else if (key == "inner_tol") {
      if (!(ss >> cfg.inner_stop.rel_change_tol)) fail("bad inner tolerance");
    } else if (key == "record_e") {
      int v = 0;
      if (!(ss >> v)) fail("bad record_e flag");
      cfg.record_e = v != 0;
    } else if (key == "rotate_modes") {
      int v = 0;
      if (!(ss >> v)) fail("bad rotate_modes flag");
      cfg.rotate_modes = v != 0;
    } else if (key == "tucker_ranks") {
      cfg.tucker_ranks.clear();
      int d = 0;
      while (ss >> d) cfg.tucker_ranks.push_back(d);
      if (cfg.tucker_ranks.empty()) fail("tucker_ranks needs at least one rank");
    } else if (key == "algorithm") {
      AlgorithmSpec a;
      std::string name;
      if (!(ss >> name)) fail("algorithm needs a driver name");
      a.driver = driver_from_name(name);
      std::string tok;
      while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) fail("expected key=value, got '" + tok + "'");
        const std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
        try {
          if (k == "solver") a.solver = nnls_solver_from_name(v);
          else if (k == "form") {
            if (v == "original") a.form = SchemeForm::original;
            else if (v == "modified") a.form = SchemeForm::modified;
            else fail("unknown form '" + v + "'");
          } else if (k == "beta0") a.her.beta0 = std::stod(v);
          else if (k == "gamma") a.her.gamma = std::stod(v);
          else if (k == "gamma_bar") a.her.gamma_bar = std::stod(v);
          else if (k == "eta") a.her.eta = std::stod(v);
          else if (k == "delta_w") a.delta_w = std::stod(v);
          else if (k == "inertia") a.inertia = std::stod(v);
          else if (k == "label") a.label = v;
          else fail("unknown algorithm option '" + k + "'");
        } catch (const ConfigError&) {
          throw;
        } catch (const std::exception& e) {
          fail(std::string("bad value in '") + tok + "': " + e.what());
        }
      }
      if (a.label.empty()) a.label = a.default_label();
      cfg.algorithms.push_back(std::move(a));
    } else {
      fail("unknown directive '" + key + "'");
    }
  }
  if (!version_seen) throw ConfigError("config is missing the 'version 1' line");
  if (synthetic_touched) {
    if (spec.shape.empty()) throw ConfigError("synthetic instance needs a shape");
    cfg.synthetic = spec;
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  return parse(in);
}

void ExperimentConfig::validate() const {
  if (synthetic && !tensor_file.empty())
    throw ConfigError("give either a synthetic instance or a tensor file, not both");
  if (!synthetic && tensor_file.empty())
    throw ConfigError("no instance: set a shape or a tensor file");
  const int r = rank > 0 ? rank : (synthetic ? synthetic->rank : 0);
  if (r < 1) throw ConfigError("rank must be at least 1");
  if (n_runs < 1) throw ConfigError("runs must be at least 1");
  if (max_outer_iters <= 0 && max_time_s <= 0.0)
    throw ConfigError("set max_outer_iters or max_time_s");
  if (algorithms.empty()) throw ConfigError("configure at least one algorithm");
  if (record_e && !synthetic && truth_file.empty())
    throw ConfigError("record_e needs ground truth: use a synthetic instance or a truth file");
  std::map<std::string, int> seen;
  for (const auto& a : algorithms) {
    a.check();
    if (a.label.empty() ||
        a.label.find_first_not_of(
            "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.-") !=
            std::string::npos)
      throw ConfigError("algorithm label must be a plain file-name token: " + a.label);
    if (++seen[a.label] > 1) throw ConfigError("duplicate algorithm label: " + a.label);
  }
}

namespace {

RunTrace dispatch(const AlgorithmSpec& a, const ObjectiveProvider& data,
                  const KruskalModel& init, const AoConfig& cfg) {
  using Driver = AlgorithmSpec::Driver;
  switch (a.driver) {
    case Driver::ao: return ao_run(data, init, cfg).second;
    case Driver::her: return her_run(data, init, cfg, a.her).second;
    case Driver::bro:
      return extrapolated_ao_run(data, init, cfg, ExtrapolationScheme::bro, a.form).second;
    case Driver::gr:
      return extrapolated_ao_run(data, init, cfg, ExtrapolationScheme::gr, a.form).second;
    case Driver::ls:
      return extrapolated_ao_run(data, init, cfg, ExtrapolationScheme::ls, a.form).second;
    case Driver::apg: return apg_run(data, init, cfg, a.delta_w).second;
    case Driver::ibpg: return ibpg_run(data, init, cfg, a.delta_w, a.inertia).second;
  }
  throw std::logic_error("unknown driver");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::string& output_dir,
                                int threads) {
  cfg.validate();

  DenseTensor tensor;
  std::optional<KruskalModel> truth;
  if (cfg.synthetic) {
    auto [t, m] = generate(*cfg.synthetic);
    tensor = std::move(t);
    truth = std::move(m);
  } else {
    tensor = load_tensor_any(cfg.tensor_file);
    if (!cfg.truth_file.empty()) {
      try {
        truth = KruskalModel::load_text(cfg.truth_file);
      } catch (const std::exception& e) {
        throw InstanceError(e.what());
      }
    }
  }
  const int rank = cfg.rank > 0 ? cfg.rank : cfg.synthetic->rank;

  std::vector<int> tucker_ranks = cfg.tucker_ranks;
  if (cfg.rotate_modes) {
    // Move the smallest mode to the back so the per-iteration objective
    // evaluation works on the cheapest unfolding.
    const auto& shape = tensor.shape();
    const int smallest = static_cast<int>(
        std::min_element(shape.begin(), shape.end()) - shape.begin());
    std::vector<int> perm;
    for (int l = 0; l < tensor.order(); ++l)
      if (l != smallest) perm.push_back(l);
    perm.push_back(smallest);
    tensor = permute_modes(tensor, perm);
    if (truth) {
      std::vector<Eigen::MatrixXd> reordered;
      for (int l : perm) reordered.push_back(truth->factor(l));
      truth->factors = std::move(reordered);
    }
    if (!tucker_ranks.empty() && tucker_ranks.size() == perm.size()) {
      std::vector<int> rr;
      for (int l : perm) rr.push_back(tucker_ranks[static_cast<std::size_t>(l)]);
      tucker_ranks = std::move(rr);
    }
  }

  std::optional<TuckerFormat> compressed;
  std::unique_ptr<ObjectiveProvider> provider;
  if (!tucker_ranks.empty()) {
    if (static_cast<int>(tucker_ranks.size()) != tensor.order())
      throw ConfigError("tucker_ranks length does not match the tensor order");
    compressed = hosvd_compress(tensor, tucker_ranks);
    provider = std::make_unique<TuckerProvider>(*compressed);
  } else {
    provider = std::make_unique<DenseProvider>(tensor);
  }

  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw OutputError("cannot create output directory " + output_dir + ": " + ec.message());
  {
    std::ofstream probe(output_dir + "/.write_probe");
    if (!probe) throw OutputError("output directory is not writable: " + output_dir);
  }
  std::filesystem::remove(output_dir + "/.write_probe", ec);

  // One shared initialization per run index: sub-stream j+1 of the seed.
  std::vector<KruskalModel> inits;
  inits.reserve(static_cast<std::size_t>(cfg.n_runs));
  for (int j = 0; j < cfg.n_runs; ++j)
    inits.push_back(random_init(tensor.shape(), rank, stream_seed(cfg.seed, static_cast<std::uint64_t>(j) + 1)));

  const int total = static_cast<int>(cfg.algorithms.size()) * cfg.n_runs;
  ExperimentResult result;
  result.runs.resize(static_cast<std::size_t>(total));

  std::exception_ptr first_error;
  const auto run_pair = [&](int idx) {
    const auto& alg = cfg.algorithms[static_cast<std::size_t>(idx / cfg.n_runs)];
    const int j = idx % cfg.n_runs;
    AoConfig rcfg;
    rcfg.solver = alg.solver;
    rcfg.inner_stop = cfg.inner_stop;
    rcfg.max_outer_iters = cfg.max_outer_iters;
    rcfg.max_time_s = cfg.max_time_s;
    rcfg.record_factor_error = cfg.record_e && truth.has_value();
    rcfg.ground_truth = rcfg.record_factor_error ? &*truth : nullptr;

    RunTrace trace;
    try {
      trace = dispatch(alg, *provider, inits[static_cast<std::size_t>(j)], rcfg);
    } catch (const std::exception& e) {
      throw SolverError(alg.label + " run " + std::to_string(j) + ": " + e.what());
    }
    try {
      trace.write_csv(output_dir + "/" + alg.label + "_run" + std::to_string(j) + ".csv");
    } catch (const std::exception& e) {
      throw OutputError(e.what());
    }
    result.runs[static_cast<std::size_t>(idx)] = {alg.label, j, std::move(trace)};
  };

  if (threads > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int idx = 0; idx < total; ++idx) {
      try {
        run_pair(idx);
      } catch (...) {
#pragma omp critical
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
  } else {
    for (int idx = 0; idx < total; ++idx) run_pair(idx);
  }

  // Noiseless synthetic data admits an exact fit, so curves shift by zero.
  if (cfg.synthetic && cfg.synthetic->noise_sigma == 0.0) {
    result.f_min = 0.0;
  } else {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& run : result.runs)
      for (const auto& rec : run.trace.records) lo = std::min(lo, rec.f);
    result.f_min = lo;
  }

  write_summary(result.runs, output_dir + "/summary.json");
  postprocess(result.runs, result.f_min, output_dir);
  return result;
}

std::vector<RunResult> load_traces(const std::string& input_dir) {
  const std::regex pattern(R"((.+)_run(\d+)\.csv)");
  std::vector<RunResult> runs;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(input_dir, ec)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (!std::regex_match(name, m, pattern)) continue;
    RunResult run;
    run.algorithm = m[1];
    run.run_index = std::stoi(m[2]);
    run.trace = RunTrace::read_csv(entry.path().string());
    runs.push_back(std::move(run));
  }
  if (ec) throw InstanceError("cannot read directory " + input_dir + ": " + ec.message());
  if (runs.empty()) throw InstanceError("no trace files under " + input_dir);
  std::sort(runs.begin(), runs.end(), [](const RunResult& a, const RunResult& b) {
    return std::tie(a.algorithm, a.run_index) < std::tie(b.algorithm, b.run_index);
  });
  return runs;
}

void write_summary(const std::vector<RunResult>& runs, const std::string& path) {
  if (runs.empty()) throw std::invalid_argument("no runs to summarize");
  using json = nlohmann::ordered_json;

  double f_min = std::numeric_limits<double>::infinity();
  double e_min = std::numeric_limits<double>::infinity();
  bool any_e = false;
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunResult*>> groups;
  for (const auto& run : runs) {
    if (groups.find(run.algorithm) == groups.end()) order.push_back(run.algorithm);
    groups[run.algorithm].push_back(&run);
    for (const auto& rec : run.trace.records) {
      f_min = std::min(f_min, rec.f);
      if (rec.e) {
        any_e = true;
        e_min = std::min(e_min, *rec.e);
      }
    }
  }

  json out;
  out["f_min"] = f_min;
  if (any_e) out["e_min"] = e_min;
  out["algorithms"] = json::array();
  for (const auto& label : order) {
    const auto& group = groups[label];
    std::vector<double> finals, final_es;
    int restarts = 0;
    bool any_restart_field = false;
    for (const RunResult* run : group) {
      finals.push_back(run->trace.final_f());
      if (!run->trace.records.empty() && run->trace.records.back().e)
        final_es.push_back(*run->trace.records.back().e);
      for (const auto& rec : run->trace.records)
        if (rec.restarted) {
          any_restart_field = true;
          restarts += *rec.restarted ? 1 : 0;
        }
    }
    json a;
    a["algorithm"] = label;
    a["runs"] = group.size();
    a["f_median"] = median_of(finals);
    a["f_min"] = *std::min_element(finals.begin(), finals.end());
    a["f_max"] = *std::max_element(finals.begin(), finals.end());
    if (!final_es.empty()) a["e_median"] = median_of(final_es);
    if (any_restart_field) a["restarts_total"] = restarts;
    out["algorithms"].push_back(std::move(a));
  }

  std::ofstream os(path);
  if (!os) throw OutputError("cannot write " + path);
  os << out.dump(2) << '\n';
}

void postprocess(const std::vector<RunResult>& runs, double f_min,
                 const std::string& output_dir) {
  if (runs.empty()) throw std::invalid_argument("no runs to postprocess");

  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunResult*>> groups;
  for (const auto& run : runs) {
    if (groups.find(run.algorithm) == groups.end()) order.push_back(run.algorithm);
    groups[run.algorithm].push_back(&run);
  }

  // Shared time grid across every trace, clipped to the common span.
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (const auto& run : runs) {
    if (run.trace.records.empty()) continue;
    lo = std::max(lo, run.trace.records.front().time_s);
    hi = std::min(hi, run.trace.records.back().time_s);
  }

  for (const auto& label : order) {
    const auto& group = groups[label];

    std::size_t len = std::numeric_limits<std::size_t>::max();
    for (const RunResult* run : group) len = std::min(len, run->trace.records.size());
    std::vector<std::vector<double>> iter_curves;
    for (const RunResult* run : group) {
      std::vector<double> c(len);
      for (std::size_t k = 0; k < len; ++k) c[k] = run->trace.records[k].f - f_min;
      iter_curves.push_back(std::move(c));
    }
    const std::vector<double> iter_median = median_curve(iter_curves);
    {
      std::ofstream os(output_dir + "/" + label + "_median_iters.csv");
      if (!os) throw OutputError("cannot write median curve for " + label);
      os << "iter,f_minus_fmin\n";
      for (std::size_t k = 0; k < iter_median.size(); ++k)
        os << (k + 1) << ',' << format_g17(iter_median[k]) << '\n';
    }

    if (hi > lo) {
      std::vector<double> grid(100);
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const double w = static_cast<double>(g) / 99.0;
        grid[g] = std::min(hi, std::max(lo, lo + (hi - lo) * w));
      }
      grid.front() = lo;
      grid.back() = hi;
      std::vector<std::vector<double>> time_curves;
      for (const RunResult* run : group) {
        std::vector<double> times, values;
        for (const auto& rec : run->trace.records) {
          times.push_back(rec.time_s);
          values.push_back(rec.f - f_min);
        }
        time_curves.push_back(interpolate_curve(times, values, grid));
      }
      const std::vector<double> time_median = median_curve(time_curves);
      std::ofstream os(output_dir + "/" + label + "_median_time.csv");
      if (!os) throw OutputError("cannot write time curve for " + label);
      os << "time_s,f_minus_fmin\n";
      for (std::size_t g = 0; g < grid.size(); ++g)
        os << format_g17(grid[g]) << ',' << format_g17(time_median[g]) << '\n';
    }
  }
}

SyntheticSpec parse_synthetic_spec(const std::string& inline_or_path) {
  SyntheticSpec spec;
  const auto parse_shape_list = [&](const std::string& v) {
    spec.shape.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) spec.shape.push_back(std::stoi(item));
  };

  if (inline_or_path.find('=') != std::string::npos) {
    std::istringstream ss(inline_or_path);
    std::string tok;
    while (ss >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw ConfigError("expected key=value in spec, got '" + tok + "'");
      const std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
      try {
        if (k == "shape") parse_shape_list(v);
        else if (k == "rank") spec.rank = std::stoi(v);
        else if (k == "noise") spec.noise_sigma = std::stod(v);
        else if (k == "ill_conditioned" || k == "ill") spec.ill_conditioned = std::stoi(v) != 0;
        else if (k == "seed") spec.seed = std::stoull(v);
        else throw ConfigError("unknown spec key '" + k + "'");
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception&) {
        throw ConfigError("bad value in '" + tok + "'");
      }
    }
  } else {
    std::ifstream in(inline_or_path);
    if (!in) throw ConfigError("cannot read spec file: " + inline_or_path);
    std::string raw;
    while (std::getline(in, raw)) {
      const auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      std::istringstream ss(raw);
      std::string key;
      if (!(ss >> key)) continue;
      if (key == "version") continue;
      if (key == "shape") {
        spec.shape.clear();
        int d = 0;
        while (ss >> d) spec.shape.push_back(d);
      } else if (key == "rank") ss >> spec.rank;
      else if (key == "noise") ss >> spec.noise_sigma;
      else if (key == "ill_conditioned") {
        int v = 0;
        ss >> v;
        spec.ill_conditioned = v != 0;
      } else if (key == "seed") ss >> spec.seed;
      else throw ConfigError("unknown spec directive '" + key + "'");
      if (ss.fail() && !ss.eof()) throw ConfigError("bad value for '" + key + "'");
    }
  }
  if (spec.shape.empty()) throw ConfigError("spec needs a shape");
  if (spec.rank < 1) throw ConfigError("spec needs rank >= 1");
  return spec;
}

DenseTensor load_tensor_any(const std::string& path) {
  try {
    return DenseTensor::load(path);
  } catch (const std::exception&) {
  }
  try {
    return DenseTensor::load_text(path);
  } catch (const std::exception& e) {
    throw InstanceError(std::string("cannot load tensor: ") + e.what());
  }
}

}  // namespace ntf
