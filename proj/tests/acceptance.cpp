// Acceptance suite: every criterion prints one PASS/FAIL line; the exit
// code is the number of failures. Run through ctest or directly.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ntf/ao.hpp"
#include "ntf/baselines.hpp"
#include "ntf/bench.hpp"
#include "ntf/datagen.hpp"
#include "ntf/her.hpp"
#include "ntf/kernels.hpp"
#include "ntf/metrics.hpp"
#include "ntf/nnls.hpp"
#include "ntf/reference.hpp"
#include "ntf/tucker.hpp"

using namespace ntf;

namespace {

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

Eigen::MatrixXd random_matrix(int rows, int cols, std::mt19937_64& gen, double lo = 0.0,
                              double hi = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = lo + (hi - lo) * uniform01(gen);
  return m;
}

KruskalModel random_model(const std::vector<int>& shape, int r, std::mt19937_64& gen,
                          double lo = 0.0, double hi = 1.0) {
  KruskalModel m;
  for (int d : shape) m.factors.push_back(random_matrix(d, r, gen, lo, hi));
  return m;
}

DenseTensor random_tensor(const std::vector<int>& shape, std::mt19937_64& gen) {
  DenseTensor t(shape);
  for (std::int64_t i = 0; i < t.size(); ++i) t[i] = uniform01(gen);
  return t;
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max({1e-300, std::abs(got), std::abs(want)});
}

double rel_err(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
  return (got - want).norm() / std::max(1e-300, want.norm());
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<int> random_shape(std::mt19937_64& gen, int max_order = 4, int max_dim = 6) {
  const int n = 1 + static_cast<int>(gen() % static_cast<unsigned>(max_order));
  std::vector<int> shape(static_cast<std::size_t>(n));
  for (int& d : shape) d = 1 + static_cast<int>(gen() % static_cast<unsigned>(max_dim));
  return shape;
}

bool criterion_kernel_oracles(std::string& detail) {
  std::mt19937_64 gen(1001);
  double worst_exact = 0.0, worst_obj = 0.0;
  for (int it = 0; it < 100; ++it) {
    const auto shape = random_shape(gen);
    const int n = static_cast<int>(shape.size());
    const int r = 1 + static_cast<int>(gen() % 4);
    const DenseTensor t = random_tensor(shape, gen);
    const KruskalModel m = random_model(shape, r, gen);
    const GramCache cache = GramCache::create(t, m);

    for (int mode = 0; mode < n; ++mode) {
      worst_exact = std::max(worst_exact, rel_err(mttkrp(t, m, mode), ref::mttkrp(t, m, mode)));
      std::vector<Eigen::MatrixXd> others = factors_excluding(m, mode);
      if (others.empty()) others.push_back(Eigen::MatrixXd::Ones(1, r));
      const Eigen::MatrixXd b = ref::khatri_rao(others);
      worst_exact = std::max(
          worst_exact, rel_err(hadamard_of_grams(cache.grams, mode), (b.transpose() * b).eval()));
    }

    const double f_want = ref::objective(t, m);
    for (int pivot = 0; pivot < n; ++pivot)
      worst_obj = std::max(worst_obj, rel_err(objective(t, m, cache, pivot), f_want));

    // Mixed-point criterion value from cached quantities.
    KruskalModel hat = random_model(shape, r, gen);
    GramCache hc = GramCache::create(t, hat);
    hc.last_mttkrp = {n - 1, mttkrp(t, hat, n - 1)};
    const Eigen::MatrixXd a_last = random_matrix(shape[static_cast<std::size_t>(n - 1)], r, gen);
    KruskalModel mixed = hat;
    mixed.factor(n - 1) = a_last;
    worst_obj = std::max(worst_obj, rel_err(f_hat(hc, a_last), ref::objective(t, mixed)));

    // Compressed quantities on the lossless format.
    const TuckerFormat fmt = hosvd_compress(t, shape);
    for (int mode = 0; mode < n; ++mode)
      worst_obj = std::max(worst_obj, rel_err(compressed_gradient(fmt, m, mode, cache),
                                              block_gradient(t, m, mode, cache)));
    worst_obj = std::max(worst_obj, rel_err(compressed_objective(fmt, m, cache), f_want));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "worst exact-kernel rel err %.2e (tol 1e-12), objective-level %.2e (tol 1e-10)",
                worst_exact, worst_obj);
  detail = buf;
  return worst_exact <= 1e-12 && worst_obj <= 1e-10;
}

bool criterion_gradient_check(std::string& detail) {
  std::mt19937_64 gen(1002);
  double worst = 0.0;
  for (int it = 0; it < 20; ++it) {
    const std::vector<int> shape = {3, 3, 3};
    const DenseTensor t = random_tensor(shape, gen);
    KruskalModel m = random_model(shape, 2, gen);
    const GramCache cache = GramCache::create(t, m);
    const double h = 1e-6;
    for (int mode = 0; mode < 3; ++mode) {
      const Eigen::MatrixXd grad = block_gradient(t, m, mode, cache);
      Eigen::MatrixXd fd(grad.rows(), grad.cols());
      for (Eigen::Index i = 0; i < grad.rows(); ++i)
        for (Eigen::Index j = 0; j < grad.cols(); ++j) {
          m.factor(mode)(i, j) += h;
          const double up = ref::objective(t, m);
          m.factor(mode)(i, j) -= 2 * h;
          const double down = ref::objective(t, m);
          m.factor(mode)(i, j) += h;
          fd(i, j) = (up - down) / (2 * h);
        }
      worst = std::max(worst, rel_err(grad, fd));
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "worst rel err %.2e (tol 1e-5)", worst);
  detail = buf;
  return worst <= 1e-5;
}

Eigen::VectorXd brute_force_row_nnls(const Eigen::MatrixXd& g, const Eigen::VectorXd& c) {
  const int r = static_cast<int>(g.rows());
  Eigen::VectorXd best = Eigen::VectorXd::Zero(r);
  double best_obj = 0.0;
  for (unsigned mask = 1; mask < (1u << r); ++mask) {
    std::vector<int> s;
    for (int j = 0; j < r; ++j)
      if (mask & (1u << j)) s.push_back(j);
    Eigen::MatrixXd gs(s.size(), s.size());
    Eigen::VectorXd cs(s.size());
    for (std::size_t a = 0; a < s.size(); ++a) {
      cs(static_cast<Eigen::Index>(a)) = c(s[a]);
      for (std::size_t b = 0; b < s.size(); ++b)
        gs(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = g(s[a], s[b]);
    }
    const Eigen::VectorXd zs = gs.llt().solve(cs);
    if ((zs.array() < -1e-12).any()) continue;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(r);
    for (std::size_t a = 0; a < s.size(); ++a)
      x(s[a]) = std::max(0.0, zs(static_cast<Eigen::Index>(a)));
    const double obj = 0.5 * x.dot(g * x) - c.dot(x);
    if (obj < best_obj) {
      best_obj = obj;
      best = x;
    }
  }
  return best;
}

bool criterion_nnls_agreement(std::string& detail) {
  std::mt19937_64 gen(1003);
  const InnerStop full{1000, 1e-15};
  double worst_gap = 0.0, worst_kkt = 0.0, worst_oracle = 0.0;
  for (int it = 0; it < 50; ++it) {
    const int r = 2 + static_cast<int>(gen() % 3);
    const int rows = 3 + static_cast<int>(gen() % 4);
    NnlsProblem p;
    const Eigen::MatrixXd rmat = random_matrix(r + 2, r, gen, -1.0, 1.0);
    p.gram = rmat.transpose() * rmat + 0.1 * Eigen::MatrixXd::Identity(r, r);
    p.target = random_matrix(rows, r, gen, -1.0, 1.0);
    p.init = random_matrix(rows, r, gen);

    const Eigen::MatrixXd exact = active_set_solve(p);
    worst_gap = std::max(worst_gap, (ahals_solve(p, full) - exact).norm());
    worst_gap = std::max(worst_gap, (admm_solve(p, full) - exact).norm());
    worst_gap = std::max(worst_gap, (nesterov_solve(p, full) - exact).norm());
    worst_gap = std::max(worst_gap, (pgd_solve(p, full) - exact).norm());

    const Eigen::MatrixXd resid = exact * p.gram - p.target;
    worst_kkt = std::max(worst_kkt, (resid.array() * exact.array()).abs().maxCoeff());
    for (Eigen::Index i = 0; i < exact.rows(); ++i)
      for (Eigen::Index j = 0; j < exact.cols(); ++j)
        if (exact(i, j) <= 0.0) worst_kkt = std::max(worst_kkt, -resid(i, j));

    for (int i = 0; i < rows; ++i) {
      const Eigen::VectorXd want = brute_force_row_nnls(p.gram, p.target.row(i).transpose());
      worst_oracle =
          std::max(worst_oracle, (exact.row(i).transpose() - want).cwiseAbs().maxCoeff());
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "worst cross-solver gap %.2e (tol 1e-6), KKT %.2e (tol 1e-9), oracle gap %.2e",
                worst_gap, worst_kkt, worst_oracle);
  detail = buf;
  return worst_gap <= 1e-6 && worst_kkt <= 1e-9 && worst_oracle <= 1e-9;
}

bool criterion_ao_monotone(std::string& detail) {
  double worst_rise = -1e300;
  for (const NnlsSolver solver : {NnlsSolver::ahals, NnlsSolver::admm, NnlsSolver::nesterov,
                                  NnlsSolver::pgd, NnlsSolver::active_set}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      SyntheticSpec spec;
      spec.shape = {10, 9, 8};
      spec.rank = 3;
      spec.noise_sigma = 0.1;
      spec.seed = 2000 + seed;
      const auto [t, truth] = generate(spec);
      AoConfig cfg;
      cfg.solver = solver;
      cfg.max_outer_iters = 200;
      const auto [m, trace] = ao_run(t, random_init(spec.shape, 3, 3000 + seed), cfg);
      double prev = trace.f0;
      for (const auto& rec : trace.records) {
        worst_rise = std::max(worst_rise, (rec.f - prev) / trace.f0);
        prev = rec.f;
      }
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "worst normalized rise %.2e (tol 1e-12)", worst_rise);
  detail = buf;
  return worst_rise <= 1e-12;
}

bool criterion_exact_recovery(std::string& detail) {
  std::vector<double> ratios;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SyntheticSpec spec;
    spec.shape = {30, 30, 30};
    spec.rank = 5;
    spec.seed = 4000 + seed;
    const auto [t, truth] = generate(spec);
    AoConfig cfg;
    cfg.solver = NnlsSolver::ahals;
    cfg.max_outer_iters = 500;
    const auto [m, trace] = her_run(t, random_init(spec.shape, 5, 5000 + seed), cfg, HerParams{});
    ratios.push_back(trace.final_f() / t.norm_sq());
  }
  const double med = median_of(ratios);
  char buf[96];
  std::snprintf(buf, sizeof buf, "median f/||T||^2 = %.2e (tol 1e-10)", med);
  detail = buf;
  return med <= 1e-10;
}

bool criterion_her_acceleration(std::string& detail) {
  std::vector<double> ao_final, her_final;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SyntheticSpec spec;
    spec.shape = {50, 50, 50};
    spec.rank = 10;
    spec.seed = 6000 + seed;
    const auto [t, truth] = generate(spec);
    const KruskalModel init = random_init(spec.shape, 10, 7000 + seed);  // shared

    AoConfig cfg;
    cfg.solver = NnlsSolver::ahals;
    cfg.max_outer_iters = 200;
    ao_final.push_back(ao_run(t, init, cfg).second.final_f());
    her_final.push_back(her_run(t, init, cfg, HerParams{}).second.final_f());
  }
  const double ratio = median_of(her_final) / median_of(ao_final);
  char buf[128];
  std::snprintf(buf, sizeof buf, "median-f ratio her/plain = %.2e (tol 1e-2, expected order 1e-4)",
                ratio);
  detail = buf;
  return ratio <= 1e-2;
}

bool criterion_her_vs_baselines(std::string& detail) {
  std::vector<double> her_f, bro_f, gr_f, ls_f, ao_f;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SyntheticSpec spec;
    spec.shape = {50, 50, 50};
    spec.rank = 10;
    spec.seed = 8000 + seed;
    const auto [t, truth] = generate(spec);
    const KruskalModel init = random_init(spec.shape, 10, 9000 + seed);

    AoConfig cfg;
    cfg.solver = NnlsSolver::ahals;
    cfg.max_outer_iters = 100;
    her_f.push_back(her_run(t, init, cfg, HerParams{}).second.final_f());
    ao_f.push_back(ao_run(t, init, cfg).second.final_f());
    bro_f.push_back(
        extrapolated_ao_run(t, init, cfg, ExtrapolationScheme::bro, SchemeForm::modified)
            .second.final_f());
    gr_f.push_back(
        extrapolated_ao_run(t, init, cfg, ExtrapolationScheme::gr, SchemeForm::modified)
            .second.final_f());
    ls_f.push_back(
        extrapolated_ao_run(t, init, cfg, ExtrapolationScheme::ls, SchemeForm::modified)
            .second.final_f());
  }
  // A diverged baseline (inf/nan fit) counts as an unbounded median.
  const auto med = [](const std::vector<double>& v) {
    const double m = median_of(v);
    return std::isfinite(m) ? m : std::numeric_limits<double>::infinity();
  };
  const double her_med = med(her_f);
  char buf[200];
  std::snprintf(buf, sizeof buf, "median f: her %.2e vs bro %.2e, gr %.2e, ls %.2e, plain %.2e",
                her_med, med(bro_f), med(gr_f), med(ls_f), med(ao_f));
  detail = buf;
  return her_med <= med(bro_f) && her_med <= med(gr_f) && her_med <= med(ls_f) &&
         her_med <= med(ao_f);
}

bool criterion_her_bookkeeping(std::string& detail) {
  // Randomized accept/reject fuzz of the weight dynamics.
  HerParams params;
  HerState s;
  s.beta = params.beta0;
  s.beta_bar = 1.0;
  std::mt19937_64 gen(1008);
  for (int step = 0; step < 1000; ++step) {
    update_betas(s, (gen() & 1) == 0, params);
    if (!(s.beta > 0.0 && s.beta <= s.beta_bar && s.beta_bar <= 1.0)) {
      detail = "weight chain broken at step " + std::to_string(step);
      return false;
    }
  }

  // A real run with an aggressive starting weight so both branches fire.
  SyntheticSpec spec;
  spec.shape = {12, 11, 10};
  spec.rank = 3;
  spec.noise_sigma = 0.05;
  spec.seed = 1009;
  const auto [t, truth] = generate(spec);
  AoConfig cfg;
  cfg.solver = NnlsSolver::ahals;
  cfg.max_outer_iters = 300;
  HerParams aggressive;
  aggressive.beta0 = 0.9;
  bool reset_ok = true;
  int rejections = 0;
  const auto [m, trace] = her_run(t, random_init(spec.shape, 3, 1010), cfg, aggressive,
                                  [&](const HerIterationInfo& info) {
                                    if (!info.restarted) return;
                                    ++rejections;
                                    for (int i = 0; i < info.factors->order(); ++i)
                                      if ((info.hat_factors->factor(i) - info.factors->factor(i))
                                              .cwiseAbs()
                                              .maxCoeff() != 0.0)
                                        reset_ok = false;
                                  });
  double prev = trace.f0;
  bool monotone = true;
  for (const auto& rec : trace.records)
    if (!*rec.restarted) {
      if (rec.f > prev + 1e-12 * trace.f0) monotone = false;
      prev = rec.f;
    }
  char buf[128];
  std::snprintf(buf, sizeof buf, "1000-step fuzz ok, %d rejections, reset %s, accepted-f %s",
                rejections, reset_ok ? "exact" : "BROKEN", monotone ? "non-increasing" : "ROSE");
  detail = buf;
  return reset_ok && monotone && rejections > 0;
}

bool criterion_beta_zero_reduction(std::string& detail) {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SyntheticSpec spec;
    spec.shape = {8, 7, 6};
    spec.rank = 2;
    spec.noise_sigma = 0.05;
    spec.seed = 1100 + seed;
    const auto [t, truth] = generate(spec);
    const KruskalModel init = random_init(spec.shape, 2, 1200 + seed);
    AoConfig cfg;
    cfg.solver = NnlsSolver::ahals;
    cfg.max_outer_iters = 50;
    HerParams params;
    params.beta0 = 1e-300;
    const auto [am, at] = ao_run(t, init, cfg);
    const auto [hm, ht] = her_run(t, init, cfg, params);
    if (at.records.size() != ht.records.size()) {
      detail = "trace lengths differ";
      return false;
    }
    for (std::size_t i = 0; i < at.records.size(); ++i)
      worst = std::max(worst, rel_err(ht.records[i].f, at.records[i].f));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "worst trace deviation %.2e (tol 1e-12)", worst);
  detail = buf;
  return worst <= 1e-12;
}

bool criterion_metrics(std::string& detail) {
  std::mt19937_64 gen(1013);

  // Assignment vs brute force, up to r = 6.
  for (int it = 0; it < 200; ++it) {
    const int n = 2 + static_cast<int>(gen() % 5);
    const Eigen::MatrixXd cost = random_matrix(n, n, gen, -1.0, 1.0);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double want = 1e300;
    do {
      double c = 0.0;
      for (int i = 0; i < n; ++i) c += cost(i, perm[static_cast<std::size_t>(i)]);
      want = std::min(want, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (std::abs(hungarian(cost).cost - want) > 1e-9) {
      detail = "assignment mismatch at case " + std::to_string(it);
      return false;
    }
  }

  // Permutation/scaling invariance of the factor error.
  const KruskalModel truth = random_model({6, 5, 4}, 4, gen, 0.1, 1.0);
  KruskalModel est = truth;
  const std::vector<int> perm = {3, 0, 2, 1};
  for (int i = 0; i < est.order(); ++i) {
    Eigen::MatrixXd shuffled(est.factor(i).rows(), 4);
    for (int p = 0; p < 4; ++p)
      shuffled.col(p) =
          truth.factor(i).col(perm[static_cast<std::size_t>(p)]) * (0.5 + 2.0 * uniform01(gen));
    est.factor(i) = shuffled;
  }
  const double e = factor_error(est, truth);
  if (e > 1e-10) {
    detail = "factor error under permutation+rescale = " + std::to_string(e);
    return false;
  }

  // Interpolation and medians against direct evaluation.
  const std::vector<double> times = {0.0, 1.0, 2.0};
  const std::vector<double> values = {10.0, 4.0, 1.0};
  if (std::abs(interpolate_curve(times, values, {0.5})[0] - 7.0) > 1e-12 ||
      std::abs(interpolate_curve(times, values, {1.5})[0] - 2.5) > 1e-12) {
    detail = "interpolation mismatch";
    return false;
  }
  const auto med = median_curve({{1, 5}, {2, 6}, {9, 7}});
  if (med != std::vector<double>{2, 6}) {
    detail = "median mismatch";
    return false;
  }
  detail = "assignment x200, invariance, interpolation, medians all exact";
  return true;
}

bool criterion_tucker_parity(std::string& detail) {
  std::mt19937_64 gen(1014);
  const DenseTensor t0 = random_tensor({7, 6, 5}, gen);
  const TuckerFormat lossless = hosvd_compress(t0, t0.shape());
  const DenseTensor back = expand(lossless);
  double roundtrip = 0.0;
  for (std::int64_t i = 0; i < t0.size(); ++i)
    roundtrip = std::max(roundtrip, std::abs(back[i] - t0[i]));
  roundtrip /= std::sqrt(t0.norm_sq());
  if (roundtrip > 1e-10) {
    detail = "lossless roundtrip rel err " + std::to_string(roundtrip);
    return false;
  }

  SyntheticSpec spec;
  spec.shape = {20, 20, 20};
  spec.rank = 4;
  spec.noise_sigma = 0.01;
  spec.seed = 1015;
  const auto [t, truth] = generate(spec);
  const KruskalModel init = random_init(spec.shape, 4, 1016);
  const TuckerFormat fmt = hosvd_compress(t, t.shape());

  AoConfig cfg;
  cfg.solver = NnlsSolver::ahals;
  cfg.max_outer_iters = 30;
  const DenseProvider dense(t);
  const TuckerProvider compressed(fmt);
  const auto [dm, dt] = her_run(dense, init, cfg, HerParams{});
  const auto [cm, ct] = her_run(compressed, init, cfg, HerParams{});
  double worst = 0.0;
  for (std::size_t i = 0; i < dt.records.size(); ++i)
    worst = std::max(worst, rel_err(ct.records[i].f, dt.records[i].f));
  char buf[128];
  std::snprintf(buf, sizeof buf, "roundtrip %.2e (tol 1e-10), trace deviation %.2e (tol 1e-8)",
                roundtrip, worst);
  detail = buf;
  return worst <= 1e-8;
}

bool criterion_cli_reproducibility(std::string& detail) {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "ntf_acceptance_cli";
  fs::remove_all(base);

  const std::string config_text =
      "version 1\nshape 10 9 8\nrank 3\nnoise 0.02\nseed 99\nruns 2\nmax_outer_iters 10\n"
      "record_e 1\nalgorithm ao solver=ahals\nalgorithm her solver=ahals\n"
      "algorithm bro solver=ahals form=modified\n";
  std::istringstream in1(config_text), in2(config_text);
  const ExperimentConfig cfg1 = ExperimentConfig::parse(in1);
  const ExperimentConfig cfg2 = ExperimentConfig::parse(in2);
  const ExperimentResult r1 = run_experiment(cfg1, (base / "a").string());
  const ExperimentResult r2 = run_experiment(cfg2, (base / "b").string());

  const auto fe_columns = [](const fs::path& p) {
    std::ifstream in(p);
    std::string line, out;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string cell;
      int col = 0;
      while (std::getline(ss, cell, ',')) {
        if (col == 2 || col == 3) out += cell + ";";
        ++col;
      }
    }
    return out;
  };
  for (const auto& run : r1.runs) {
    const std::string name = run.algorithm + "_run" + std::to_string(run.run_index) + ".csv";
    if (fe_columns(base / "a" / name) != fe_columns(base / "b" / name)) {
      detail = "f/e columns differ for " + name;
      fs::remove_all(base);
      return false;
    }
  }

  // Shared initialization: every algorithm starts a run at the same value.
  double worst = 0.0;
  for (int j = 0; j < 2; ++j) {
    double f0 = -1.0;
    for (const auto& run : r1.runs) {
      if (run.run_index != j) continue;
      if (f0 < 0)
        f0 = run.trace.f0;
      else
        worst = std::max(worst, std::abs(run.trace.f0 - f0) / f0);
    }
  }
  fs::remove_all(base);
  char buf[128];
  std::snprintf(buf, sizeof buf, "byte-identical f/e columns; shared-f0 deviation %.2e (tol 1e-12)",
                worst);
  detail = buf;
  return worst <= 1e-12;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<bool(std::string&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {"kernel oracle suite", criterion_kernel_oracles},
      {"gradient finite-difference check", criterion_gradient_check},
      {"nnls cross-solver agreement", criterion_nnls_agreement},
      {"ao monotonicity for every solver", criterion_ao_monotone},
      {"exact recovery on noiseless data", criterion_exact_recovery},
      {"her acceleration over plain ahals", criterion_her_acceleration},
      {"her beats bro/gr/ls and plain ahals", criterion_her_vs_baselines},
      {"her weight bookkeeping", criterion_her_bookkeeping},
      {"beta -> 0 reduces to plain ao", criterion_beta_zero_reduction},
      {"metrics against brute force", criterion_metrics},
      {"tucker compression parity", criterion_tucker_parity},
      {"cli reproducibility and shared inits", criterion_cli_reproducibility},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2zu. %s (%.1fs) -- %s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].name,
                secs, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures),
              criteria.size());
  return failures;
}
