#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ntf/ao.hpp"
#include "ntf/datagen.hpp"
#include "ntf/her.hpp"
#include "ntf/kernels.hpp"
#include "ntf/metrics.hpp"
#include "ntf/reference.hpp"
#include "test_support.hpp"

using namespace ntf;
using namespace ntf::testing;

TEST_CASE("extrapolate_block") {
  std::mt19937_64 gen(1);
  const Eigen::MatrixXd a = random_matrix(3, 2, gen);
  const Eigen::MatrixXd b = random_matrix(3, 2, gen);
  CHECK(rel_err(extrapolate_block(a, b, 0.0), a) == 0.0);
  CHECK(rel_err(extrapolate_block(a, a, 0.7), a) == 0.0);

  Eigen::MatrixXd x(1, 1), y(1, 1);
  x << 1.0;
  y << 3.0;
  CHECK(extrapolate_block(x, y, 0.5)(0, 0) == 0.0);  // projection clips
}

TEST_CASE("update_betas arithmetic") {
  HerParams params;  // defaults: 0.5 / 1.05 / 1.01 / 1.5
  params.validate();

  HerState s;
  s.beta = 0.5;
  s.beta_bar = 1.0;
  update_betas(s, /*restarted=*/true, params);
  CHECK(s.beta == doctest::Approx(0.5 / 1.5));
  CHECK(s.beta_bar == doctest::Approx(0.5));

  s.beta = 0.5;
  s.beta_bar = 1.0;
  update_betas(s, /*restarted=*/false, params);
  CHECK(s.beta == doctest::Approx(0.525));
  CHECK(s.beta_bar == doctest::Approx(1.0));

  // The previous cap binds the growth.
  s.beta = 0.99;
  s.beta_bar = 1.0;
  update_betas(s, /*restarted=*/false, params);
  CHECK(s.beta == doctest::Approx(1.0));
  CHECK(s.beta_bar == doctest::Approx(1.0));
}

TEST_CASE("parameter chain survives a randomized accept/reject fuzz") {
  HerParams params;
  HerState s;
  s.beta = params.beta0;
  s.beta_bar = 1.0;
  std::mt19937_64 gen(2);
  for (int step = 0; step < 1000; ++step) {
    update_betas(s, (gen() & 1) == 0, params);
    CHECK(s.beta > 0.0);
    CHECK(s.beta <= s.beta_bar);
    CHECK(s.beta_bar <= 1.0);
  }
}

TEST_CASE("parameter validation") {
  HerParams p;
  p.beta0 = 0.0;
  CHECK_THROWS(p.validate());
  p = HerParams{};
  p.gamma_bar = 1.0;  // must be strictly above 1
  CHECK_THROWS(p.validate());
  p = HerParams{};
  p.eta = 1.01;  // below gamma
  CHECK_THROWS(p.validate());
}

TEST_CASE("f_hat equals the full objective at the mixed point") {
  std::mt19937_64 gen(3);

  // Exact factorization with hat == plain: zero.
  const KruskalModel exact = random_model({4, 3, 3}, 2, gen, 0.1, 1.0);
  const DenseTensor t = reconstruct(exact);
  GramCache cache = GramCache::create(t, exact);
  cache.last_mttkrp = {2, mttkrp(t, exact, 2)};
  CHECK(std::abs(f_hat(cache, exact.factor(2))) <= 1e-12 * t.norm_sq());

  // Zero last factor: half the tensor norm.
  CHECK(f_hat(cache, Eigen::MatrixXd::Zero(3, 2)) ==
        doctest::Approx(0.5 * t.norm_sq()).epsilon(1e-14));

  // Random mixed point against the residual oracle.
  for (int it = 0; it < 20; ++it) {
    const std::vector<int> shape = {3, 4, 2, 3};
    KruskalModel hat = random_model(shape, 3, gen);
    const DenseTensor rt = random_tensor(shape, gen);
    GramCache hc = GramCache::create(rt, hat);
    hc.last_mttkrp = {3, mttkrp(rt, hat, 3)};
    const Eigen::MatrixXd a_last = random_matrix(3, 3, gen);
    KruskalModel mixed = hat;
    mixed.factor(3) = a_last;
    CHECK(rel_err(f_hat(hc, a_last), ref::objective(rt, mixed)) < 1e-10);
  }

  // The helper refuses a cache without the last block's MTTKRP.
  GramCache stale = GramCache::create(t, exact);
  CHECK_THROWS(f_hat(stale, exact.factor(2)));
}

TEST_CASE("a numerically null beta reduces the scheme to plain alternation") {
  for (std::uint64_t seed : {101u, 102u, 103u, 104u, 105u}) {
    SyntheticSpec spec;
    spec.shape = {6, 5, 4};
    spec.rank = 2;
    spec.noise_sigma = 0.05;
    spec.seed = seed;
    const auto [t, truth] = generate(spec);
    const KruskalModel init = random_init(spec.shape, 2, seed + 1000);

    AoConfig cfg;
    cfg.solver = NnlsSolver::ahals;
    cfg.max_outer_iters = 50;
    HerParams params;
    params.beta0 = 1e-300;

    const auto [am, at] = ao_run(t, init, cfg);
    const auto [hm, ht] = her_run(t, init, cfg, params);
    REQUIRE(at.records.size() == ht.records.size());
    for (std::size_t i = 0; i < at.records.size(); ++i)
      CHECK(rel_err(ht.records[i].f, at.records[i].f) < 1e-12);
  }
}

TEST_CASE("bookkeeping on a real run: acceptance, rejection, feasibility") {
  SyntheticSpec spec;
  spec.shape = {8, 7, 6};
  spec.rank = 3;
  spec.noise_sigma = 0.05;
  spec.seed = 7;
  const auto [t, truth] = generate(spec);
  const KruskalModel init = random_init(spec.shape, 3, 71);

  AoConfig cfg;
  cfg.solver = NnlsSolver::ahals;
  cfg.max_outer_iters = 200;
  HerParams params;

  int rejected_seen = 0;
  const auto [model, trace] =
      her_run(t, init, cfg, params, [&](const HerIterationInfo& info) {
        CHECK(info.factors->is_nonnegative());
        CHECK(info.hat_factors->is_nonnegative());
        if (info.restarted) {
          ++rejected_seen;
          // The extrapolated twins collapse onto the accepted factors.
          for (int i = 0; i < info.factors->order(); ++i)
            CHECK((info.hat_factors->factor(i) - info.factors->factor(i))
                      .cwiseAbs()
                      .maxCoeff() == 0.0);
        }
      });
  trace.validate();
  CHECK(model.is_nonnegative());
  CHECK(trace.restart_count() == rejected_seen);

  // The stored criterion value never rises across accepted iterations.
  double prev_accepted = trace.f0;
  for (const auto& rec : trace.records) {
    REQUIRE(rec.restarted.has_value());
    REQUIRE(rec.beta.has_value());
    if (!*rec.restarted) {
      CHECK(rec.f <= prev_accepted + 1e-12 * trace.f0);
      prev_accepted = rec.f;
    }
  }
}

TEST_CASE("extrapolation beats plain alternation on a noiseless instance") {
  std::vector<double> ao_final, her_final;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SyntheticSpec spec;
    spec.shape = {15, 15, 15};
    spec.rank = 3;
    spec.seed = 200 + seed;
    const auto [t, truth] = generate(spec);
    const KruskalModel init = random_init(spec.shape, 3, 300 + seed);

    AoConfig cfg;
    cfg.solver = NnlsSolver::ahals;
    cfg.max_outer_iters = 150;
    const auto [am, at] = ao_run(t, init, cfg);
    const auto [hm, ht] = her_run(t, init, cfg, HerParams{});
    ao_final.push_back(at.final_f());
    her_final.push_back(ht.final_f());
  }
  const auto med = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  CHECK(med(her_final) < med(ao_final));
}

TEST_CASE("drivers handle matrix and fourth-order inputs") {
  // Order 2 (nonnegative matrix factorization) and order 4 exercise the
  // empty- and long-side Khatri-Rao paths inside the sweeps.
  for (const std::vector<int>& shape :
       {std::vector<int>{12, 9}, std::vector<int>{5, 4, 3, 6}}) {
    SyntheticSpec spec;
    spec.shape = shape;
    spec.rank = 2;
    spec.noise_sigma = 0.01;
    spec.seed = 400 + shape.size();
    const auto [t, truth] = generate(spec);
    const KruskalModel init = random_init(shape, 2, 500 + shape.size());
    AoConfig cfg;
    cfg.solver = NnlsSolver::ahals;
    cfg.max_outer_iters = 40;
    const auto [am, at] = ao_run(t, init, cfg);
    const auto [hm, ht] = her_run(t, init, cfg, HerParams{});
    at.validate();
    ht.validate();
    CHECK(at.final_f() < at.f0);
    CHECK(ht.final_f() < ht.f0);
    CHECK(hm.is_nonnegative());
  }
}

TEST_CASE("ill-conditioned instances run to completion") {
  SyntheticSpec spec;
  spec.shape = {15, 12, 10};
  spec.rank = 4;
  spec.noise_sigma = 0.001;
  spec.ill_conditioned = true;
  spec.seed = 97;
  const auto [t, truth] = generate(spec);
  const KruskalModel init = random_init(spec.shape, 4, 98);
  AoConfig cfg;
  cfg.solver = NnlsSolver::ahals;
  cfg.max_outer_iters = 100;
  const auto [am, at] = ao_run(t, init, cfg);
  const auto [hm, ht] = her_run(t, init, cfg, HerParams{});
  at.validate();
  ht.validate();
  for (const auto& rec : ht.records) CHECK(std::isfinite(rec.f));
  CHECK(ht.final_f() < ht.f0);
}

TEST_CASE("identical inputs give identical traces") {
  SyntheticSpec spec;
  spec.shape = {6, 6, 6};
  spec.rank = 2;
  spec.noise_sigma = 0.01;
  spec.seed = 83;
  const auto [t, truth] = generate(spec);
  const KruskalModel init = random_init(spec.shape, 2, 89);
  AoConfig cfg;
  cfg.solver = NnlsSolver::ahals;
  cfg.max_outer_iters = 40;

  const auto [m1, t1] = her_run(t, init, cfg, HerParams{});
  const auto [m2, t2] = her_run(t, init, cfg, HerParams{});
  REQUIRE(t1.records.size() == t2.records.size());
  for (std::size_t i = 0; i < t1.records.size(); ++i) {
    CHECK(t1.records[i].f == t2.records[i].f);
    CHECK(*t1.records[i].beta == *t2.records[i].beta);
    CHECK(*t1.records[i].restarted == *t2.records[i].restarted);
  }
}
