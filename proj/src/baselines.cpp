#include "ntf/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "driver_common.hpp"

namespace ntf {

double bro_omega(int iter, BroState& state, bool error_increased) {
  if (iter < 1) throw std::invalid_argument("iterations are 1-based");
  if (error_increased) {
    state.h += 1;
    state.no_increase_streak = 0;
  } else {
    state.no_increase_streak += 1;
  }
  state.omega = std::pow(static_cast<double>(iter), 1.0 / state.h) - 1.0;
  return state.omega;
}

double gr_omega_block(double grad_now_norm, double grad_prev_norm) {
  if (grad_prev_norm <= 0.0) return 0.0;
  return grad_now_norm / grad_prev_norm;
}

double ls_omega_block(const Eigen::MatrixXd& a_new, const Eigen::MatrixXd& a_prev,
                      const Eigen::MatrixXd& g, const Eigen::MatrixXd& c) {
  const Eigen::MatrixXd d = a_new - a_prev;
  const double a = 0.5 * (gram(d).array() * g.array()).sum();
  if (a <= 1e-14 * g.norm()) return 0.0;
  const double b = (d.array() * (a_new * g - c).array()).sum();
  return -b / (2.0 * a);
}

double momentum_next(double t) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)); }

double momentum_weight(double w_hat, double delta_w, double l_prev, double l_now) {
  return std::min(w_hat, delta_w * std::sqrt(l_prev / l_now));
}

namespace {

std::vector<Eigen::MatrixXd> grams_of(const KruskalModel& m) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(m.factors.size());
  for (const auto& a : m.factors) out.push_back(gram(a));
  return out;
}

// Pivot-mode objective of a model whose last-block quantities are not
// cached: one extra MTTKRP.
double full_pivot_objective(const ObjectiveProvider& data, const KruskalModel& m,
                            const std::vector<Eigen::MatrixXd>& grams) {
  const int last = m.order() - 1;
  return cheap_objective(data.norm_sq(), m.factor(last), hadamard_of_grams(grams, last),
                         data.mttkrp(m, last));
}

}  // namespace

std::pair<KruskalModel, RunTrace> extrapolated_ao_run(const ObjectiveProvider& data,
                                                      const KruskalModel& init,
                                                      const AoConfig& cfg,
                                                      ExtrapolationScheme scheme,
                                                      SchemeForm form,
                                                      const SchemeOptions& options) {
  detail::check_run_inputs(data, init, cfg);
  if (scheme == ExtrapolationScheme::ls && form == SchemeForm::original)
    throw std::invalid_argument(
        "original-form LS needs a degree-2N polynomial line search and is not supported");
  const int n = init.order();
  const double nsq = data.norm_sq();

  KruskalModel model = init;  // kept iterate; extrapolation may leave the feasible set
  std::vector<Eigen::MatrixXd> grams = grams_of(model);

  BroState bro;
  bool last_error_increased = false;
  std::vector<double> gr_prev_norm(static_cast<std::size_t>(n), -1.0);
  double gr_prev_total = -1.0;

  RunTrace trace;
  trace.f0 = detail::pivot_objective(data, model, grams);
  double err_prev = trace.f0;  // fit error of the last kept iterate

  detail::RunClock clock;
  for (int k = 1;; ++k) {
    // Bro's weight is global; h advances on the previous iteration's signal.
    double omega_bro = 0.0;
    if (scheme == ExtrapolationScheme::bro) {
      omega_bro = bro_omega(k, bro, last_error_increased);
      if (k <= options.bro_suppress_iters) omega_bro = 0.0;
    }
    if (options.force_zero_omega) omega_bro = 0.0;

    const KruskalModel prev = model;  // direction base for the original form
    KruskalModel solved = model;      // the sweep's un-extrapolated solves
    Eigen::MatrixXd last_gram, last_target;
    double omega_recorded = omega_bro;
    double gr_total = 0.0;

    for (int i = 0; i < n; ++i) {
      NnlsProblem p;
      p.gram = hadamard_of_grams(grams, i);
      p.target = data.mttkrp(model, i);
      p.init = model.factor(i).cwiseMax(0.0);
      Eigen::MatrixXd w = solve_nnls(cfg.solver, p, cfg.inner_stop);
      solved.factor(i) = w;

      if (form == SchemeForm::modified) {
        double omega = 0.0;
        const double grad_norm = (w * p.gram - p.target).norm();
        switch (scheme) {
          case ExtrapolationScheme::bro:
            omega = omega_bro;
            break;
          case ExtrapolationScheme::gr:
            omega = gr_omega_block(grad_norm, gr_prev_norm[static_cast<std::size_t>(i)]);
            break;
          case ExtrapolationScheme::ls:
            omega = ls_omega_block(w, model.factor(i), p.gram, p.target);
            break;
        }
        gr_prev_norm[static_cast<std::size_t>(i)] = grad_norm;
        if (options.force_zero_omega) omega = 0.0;
        omega_recorded = omega;
        model.factor(i) = w + omega * (w - model.factor(i));
      } else {
        gr_total += (w * p.gram - p.target).squaredNorm();
        model.factor(i) = std::move(w);
      }
      grams[static_cast<std::size_t>(i)] = gram(model.factor(i));
      if (i == n - 1) {
        last_gram = std::move(p.gram);
        last_target = std::move(p.target);
      }
    }

    // The extrapolated point survives only while the fit error keeps
    // falling relative to the previous iteration; on an increase it is
    // abandoned for the plain solves of this sweep.
    double f_kept = 0.0;
    bool error_increased = false;
    bool abandoned = false;

    if (form == SchemeForm::modified) {
      // The free sweep quantities sit at the extrapolated blocks.
      const double f_ext = cheap_objective(nsq, model.factor(n - 1), last_gram, last_target);
      error_increased = f_ext > err_prev;
      if (error_increased) {
        abandoned = true;
        model = solved;
        grams = grams_of(model);
        f_kept = full_pivot_objective(data, model, grams);
      } else {
        f_kept = f_ext;
      }
    } else {
      // Plain sweep finished; model == solved here.
      const double f_plain = cheap_objective(nsq, model.factor(n - 1), last_gram, last_target);
      double omega = omega_bro;
      if (scheme == ExtrapolationScheme::gr) {
        omega = gr_prev_total > 0.0 ? std::sqrt(gr_total / gr_prev_total) : 0.0;
        gr_prev_total = gr_total;
        if (options.force_zero_omega) omega = 0.0;
      }
      omega_recorded = omega;
      if (omega != 0.0) {
        KruskalModel ext = solved;
        for (int i = 0; i < n; ++i)
          ext.factor(i) = solved.factor(i) + omega * (solved.factor(i) - prev.factor(i));
        const std::vector<Eigen::MatrixXd> egrams = grams_of(ext);
        const double f_ext = full_pivot_objective(data, ext, egrams);
        error_increased = f_ext > err_prev;
        if (error_increased) {
          abandoned = true;
          f_kept = f_plain;
        } else {
          model = std::move(ext);
          grams = egrams;
          f_kept = f_ext;
        }
      } else {
        f_kept = f_plain;
        error_increased = f_plain > err_prev;
      }
    }
    err_prev = f_kept;

    TraceRecord rec;
    rec.iter = k;
    rec.time_s = clock.elapsed();
    rec.f = f_kept;
    rec.e = detail::maybe_factor_error(cfg, model);
    rec.restarted = abandoned;
    rec.beta = omega_recorded;
    trace.records.push_back(std::move(rec));
    last_error_increased = error_increased;

    if (detail::budget_exhausted(cfg, k, trace.records.back().time_s)) break;
  }
  return {std::move(model), std::move(trace)};
}

std::pair<KruskalModel, RunTrace> extrapolated_ao_run(const DenseTensor& t,
                                                      const KruskalModel& init,
                                                      const AoConfig& cfg,
                                                      ExtrapolationScheme scheme,
                                                      SchemeForm form,
                                                      const SchemeOptions& options) {
  return extrapolated_ao_run(DenseProvider(t), init, cfg, scheme, form, options);
}

std::pair<KruskalModel, RunTrace> apg_run(const ObjectiveProvider& data,
                                          const KruskalModel& init, const AoConfig& cfg,
                                          double delta_w) {
  detail::check_run_inputs(data, init, cfg);
  const int n = init.order();
  const double nsq = data.norm_sq();

  KruskalModel model = init;
  std::vector<Eigen::MatrixXd> grams = grams_of(model);

  MomentumState mom;
  mom.delta_w = delta_w;
  mom.prev2_factors = init.factors;  // A_{-1} = A_0
  mom.prev_lipschitz.assign(static_cast<std::size_t>(n), -1.0);

  RunTrace trace;
  trace.f0 = detail::pivot_objective(data, model, grams);
  double f_prev = trace.f0;

  detail::RunClock clock;
  for (int k = 1;; ++k) {
    const double t_next = momentum_next(mom.t);
    const double w_hat = (mom.t - 1.0) / t_next;
    mom.t = t_next;

    const KruskalModel snapshot = model;  // A_{k-1}
    double f_k = 0.0;
    for (int i = 0; i < n; ++i) {
      const Eigen::MatrixXd g = hadamard_of_grams(grams, i);
      const Eigen::MatrixXd c = data.mttkrp(model, i);
      const double lip = spectral_norm(g);
      if (lip <= 0.0) throw std::runtime_error("apg_run: degenerate block");
      double& lip_prev = mom.prev_lipschitz[static_cast<std::size_t>(i)];
      const double w = momentum_weight(w_hat, mom.delta_w, lip_prev < 0.0 ? lip : lip_prev, lip);
      const Eigen::MatrixXd ahat =
          model.factor(i) + w * (model.factor(i) - mom.prev2_factors[static_cast<std::size_t>(i)]);
      Eigen::MatrixXd anew = (ahat - (ahat * g - c) / lip).cwiseMax(0.0);
      if (i == n - 1) f_k = cheap_objective(nsq, anew, g, c);
      model.factor(i) = std::move(anew);
      grams[static_cast<std::size_t>(i)] = gram(model.factor(i));
      lip_prev = lip;
    }

    bool restarted = false;
    if (f_k > f_prev) {
      // Redo the sweep from the previous iterates, extrapolation off.
      restarted = true;
      model = snapshot;
      grams = grams_of(model);
      for (int i = 0; i < n; ++i) {
        const Eigen::MatrixXd g = hadamard_of_grams(grams, i);
        const Eigen::MatrixXd c = data.mttkrp(model, i);
        const double lip = spectral_norm(g);
        Eigen::MatrixXd anew = (model.factor(i) - (model.factor(i) * g - c) / lip).cwiseMax(0.0);
        if (i == n - 1) f_k = cheap_objective(nsq, anew, g, c);
        model.factor(i) = std::move(anew);
        grams[static_cast<std::size_t>(i)] = gram(model.factor(i));
        mom.prev_lipschitz[static_cast<std::size_t>(i)] = lip;
      }
    }
    mom.prev2_factors = snapshot.factors;
    f_prev = f_k;

    TraceRecord rec;
    rec.iter = k;
    rec.time_s = clock.elapsed();
    rec.f = f_k;
    rec.e = detail::maybe_factor_error(cfg, model);
    rec.restarted = restarted;
    rec.beta = w_hat;
    trace.records.push_back(std::move(rec));

    if (detail::budget_exhausted(cfg, k, trace.records.back().time_s)) break;
  }
  return {std::move(model), std::move(trace)};
}

std::pair<KruskalModel, RunTrace> apg_run(const DenseTensor& t, const KruskalModel& init,
                                          const AoConfig& cfg, double delta_w) {
  return apg_run(DenseProvider(t), init, cfg, delta_w);
}

std::pair<KruskalModel, RunTrace> ibpg_run(const ObjectiveProvider& data,
                                           const KruskalModel& init, const AoConfig& cfg,
                                           double delta_w, double inertia_multiplier) {
  detail::check_run_inputs(data, init, cfg);
  const int n = init.order();
  const double nsq = data.norm_sq();

  KruskalModel model = init;
  std::vector<Eigen::MatrixXd> grams = grams_of(model);

  MomentumState mom;
  mom.delta_w = delta_w;
  mom.inertia_multiplier = inertia_multiplier;
  mom.prev_factors = init.factors;  // A_{-1} = A_0
  mom.prev_lipschitz.assign(static_cast<std::size_t>(n), -1.0);

  RunTrace trace;
  trace.f0 = detail::pivot_objective(data, model, grams);

  detail::RunClock clock;
  for (int k = 1;; ++k) {
    const double t_next = momentum_next(mom.t);
    const double w_hat = (mom.t - 1.0) / t_next;
    mom.t = t_next;

    double f_k = 0.0;
    for (int i = 0; i < n; ++i) {
      const Eigen::MatrixXd g = hadamard_of_grams(grams, i);
      const Eigen::MatrixXd c = data.mttkrp(model, i);
      const double lip = spectral_norm(g);
      if (lip <= 0.0) throw std::runtime_error("ibpg_run: degenerate block");
      double& lip_prev = mom.prev_lipschitz[static_cast<std::size_t>(i)];
      const double w = momentum_weight(w_hat, mom.delta_w, lip_prev < 0.0 ? lip : lip_prev, lip);
      lip_prev = lip;

      // Inner repeat: gradient point and inertial point share the same
      // (G, C), so the data products are reused across the repeats.
      Eigen::MatrixXd cur = model.factor(i);
      Eigen::MatrixXd& prev = mom.prev_factors[static_cast<std::size_t>(i)];
      double first_change = -1.0;
      for (int s = 0; s < cfg.inner_stop.max_iters; ++s) {
        const Eigen::MatrixXd dir = cur - prev;
        const Eigen::MatrixXd grad_point = cur + w * dir;
        const Eigen::MatrixXd inertial_point = cur + inertia_multiplier * w * dir;
        prev = cur;
        cur = (inertial_point - (grad_point * g - c) / lip).cwiseMax(0.0);
        const double change = (cur - prev).norm();
        if (s == 0) first_change = change;
        if (change <= cfg.inner_stop.rel_change_tol * first_change) break;
      }
      if (i == n - 1) f_k = cheap_objective(nsq, cur, g, c);
      model.factor(i) = std::move(cur);
      grams[static_cast<std::size_t>(i)] = gram(model.factor(i));
    }

    TraceRecord rec;
    rec.iter = k;
    rec.time_s = clock.elapsed();
    rec.f = f_k;
    rec.e = detail::maybe_factor_error(cfg, model);
    rec.beta = w_hat;
    trace.records.push_back(std::move(rec));

    if (detail::budget_exhausted(cfg, k, trace.records.back().time_s)) break;
  }
  return {std::move(model), std::move(trace)};
}

std::pair<KruskalModel, RunTrace> ibpg_run(const DenseTensor& t, const KruskalModel& init,
                                           const AoConfig& cfg, double delta_w,
                                           double inertia_multiplier) {
  return ibpg_run(DenseProvider(t), init, cfg, delta_w, inertia_multiplier);
}

}  // namespace ntf
