#include "ntf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ntf {

Eigen::MatrixXd normalize_columns(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd out = a;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (norm > 0.0) out.col(j) /= norm;
  }
  return out;
}

PermutationAssignment hungarian(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) throw std::invalid_argument("cost matrix must be square");
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();

  // Shortest augmenting path with dual potentials, 1-based work arrays.
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(n) + 1, 0);  // column -> row
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  PermutationAssignment out;
  out.mapping.assign(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    if (match[static_cast<std::size_t>(j)] > 0)
      out.mapping[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
  for (int i = 0; i < n; ++i) out.cost += cost(i, out.mapping[static_cast<std::size_t>(i)]);
  return out;
}

double factor_error(const KruskalModel& est, const KruskalModel& truth) {
  if (est.order() != truth.order() || est.rank() != truth.rank() ||
      est.shape() != truth.shape())
    throw std::invalid_argument("factor_error: model shapes disagree");
  const int n = est.order();
  const int r = est.rank();

  std::vector<Eigen::MatrixXd> ne(static_cast<std::size_t>(n)), nt(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ne[static_cast<std::size_t>(i)] = normalize_columns(est.factor(i));
    nt[static_cast<std::size_t>(i)] = normalize_columns(truth.factor(i));
  }

  // One permutation for all modes: summed squared column distances.
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(r, r);
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < r; ++p)
      for (int q = 0; q < r; ++q)
        cost(p, q) += (ne[static_cast<std::size_t>(i)].col(p) -
                       nt[static_cast<std::size_t>(i)].col(q))
                          .squaredNorm();
  const PermutationAssignment pi = hungarian(cost);

  double err = 0.0;
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd permuted(est.factor(i).rows(), r);
    for (int p = 0; p < r; ++p)
      permuted.col(pi.mapping[static_cast<std::size_t>(p)]) = ne[static_cast<std::size_t>(i)].col(p);
    err += (nt[static_cast<std::size_t>(i)] - permuted).norm() /
           nt[static_cast<std::size_t>(i)].norm();
  }
  return err / n;
}

std::vector<double> interpolate_curve(const std::vector<double>& times,
                                      const std::vector<double>& values,
                                      const std::vector<double>& grid) {
  if (times.empty() || times.size() != values.size())
    throw std::invalid_argument("interpolate_curve: empty or mismatched curve");
  std::vector<double> out;
  out.reserve(grid.size());
  for (double g : grid) {
    if (g < times.front() || g > times.back())
      throw std::invalid_argument("interpolate_curve: grid point outside the trace span");
    auto hi = std::lower_bound(times.begin(), times.end(), g);
    if (hi == times.begin()) {
      out.push_back(values.front());
      continue;
    }
    const std::size_t j = static_cast<std::size_t>(hi - times.begin());
    if (j == times.size() || times[j] == g) {
      out.push_back(values[std::min(j, values.size() - 1)]);
      continue;
    }
    const double t0 = times[j - 1], t1 = times[j];
    const double w = (g - t0) / (t1 - t0);
    out.push_back((1.0 - w) * values[j - 1] + w * values[j]);
  }
  return out;
}

std::vector<double> interpolate_curve(const RunTrace& trace, const std::vector<double>& grid) {
  std::vector<double> times, values;
  times.reserve(trace.records.size());
  values.reserve(trace.records.size());
  for (const auto& rec : trace.records) {
    times.push_back(rec.time_s);
    values.push_back(rec.f);
  }
  return interpolate_curve(times, values, grid);
}

std::vector<double> median_curve(const std::vector<std::vector<double>>& curves) {
  if (curves.empty()) throw std::invalid_argument("median_curve: no curves");
  const std::size_t len = curves[0].size();
  for (const auto& c : curves)
    if (c.size() != len) throw std::invalid_argument("median_curve: lengths disagree");
  std::vector<double> out(len);
  std::vector<double> column(curves.size());
  for (std::size_t k = 0; k < len; ++k) {
    for (std::size_t c = 0; c < curves.size(); ++c) column[c] = curves[c][k];
    std::sort(column.begin(), column.end());
    const std::size_t m = column.size() / 2;
    out[k] = column.size() % 2 == 1 ? column[m] : 0.5 * (column[m - 1] + column[m]);
  }
  return out;
}

}  // namespace ntf
