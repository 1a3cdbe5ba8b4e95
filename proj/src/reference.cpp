#include "ntf/reference.hpp"

#include <stdexcept>

namespace ntf::ref {

namespace {

// Odometer over a shape, last index fastest (matches the flat layout).
bool advance(std::vector<int>& idx, const std::vector<int>& shape) {
  for (int l = static_cast<int>(shape.size()) - 1; l >= 0; --l) {
    if (++idx[static_cast<std::size_t>(l)] < shape[static_cast<std::size_t>(l)]) return true;
    idx[static_cast<std::size_t>(l)] = 0;
  }
  return false;
}

}  // namespace

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index p = 0; p < a.rows(); ++p)
    for (Eigen::Index q = 0; q < b.rows(); ++q)
      for (Eigen::Index s = 0; s < a.cols(); ++s)
        for (Eigen::Index u = 0; u < b.cols(); ++u)
          out(p * b.rows() + q, s * b.cols() + u) = a(p, s) * b(q, u);
  return out;
}

Eigen::MatrixXd khatri_rao(const std::vector<Eigen::MatrixXd>& ms) {
  if (ms.empty()) throw std::invalid_argument("empty khatri_rao");
  Eigen::MatrixXd out = ms[0];
  for (std::size_t l = 1; l < ms.size(); ++l) {
    const Eigen::MatrixXd& b = ms[l];
    if (b.cols() != out.cols()) throw std::invalid_argument("khatri_rao column counts disagree");
    Eigen::MatrixXd next(out.rows() * b.rows(), out.cols());
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      next.col(j) = kronecker(out.col(j), b.col(j));
    out = std::move(next);
  }
  return out;
}

Eigen::MatrixXd unfold(const DenseTensor& t, int mode) {
  const auto& shape = t.shape();
  const int n = t.order();
  if (mode < 0 || mode >= n) throw std::invalid_argument("mode out of range");
  std::int64_t rest = 1;
  for (int l = 0; l < n; ++l)
    if (l != mode) rest *= shape[static_cast<std::size_t>(l)];
  Eigen::MatrixXd out(shape[static_cast<std::size_t>(mode)], rest);

  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  std::int64_t flat = 0;
  do {
    // Column index over the remaining modes, smallest mode fastest.
    std::int64_t col = 0, stride = 1;
    for (int l = 0; l < n; ++l) {
      if (l == mode) continue;
      col += idx[static_cast<std::size_t>(l)] * stride;
      stride *= shape[static_cast<std::size_t>(l)];
    }
    out(idx[static_cast<std::size_t>(mode)], col) = t[flat];
    ++flat;
  } while (advance(idx, shape));
  return out;
}

DenseTensor reconstruct(const KruskalModel& m) {
  DenseTensor t(m.shape());
  const auto& shape = t.shape();
  const int n = m.order();
  const int r = m.rank();
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  std::int64_t flat = 0;
  do {
    double v = 0.0;
    for (int p = 0; p < r; ++p) {
      double prod = 1.0;
      for (int l = 0; l < n; ++l) prod *= m.factor(l)(idx[static_cast<std::size_t>(l)], p);
      v += prod;
    }
    t[flat] = v;
    ++flat;
  } while (advance(idx, shape));
  return t;
}

Eigen::MatrixXd mttkrp(const DenseTensor& t, const KruskalModel& m, int mode) {
  std::vector<Eigen::MatrixXd> others;
  for (int l = m.order() - 1; l >= 0; --l)
    if (l != mode) others.push_back(m.factor(l));
  if (others.empty()) others.push_back(Eigen::MatrixXd::Ones(1, m.rank()));
  return unfold(t, mode) * khatri_rao(others);
}

double objective(const DenseTensor& t, const KruskalModel& m) {
  const DenseTensor x = reconstruct(m);
  double s = 0.0;
  for (std::int64_t i = 0; i < t.size(); ++i) {
    const double d = t[i] - x[i];
    s += d * d;
  }
  return 0.5 * s;
}

}  // namespace ntf::ref
