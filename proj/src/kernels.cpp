#include "ntf/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace ntf {

namespace {

// (left, mid, right) view of the flat layout around `mode`:
// flat = (left * I_mode + j_mode) * R + right.
struct ModeSplit {
  std::int64_t left = 1;
  std::int64_t mid = 1;
  std::int64_t right = 1;
};

ModeSplit split_around(const std::vector<int>& shape, int mode) {
  if (mode < 0 || mode >= static_cast<int>(shape.size()))
    throw std::invalid_argument("mode out of range");
  ModeSplit s;
  for (int l = 0; l < mode; ++l) s.left *= shape[static_cast<std::size_t>(l)];
  s.mid = shape[static_cast<std::size_t>(mode)];
  for (int l = mode + 1; l < static_cast<int>(shape.size()); ++l)
    s.right *= shape[static_cast<std::size_t>(l)];
  return s;
}

// Column index of each left (resp. right) block in the unfolding, where the
// smallest mode runs fastest. `left` enumerates modes < mode in row-major
// order, so its digits must be re-weighted; same for `right`.
std::vector<std::int64_t> unfold_col_offsets_left(const std::vector<int>& shape, int mode) {
  std::int64_t count = 1;
  for (int l = 0; l < mode; ++l) count *= shape[static_cast<std::size_t>(l)];
  std::vector<std::int64_t> off(static_cast<std::size_t>(count));
  // col stride of mode l (< mode) is prod_{m < l} I_m
  std::vector<std::int64_t> stride(static_cast<std::size_t>(mode), 1);
  for (int l = 1; l < mode; ++l)
    stride[static_cast<std::size_t>(l)] = stride[static_cast<std::size_t>(l - 1)] *
                                          shape[static_cast<std::size_t>(l - 1)];
  std::vector<int> idx(static_cast<std::size_t>(mode), 0);
  for (std::int64_t k = 0; k < count; ++k) {
    std::int64_t c = 0;
    for (int l = 0; l < mode; ++l) c += idx[static_cast<std::size_t>(l)] * stride[static_cast<std::size_t>(l)];
    off[static_cast<std::size_t>(k)] = c;
    for (int l = mode - 1; l >= 0; --l) {  // row-major odometer, last digit fastest
      if (++idx[static_cast<std::size_t>(l)] < shape[static_cast<std::size_t>(l)]) break;
      idx[static_cast<std::size_t>(l)] = 0;
    }
  }
  return off;
}

std::vector<std::int64_t> unfold_col_offsets_right(const std::vector<int>& shape, int mode) {
  const int n = static_cast<int>(shape.size());
  std::int64_t count = 1, base = 1;
  for (int l = mode + 1; l < n; ++l) count *= shape[static_cast<std::size_t>(l)];
  for (int l = 0; l < mode; ++l) base *= shape[static_cast<std::size_t>(l)];
  std::vector<std::int64_t> off(static_cast<std::size_t>(count));
  // col stride of mode l (> mode) is base * prod_{mode < m < l} I_m
  std::vector<std::int64_t> stride(static_cast<std::size_t>(n), 0);
  std::int64_t s = base;
  for (int l = mode + 1; l < n; ++l) {
    stride[static_cast<std::size_t>(l)] = s;
    s *= shape[static_cast<std::size_t>(l)];
  }
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (std::int64_t k = 0; k < count; ++k) {
    std::int64_t c = 0;
    for (int l = mode + 1; l < n; ++l) c += idx[static_cast<std::size_t>(l)] * stride[static_cast<std::size_t>(l)];
    off[static_cast<std::size_t>(k)] = c;
    for (int l = n - 1; l > mode; --l) {
      if (++idx[static_cast<std::size_t>(l)] < shape[static_cast<std::size_t>(l)]) break;
      idx[static_cast<std::size_t>(l)] = 0;
    }
  }
  return off;
}

}  // namespace

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index p = 0; p < a.rows(); ++p)
    for (Eigen::Index q = 0; q < a.cols(); ++q)
      out.block(p * b.rows(), q * b.cols(), b.rows(), b.cols()) = a(p, q) * b;
  return out;
}

Eigen::MatrixXd khatri_rao(const std::vector<Eigen::MatrixXd>& ms) {
  if (ms.empty()) throw std::invalid_argument("khatri_rao of an empty list needs a column count");
  const Eigen::Index r = ms[0].cols();
  std::int64_t rows = 1;
  for (const auto& m : ms) {
    if (m.cols() != r) throw std::invalid_argument("khatri_rao column counts disagree");
    rows *= m.rows();
  }
  Eigen::MatrixXd out(rows, r);
  const int k = static_cast<int>(ms.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t row = 0; row < rows; ++row) {
    std::int64_t rest = row;
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Ones(r);
    for (int l = k - 1; l >= 0; --l) {  // last listed matrix's row runs fastest
      const auto& m = ms[static_cast<std::size_t>(l)];
      const std::int64_t j = rest % m.rows();
      rest /= m.rows();
      acc.array() *= m.row(j).array();
    }
    out.row(row) = acc;
  }
  return out;
}

std::vector<Eigen::MatrixXd> factors_excluding(const KruskalModel& m, int mode) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(m.order() > 0 ? m.order() - 1 : 0));
  for (int l = m.order() - 1; l >= 0; --l)
    if (l != mode) out.push_back(m.factor(l));
  return out;
}

Eigen::MatrixXd unfold(const DenseTensor& t, int mode) {
  const ModeSplit s = split_around(t.shape(), mode);
  const auto colL = unfold_col_offsets_left(t.shape(), mode);
  const auto colR = unfold_col_offsets_right(t.shape(), mode);
  Eigen::MatrixXd out(s.mid, s.left * s.right);
  const double* data = t.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t left = 0; left < s.left; ++left) {
    for (std::int64_t m = 0; m < s.mid; ++m) {
      const double* src = data + (left * s.mid + m) * s.right;
      const std::int64_t cl = colL[static_cast<std::size_t>(left)];
      for (std::int64_t right = 0; right < s.right; ++right)
        out(m, cl + colR[static_cast<std::size_t>(right)]) = src[right];
    }
  }
  return out;
}

DenseTensor fold(const Eigen::MatrixXd& m, int mode, const std::vector<int>& shape) {
  const ModeSplit s = split_around(shape, mode);
  if (m.rows() != s.mid || m.cols() != s.left * s.right)
    throw std::invalid_argument("fold: matrix shape does not match target shape");
  const auto colL = unfold_col_offsets_left(shape, mode);
  const auto colR = unfold_col_offsets_right(shape, mode);
  DenseTensor t(shape);
  double* data = t.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t left = 0; left < s.left; ++left) {
    for (std::int64_t mid = 0; mid < s.mid; ++mid) {
      double* dst = data + (left * s.mid + mid) * s.right;
      const std::int64_t cl = colL[static_cast<std::size_t>(left)];
      for (std::int64_t right = 0; right < s.right; ++right)
        dst[right] = m(mid, cl + colR[static_cast<std::size_t>(right)]);
    }
  }
  return t;
}

Eigen::MatrixXd mttkrp(const DenseTensor& t, const KruskalModel& m, int mode) {
  if (!m.matches_shape(t.shape())) throw std::invalid_argument("mttkrp: model/tensor shape mismatch");
  const ModeSplit s = split_around(t.shape(), mode);
  const int n = t.order();
  const Eigen::Index r = m.rank();

  // Row-wise Khatri-Rao weights of the modes on each side of `mode`;
  // row orders match the (left, right) flat decomposition.
  std::vector<Eigen::MatrixXd> lows, highs;
  for (int l = 0; l < mode; ++l) lows.push_back(m.factor(l));
  for (int l = mode + 1; l < n; ++l) highs.push_back(m.factor(l));
  const Eigen::MatrixXd wl = lows.empty() ? Eigen::MatrixXd::Ones(1, r) : khatri_rao(lows);
  const Eigen::MatrixXd wr = highs.empty() ? Eigen::MatrixXd::Ones(1, r) : khatri_rao(highs);

  Eigen::MatrixXd out(s.mid, r);
  const double* data = t.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t mid = 0; mid < s.mid; ++mid) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(r);
    Eigen::RowVectorXd inner(r);
    for (std::int64_t left = 0; left < s.left; ++left) {
      const double* src = data + (left * s.mid + mid) * s.right;
      inner.setZero();
      for (std::int64_t right = 0; right < s.right; ++right)
        inner.noalias() += src[right] * wr.row(right);
      acc.array() += wl.row(left).array() * inner.array();
    }
    out.row(mid) = acc;
  }
  return out;
}

Eigen::MatrixXd hadamard_of_grams(const std::vector<Eigen::MatrixXd>& grams, int skip) {
  if (grams.empty()) throw std::invalid_argument("no grams");
  const Eigen::Index r = grams[0].rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Ones(r, r);
  for (int l = 0; l < static_cast<int>(grams.size()); ++l)
    if (l != skip) out.array() *= grams[static_cast<std::size_t>(l)].array();
  return out;
}

DenseTensor reconstruct(const KruskalModel& m) {
  const int n = m.order();
  const Eigen::Index r = m.rank();
  DenseTensor t(m.shape());
  const Eigen::MatrixXd& last = m.factor(n - 1);
  std::vector<Eigen::MatrixXd> lows;
  for (int l = 0; l + 1 < n; ++l) lows.push_back(m.factor(l));
  const Eigen::MatrixXd wl = lows.empty() ? Eigen::MatrixXd::Ones(1, r) : khatri_rao(lows);
  // flat layout == (prod of leading dims) x I_N row-major
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> view(
      t.data(), wl.rows(), last.rows());
  view.noalias() = wl * last.transpose();
  return t;
}

DenseTensor permute_modes(const DenseTensor& t, const std::vector<int>& perm) {
  const int n = t.order();
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permutation length mismatch");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<int> out_shape(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int p = perm[static_cast<std::size_t>(i)];
    if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)])
      throw std::invalid_argument("not a permutation of the modes");
    seen[static_cast<std::size_t>(p)] = true;
    out_shape[static_cast<std::size_t>(i)] = t.dim(p);
  }

  DenseTensor out(out_shape);
  const auto in_strides = row_major_strides(t.shape());
  const auto out_strides = row_major_strides(out_shape);
  // Stride of the output digit i is driven by input mode perm[i].
  std::vector<std::int64_t> scatter(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    scatter[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
        out_strides[static_cast<std::size_t>(i)];

  const std::int64_t lead = t.dim(0);
  const std::int64_t rest = t.size() / lead;
  const double* src = t.data();
  double* dst = out.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t j0 = 0; j0 < lead; ++j0) {
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    idx[0] = static_cast<int>(j0);
    std::int64_t flat = j0 * in_strides[0];
    for (std::int64_t k = 0; k < rest; ++k) {
      std::int64_t target = 0;
      for (int l = 0; l < n; ++l) target += idx[static_cast<std::size_t>(l)] * scatter[static_cast<std::size_t>(l)];
      dst[target] = src[flat];
      ++flat;
      for (int l = n - 1; l >= 1; --l) {
        if (++idx[static_cast<std::size_t>(l)] < t.dim(l)) break;
        idx[static_cast<std::size_t>(l)] = 0;
      }
    }
  }
  return out;
}

double spectral_norm(const Eigen::MatrixXd& m) {
  const Eigen::Index r = m.rows();
  if (r == 0) return 0.0;
  if (r == 1) return std::abs(m(0, 0));
  Eigen::VectorXd v = Eigen::VectorXd::Ones(r) / std::sqrt(static_cast<double>(r));
  double lambda = 0.0;
  for (int it = 0; it < 1000; ++it) {
    Eigen::VectorXd w = m * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    const double next = v.dot(m * v);
    if (std::abs(next - lambda) <= 1e-10 * std::max(1.0, std::abs(next))) return next;
    lambda = next;
  }
  // Stalled (e.g. repeated extremal eigenvalues); fall back to a full solve.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

GramCache GramCache::create(const DenseTensor& t, const KruskalModel& m) {
  return create(t.norm_sq(), m);
}

GramCache GramCache::create(double norm_sq, const KruskalModel& m) {
  GramCache c;
  c.tensor_norm_sq = norm_sq;
  c.grams.reserve(m.factors.size());
  for (const auto& a : m.factors) c.grams.push_back(gram(a));
  return c;
}

void GramCache::refresh(int mode, const Eigen::MatrixXd& factor) {
  grams[static_cast<std::size_t>(mode)] = gram(factor);
}

double cheap_objective(double tensor_norm_sq, const Eigen::MatrixXd& a,
                       const Eigen::MatrixXd& g, const Eigen::MatrixXd& c) {
  const double cross = (a.array() * c.array()).sum();
  const double quad = (gram(a).array() * g.array()).sum();
  return 0.5 * tensor_norm_sq - cross + 0.5 * quad;
}

double objective(const DenseTensor& t, const KruskalModel& m, const GramCache& cache,
                 int pivot_mode) {
  const int pivot = pivot_mode < 0 ? m.order() - 1 : pivot_mode;
  const Eigen::MatrixXd c = mttkrp(t, m, pivot);
  const Eigen::MatrixXd g = hadamard_of_grams(cache.grams, pivot);
  return cheap_objective(cache.tensor_norm_sq, m.factor(pivot), g, c);
}

Eigen::MatrixXd block_gradient(const DenseTensor& t, const KruskalModel& m, int mode,
                               const GramCache& cache) {
  return m.factor(mode) * hadamard_of_grams(cache.grams, mode) - mttkrp(t, m, mode);
}

double block_lipschitz(const GramCache& cache, int mode) {
  return spectral_norm(hadamard_of_grams(cache.grams, mode));
}

}  // namespace ntf
