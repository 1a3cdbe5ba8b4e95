#include "ntf/datagen.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ntf/kernels.hpp"

namespace ntf {

namespace {

std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Eigen::MatrixXd uniform_matrix(int rows, int cols, std::mt19937_64& gen) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)  // row-major fill order
    for (int j = 0; j < cols; ++j) m(i, j) = draw_uniform01(gen);
  return m;
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t state = base;
  std::uint64_t out = 0;
  for (std::uint64_t k = 0; k <= stream; ++k) out = splitmix64_next(state);
  return out;
}

std::mt19937_64 make_stream(std::uint64_t base, std::uint64_t stream) {
  return std::mt19937_64(stream_seed(base, stream));
}

double draw_normal(std::mt19937_64& gen) {
  double u1 = draw_uniform01(gen);
  if (u1 == 0.0) u1 = 0x1.0p-53;
  const double u2 = draw_uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::pair<DenseTensor, KruskalModel> generate(const SyntheticSpec& spec) {
  if (spec.rank < 1) throw std::invalid_argument("rank must be >= 1");
  if (spec.noise_sigma < 0.0) throw std::invalid_argument("noise level must be >= 0");
  if (spec.ill_conditioned && spec.rank < 2)
    throw std::invalid_argument("ill-conditioned instances need rank >= 2");

  const int n = static_cast<int>(spec.shape.size());
  KruskalModel truth;
  for (int i = 0; i < n; ++i) {
    auto gen = make_stream(spec.seed, static_cast<std::uint64_t>(i));
    Eigen::MatrixXd a = uniform_matrix(spec.shape[static_cast<std::size_t>(i)], spec.rank, gen);
    if (spec.ill_conditioned) a.col(0) = 0.99 * a.col(1) + 0.01 * a.col(0);
    truth.factors.push_back(std::move(a));
  }

  DenseTensor t = reconstruct(truth);
  if (spec.noise_sigma > 0.0) {
    auto gen = make_stream(spec.seed, static_cast<std::uint64_t>(n));
    for (std::int64_t i = 0; i < t.size(); ++i)
      t[i] = std::max(0.0, t[i] + spec.noise_sigma * draw_normal(gen));
  }
  return {std::move(t), std::move(truth)};
}

KruskalModel random_init(const std::vector<int>& shape, int rank, std::uint64_t seed) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  KruskalModel m;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    auto gen = make_stream(seed, static_cast<std::uint64_t>(i));
    m.factors.push_back(uniform_matrix(shape[i], rank, gen));
  }
  return m;
}

}  // namespace ntf
