#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "ntf/kruskal.hpp"
#include "ntf/tensor.hpp"

namespace ntf {

/// Synthetic instance description. `seed` fully determines the output.
struct SyntheticSpec {
  std::vector<int> shape;
  int rank = 1;
  double noise_sigma = 0.0;
  bool ill_conditioned = false;
  std::uint64_t seed = 0;
};

// Reproducible randomness. Sub-streams are derived from a base seed with
// SplitMix64: stream k uses the k+1-th SplitMix64 output of the base seed
// and feeds it to std::mt19937_64 (bit-exact across platforms). Uniform
// draws map the top 53 bits of the engine output into [0, 1); normal draws
// are Box-Muller pairs over those uniforms.

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream);
std::mt19937_64 make_stream(std::uint64_t base, std::uint64_t stream);

inline double draw_uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double draw_normal(std::mt19937_64& gen);

/// Ground-truth factors are uniform [0,1] (stream i for mode i). With
/// `ill_conditioned`, column 0 of every mode is overwritten by
/// 0.99 * column 1 + 0.01 * original column 0 after sampling. The tensor is
/// max(0, reconstruct(truth) + sigma * E) with E standard normal (stream N).
std::pair<DenseTensor, KruskalModel> generate(const SyntheticSpec& spec);

/// Uniform [0,1] factor matrices, stream i for mode i.
KruskalModel random_init(const std::vector<int>& shape, int rank, std::uint64_t seed);

}  // namespace ntf
