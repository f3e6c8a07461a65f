#pragma once

#include <cstdint>
#include <random>

#include "waldgeo/wald.hpp"

namespace waldgeo {

struct RandomWaldOptions {
  double lambda_min = 0.05;
  double lambda_max = 0.95;
};

// Uniformly distributed fully resolved topology (sequential random cherry
// attachment) with i.i.d. uniform weights; deterministic per generator state.
Wald random_wald(int n_leaves, std::mt19937_64& rng, const RandomWaldOptions& opts = {});

inline Wald random_wald(int n_leaves, std::uint64_t seed, const RandomWaldOptions& opts = {}) {
  std::mt19937_64 rng(seed);
  return random_wald(n_leaves, rng, opts);
}

// Uniform fully resolved topology without weights.
Topology random_topology(int n_leaves, std::mt19937_64& rng);

}  // namespace waldgeo
