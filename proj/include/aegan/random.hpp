#pragma once

#include <cstdint>
#include <random>

#include "aegan/tensor.hpp"

namespace aegan {

using Rng = std::mt19937_64;

/// Derives an independent seed for a named stream (splitmix64 finalizer).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Fills a tensor with i.i.d. N(0, 1) draws. A fresh distribution is used per
/// call so the engine state alone determines the next draw.
inline Tensor standard_normal(Shape shape, Rng& rng) {
  Tensor t(std::move(shape));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : t.values()) v = normal(rng);
  return t;
}

}  // namespace aegan
