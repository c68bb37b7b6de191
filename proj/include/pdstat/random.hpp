#pragma once

#include <cstdint>
#include <random>

namespace pdstat {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Sub-seed for stream `index` of a master seed. Streams are independent and
/// the mapping is stable across platforms and thread counts.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Uniform double in [0, 1) built from the top 53 bits of one engine output.
/// Unlike std::uniform_real_distribution this is bit-identical across
/// standard library implementations.
double unit_double(Rng& rng);

/// Uniform double in [lo, hi).
double uniform(Rng& rng, double lo, double hi);

/// Uniform index in [0, n). n must be positive.
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

}  // namespace pdstat
