#pragma once

#include <random>

#include "stackel/metric.hpp"

namespace stackel {

/// Deterministic helpers: all randomness flows through the caller's engine,
/// and integer draws avoid distribution objects so streams are stable across
/// standard libraries.
inline uint64_t draw_u64(std::mt19937_64& rng, uint64_t bound) { return rng() % bound; }

inline long draw_int(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<uint64_t>(hi - lo + 1));
}

/// Random rational with |num| <= num_bound, 1 <= den <= den_bound.
Rat random_rat(std::mt19937_64& rng, long num_bound = 50, long den_bound = 50);

/// Rejection-samples a regular rational point (small numerators/denominators).
RatPoint random_regular_point(const SpecContext& ctx, std::mt19937_64& rng, int max_tries = 5000);

std::vector<Rat> random_momenta(int n, std::mt19937_64& rng);

/// Random valid seed datum: forest with at most max_blocks vertices, total
/// dimension at most max_dim, labels and polynomial data satisfying the
/// admissibility conditions by construction.
ForestSpec random_spec(std::mt19937_64& rng, int max_dim = 6, int max_blocks = 3);

}  // namespace stackel
