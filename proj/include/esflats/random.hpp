#pragma once

#include <cstdint>
#include <random>

#include "esflats/rational.hpp"

namespace esflats {

/// Seeded source of random rationals. Denominators never exceed `max_den`.
class RatSampler {
 public:
  explicit RatSampler(std::uint64_t seed, long max_den = 10000) : rng_(seed), max_den_(max_den) {}

  /// Uniform on the grid {i / max_den} within [lo, hi].
  Rat uniform(long lo, long hi) {
    std::uniform_int_distribution<long> dist(lo * max_den_, hi * max_den_);
    Rat q(dist(rng_), max_den_);
    q.canonicalize();
    return q;
  }

  RVec vector(std::size_t n, long lo, long hi) {
    RVec v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

  /// Small integers, for readable test instances.
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  long max_den_;
};

}  // namespace esflats
