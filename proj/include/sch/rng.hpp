#pragma once
// Counter-based random numbers. Every draw is addressed by a key
// (seed, stream) and a four-word counter, so a draw can be reproduced
// without generating any of the others. Monte Carlo paths use
// stream = path index; the shared initial-datum field uses kStreamInit.

#include <cstdint>

namespace sch {

// Philox-style 4x64 bijection, 10 rounds.
struct Philox4x64 {
  struct Block {
    uint64_t x[4];
  };
  static Block block(uint64_t k0, uint64_t k1, uint64_t c0, uint64_t c1,
                     uint64_t c2, uint64_t c3);
};

inline constexpr uint64_t kStreamInit = 0xFFFFFFFFFFFFFFFFull;

// map to (0,1] keeping 53 bits
double u64_to_unit(uint64_t v);

// standard normal via Box-Muller on one counter block
double philox_normal(uint64_t seed, uint64_t stream, uint64_t c0, uint64_t c1,
                     uint64_t c2 = 0);

// uniform on (-1,1)
double philox_uniform_sym(uint64_t seed, uint64_t stream, uint64_t c0,
                          uint64_t c1, uint64_t c2 = 0);

}  // namespace sch
