#include "sch/rng.hpp"

#include <cmath>

namespace sch {

namespace {

constexpr uint64_t kM0 = 0xD2E7470EE14C6C93ull;
constexpr uint64_t kM1 = 0xCA5A826395121157ull;
constexpr uint64_t kW0 = 0x9E3779B97F4A7C15ull;
constexpr uint64_t kW1 = 0xBB67AE8584CAA73Bull;

inline void mulhilo(uint64_t a, uint64_t b, uint64_t& hi, uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<uint64_t>(p >> 64);
  lo = static_cast<uint64_t>(p);
}

}  // namespace

Philox4x64::Block Philox4x64::block(uint64_t k0, uint64_t k1, uint64_t c0,
                                    uint64_t c1, uint64_t c2, uint64_t c3) {
  uint64_t x0 = c0, x1 = c1, x2 = c2, x3 = c3;
  for (int r = 0; r < 10; ++r) {
    uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, x0, hi0, lo0);
    mulhilo(kM1, x2, hi1, lo1);
    const uint64_t y0 = hi1 ^ x1 ^ k0;
    const uint64_t y1 = lo1;
    const uint64_t y2 = hi0 ^ x3 ^ k1;
    const uint64_t y3 = lo0;
    x0 = y0;
    x1 = y1;
    x2 = y2;
    x3 = y3;
    k0 += kW0;
    k1 += kW1;
  }
  return Block{{x0, x1, x2, x3}};
}

double u64_to_unit(uint64_t v) {
  return (static_cast<double>(v >> 11) + 1.0) * 0x1.0p-53;
}

double philox_normal(uint64_t seed, uint64_t stream, uint64_t c0, uint64_t c1,
                     uint64_t c2) {
  const auto b = Philox4x64::block(seed, stream, c0, c1, c2, 0);
  const double u = u64_to_unit(b.x[0]);                          // (0,1]
  const double v = static_cast<double>(b.x[1] >> 11) * 0x1.0p-53;  // [0,1)
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

double philox_uniform_sym(uint64_t seed, uint64_t stream, uint64_t c0,
                          uint64_t c1, uint64_t c2) {
  const auto b = Philox4x64::block(seed, stream, c0, c1, c2, 0);
  return 2.0 * u64_to_unit(b.x[0]) - 1.0;
}

}  // namespace sch
