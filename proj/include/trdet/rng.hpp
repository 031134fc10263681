#pragma once

// Counter-based random streams (Philox4x32-10). A stream is addressed by
// (seed, stream_id) and its draw sequence depends only on an internal draw
// counter, never on thread scheduling, so trials indexed by stream_id are
// reproducible under any worker count.

#include <cstdint>

#include "trdet/types.hpp"

namespace trdet {

namespace detail {

struct PhiloxBlock {
  uint32_t w[4];
};

inline PhiloxBlock philox4x32(uint64_t key, uint64_t stream, uint64_t counter) {
  uint32_t c0 = static_cast<uint32_t>(counter);
  uint32_t c1 = static_cast<uint32_t>(counter >> 32);
  uint32_t c2 = static_cast<uint32_t>(stream);
  uint32_t c3 = static_cast<uint32_t>(stream >> 32);
  uint32_t k0 = static_cast<uint32_t>(key);
  uint32_t k1 = static_cast<uint32_t>(key >> 32);
  for (int round = 0; round < 10; ++round) {
    const uint64_t p0 = 0xD2511F53ull * c0;
    const uint64_t p1 = 0xCD9E8D57ull * c2;
    const uint32_t n0 = static_cast<uint32_t>(p1 >> 32) ^ c1 ^ k0;
    const uint32_t n1 = static_cast<uint32_t>(p1);
    const uint32_t n2 = static_cast<uint32_t>(p0 >> 32) ^ c3 ^ k1;
    const uint32_t n3 = static_cast<uint32_t>(p0);
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
    k0 += 0x9E3779B9u;
    k1 += 0xBB67AE85u;
  }
  return PhiloxBlock{{c0, c1, c2, c3}};
}

}  // namespace detail

class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t stream_id)
      : seed_(seed), stream_(stream_id) {}

  uint64_t seed() const { return seed_; }
  uint64_t stream_id() const { return stream_; }

  /// Uniform draw on the open interval (0, 1), 53-bit resolution.
  double uniform() {
    if (have_uniform_) {
      have_uniform_ = false;
      return pending_uniform_;
    }
    const auto [u, v] = next_pair();
    pending_uniform_ = v;
    have_uniform_ = true;
    return u;
  }

  /// Standard normal draw (Box-Muller; the partner draw is buffered).
  double normal() {
    if (have_normal_) {
      have_normal_ = false;
      return pending_normal_;
    }
    const auto [u, v] = next_pair();
    const double r = std::sqrt(-2.0 * std::log(u));
    pending_normal_ = r * std::sin(kTwoPi * v);
    have_normal_ = true;
    return r * std::cos(kTwoPi * v);
  }

  /// Circular complex Gaussian with E[|z|^2] = 1 (each component N(0, 1/2)).
  Complex cgauss() {
    const auto [u, v] = next_pair();
    const double r = std::sqrt(-std::log(u));
    return Complex{r * std::cos(kTwoPi * v), r * std::sin(kTwoPi * v)};
  }

 private:
  std::pair<double, double> next_pair() {
    const detail::PhiloxBlock b = detail::philox4x32(seed_, stream_, counter_++);
    const uint64_t x = (static_cast<uint64_t>(b.w[0]) << 32) | b.w[1];
    const uint64_t y = (static_cast<uint64_t>(b.w[2]) << 32) | b.w[3];
    return {to_unit(x), to_unit(y)};
  }

  // (0,1): never returns 0, so log() stays finite.
  static double to_unit(uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1p-53;
  }

  uint64_t seed_;
  uint64_t stream_;
  uint64_t counter_ = 0;
  double pending_uniform_ = 0.0;
  double pending_normal_ = 0.0;
  bool have_uniform_ = false;
  bool have_normal_ = false;
};

}  // namespace trdet
