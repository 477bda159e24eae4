#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>

namespace schurand {

// Counter-based stream: Philox4x32-10. Streams constructed from the same
// (seed, stream_id) pair produce identical sequences on every platform;
// distinct stream ids give statistically independent streams, which is what
// the Monte Carlo drivers hand to each worker.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream_id) {
    key_[0] = static_cast<std::uint32_t>(seed);
    key_[1] = static_cast<std::uint32_t>(seed >> 32);
    ctr_[0] = 0;
    ctr_[1] = 0;
    ctr_[2] = static_cast<std::uint32_t>(stream_id);
    ctr_[3] = static_cast<std::uint32_t>(stream_id >> 32);
    buf_pos_ = 4;  // force a fill on first use
  }

  std::uint32_t next_u32() {
    if (buf_pos_ == 4) {
      fill();
      buf_pos_ = 0;
    }
    return buf_[buf_pos_++];
  }

  std::uint64_t next_u64() {
    std::uint64_t lo = next_u32();
    std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform on (0, 1]: (x + 1) / 2^32. Never returns 0, so logs are safe.
  double uniform01() {
    return (static_cast<double>(next_u32()) + 1.0) * 0x1p-32;
  }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) {
    double u = static_cast<double>(next_u32()) * 0x1p-32;  // [0, 1)
    return lo + (hi - lo) * u;
  }

  // Standard normal via Box-Muller; caches the second variate.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // Standard complex normal: E|z|^2 = 1.
  std::complex<double> cnormal() {
    double x = normal();
    double y = normal();
    return {x * 0.7071067811865475244, y * 0.7071067811865475244};
  }

 private:
  static std::pair<std::uint32_t, std::uint32_t> mulhilo(std::uint32_t a,
                                                         std::uint32_t b) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    return {static_cast<std::uint32_t>(p >> 32), static_cast<std::uint32_t>(p)};
  }

  void fill() {
    std::uint32_t x0 = ctr_[0], x1 = ctr_[1], x2 = ctr_[2], x3 = ctr_[3];
    std::uint32_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      auto [hi0, lo0] = mulhilo(0xD2511F53u, x0);
      auto [hi1, lo1] = mulhilo(0xCD9E8D57u, x2);
      std::uint32_t y0 = hi1 ^ x1 ^ k0;
      std::uint32_t y1 = lo1;
      std::uint32_t y2 = hi0 ^ x3 ^ k1;
      std::uint32_t y3 = lo0;
      x0 = y0;
      x1 = y1;
      x2 = y2;
      x3 = y3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    buf_[0] = x0;
    buf_[1] = x1;
    buf_[2] = x2;
    buf_[3] = x3;
    // Increment the 128-bit counter; words 2..3 carry the stream id, and a
    // single stream never comes close to 2^64 blocks, so only words 0..1 move.
    if (++ctr_[0] == 0) ++ctr_[1];
  }

  std::uint32_t key_[2];
  std::uint32_t ctr_[4];
  std::uint32_t buf_[4];
  int buf_pos_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace schurand
