// Counter-based random source (Philox-4x32-10).
//
// A fixed (seed, stream-id, trial-index) triple reproduces the same draw
// sequence regardless of thread count or scheduling order, which is what the
// Monte Carlo harness relies on for thread-count-invariant results.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <utility>

namespace qofdm {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace detail

class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed, std::uint64_t stream_id = 0,
                        std::uint64_t trial_index = 0) {
    // Streams are separated through the Philox key, trials through the
    // upper counter words; the lower 64 counter bits advance per block.
    const std::uint64_t key = detail::splitmix64(seed ^ detail::splitmix64(stream_id));
    key_[0] = static_cast<std::uint32_t>(key);
    key_[1] = static_cast<std::uint32_t>(key >> 32);
    ctr_[0] = 0;
    ctr_[1] = 0;
    ctr_[2] = static_cast<std::uint32_t>(trial_index);
    ctr_[3] = static_cast<std::uint32_t>(trial_index >> 32);
  }

  std::uint32_t next_u32() {
    if (have_ == 0) refill();
    return out_[--have_];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_oc() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int bit() { return static_cast<int>(next_u32() & 1u); }

  // Pair of independent N(0,1) draws (Box-Muller).
  std::pair<double, double> gaussian_pair() {
    const double r = std::sqrt(-2.0 * std::log(uniform_oc()));
    const double th = 2.0 * std::numbers::pi * uniform();
    return {r * std::cos(th), r * std::sin(th)};
  }

  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    auto [a, b] = gaussian_pair();
    cached_ = b;
    have_cached_ = true;
    return a;
  }

  // Circularly symmetric complex Gaussian CN(0, variance).
  std::complex<double> cgaussian(double variance) {
    auto [a, b] = gaussian_pair();
    const double s = std::sqrt(variance / 2.0);
    return {s * a, s * b};
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static void round(std::array<std::uint32_t, 4>& c, std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
  }

  void refill() {
    std::array<std::uint32_t, 4> c = ctr_;
    std::uint32_t k0 = key_[0], k1 = key_[1];
    for (int r = 0; r < 10; ++r) {
      round(c, k0, k1);
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    out_ = c;
    have_ = 4;
    if (++ctr_[0] == 0) ++ctr_[1];
  }

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> ctr_{};
  std::array<std::uint32_t, 4> out_{};
  int have_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

// Stream identifiers used by the harness so that every consumer of
// randomness gets an independent, reproducible substream.
enum class RngStream : std::uint64_t {
  kChannel = 1,
  kNoise = 2,
  kDataBits = 3,
  kMismatch = 4,
  kFramePayload = 5,
  kPilot = 6,
  kPadding = 7,
};

inline RandomSource make_stream(std::uint64_t seed, RngStream stream, std::uint64_t trial) {
  return RandomSource(seed, static_cast<std::uint64_t>(stream), trial);
}

}  // namespace qofdm
