// Receiver front end: uniform mid-rise B-bit complex quantizer with cell
// bound lookup, AGC/power bookkeeping, noise-power estimation from null
// symbols, and correlation-based frame synchronization on the quantized
// stream.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qofdm/numerics.hpp"

namespace qofdm {

// Step-size factors minimizing quantization MSE for a unit-variance Gaussian
// input, B = 1..5 bits.
inline double quantizer_step_factor(int bits) {
  static const double table[5] = {std::sqrt(8.0 / std::numbers::pi), 0.9957, 0.5860, 0.3352,
                                  0.1881};
  if (bits < 1 || bits > 5)
    throw std::invalid_argument("quantizer_step_factor: B must be in 1..5");
  return table[bits - 1];
}

struct QuantizerSpec {
  int bits = 0;
  double step = 0.0;
  std::vector<double> thresholds;  // r_0..r_{2^B} with r_0 = -inf, r_{2^B} = +inf
  std::vector<double> levels;      // c_1..c_{2^B}

  // step = sqrt(p_q) * Delta_B, thresholds r_b = (-2^{B-1}+b)*step,
  // levels c_b = (-(2^B+1)/2 + b)*step.
  static QuantizerSpec make(int bits, double p_q) {
    if (p_q <= 0.0) throw std::invalid_argument("QuantizerSpec: P_q must be positive");
    QuantizerSpec q;
    q.bits = bits;
    q.step = std::sqrt(p_q) * quantizer_step_factor(bits);
    const int ncells = 1 << bits;
    q.thresholds.resize(ncells + 1);
    q.thresholds.front() = -kInf;
    q.thresholds.back() = kInf;
    for (int b = 1; b < ncells; ++b)
      q.thresholds[b] = (-(ncells / 2) + b) * q.step;
    q.levels.resize(ncells);
    for (int b = 1; b <= ncells; ++b)
      q.levels[b - 1] = (-(ncells + 1) / 2.0 + b) * q.step;
    return q;
  }

  // Cell index b in 1..2^B such that y lies in (r_{b-1}, r_b]. Inputs exactly
  // on a threshold belong to the lower cell.
  int cell_index(double y) const {
    const int ncells = 1 << bits;
    int b = static_cast<int>(std::ceil(y / step)) + ncells / 2;
    return std::clamp(b, 1, ncells);
  }

  double quantize_real(double y) const {
    if (!std::isfinite(y)) throw std::invalid_argument("quantize: non-finite input");
    return levels[cell_index(y) - 1];
  }

  cplx quantize(cplx y) const { return {quantize_real(y.real()), quantize_real(y.imag())}; }

  // (l, u) of the cell whose output level is the given value.
  std::pair<double, double> bounds(double level) const {
    const int ncells = 1 << bits;
    const int b = static_cast<int>(std::lround(level / step + (ncells + 1) / 2.0));
    if (b < 1 || b > ncells || std::abs(levels[b - 1] - level) > 1e-9 * step)
      throw std::invalid_argument("bounds: value is not a quantizer level");
    return {thresholds[b - 1], thresholds[b]};
  }
};

inline cvec quantize_complex(const cvec& y, const QuantizerSpec& q) {
  cvec out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = q.quantize(y[i]);
  return out;
}

inline double accumulate_power(std::span<const cplx> samples) {
  if (samples.empty()) throw std::invalid_argument("accumulate_power: empty input");
  double s = 0.0;
  for (const cplx& x : samples) s += std::norm(x);
  return s / static_cast<double>(samples.size());
}

// Assistant high-resolution ADC path: same accumulator fed by a decimated
// stream.
inline double accumulate_power_decimated(std::span<const cplx> samples, int factor = 64) {
  if (samples.empty()) throw std::invalid_argument("accumulate_power: empty input");
  if (factor < 1) throw std::invalid_argument("accumulate_power: bad decimation factor");
  double s = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < samples.size(); i += factor) {
    s += std::norm(samples[i]);
    ++count;
  }
  return s / static_cast<double>(count);
}

inline double estimate_noise_power(std::span<const cplx> null_samples) {
  if (null_samples.empty())
    throw std::invalid_argument("estimate_noise_power: no null symbols in schedule");
  return accumulate_power(null_samples);
}

struct PowerReport {
  double p_r = 0.0;         // average received power
  double sigma2_hat = 0.0;  // estimated noise power
  double g_agc = 0.0;       // 1 / P_r
};

inline PowerReport make_power_report(double p_r, double sigma2_hat) {
  if (p_r <= 0.0) throw std::invalid_argument("PowerReport: P_r must be positive");
  return {p_r, sigma2_hat, 1.0 / p_r};
}

// Cross-correlation peak search: argmax over offsets in
// [window_begin, window_begin + window_len) of |<stream(offset..), ref>|.
// FFT-based; the metric uses the magnitude, so it is invariant to a global
// phase rotation of the stream.
inline std::size_t sync_search(std::span<const cplx> stream, const cvec& ref,
                               std::size_t window_begin, std::size_t window_len) {
  const std::size_t n = ref.size();
  if (window_len < 1) throw std::invalid_argument("sync_search: empty window");
  if (window_begin + window_len + n > stream.size() + 1)
    throw std::invalid_argument("sync_search: window exceeds stream");
  if (window_len + n - 1 < n) throw std::invalid_argument("sync_search: window shorter than ref");

  std::size_t fft_n = 1;
  while (fft_n < window_len + n) fft_n <<= 1;

  // corr[k] = sum_m conj(stream[window_begin + k + m]) * ref[m]
  cvec a(fft_n, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < window_len + n - 1 && window_begin + i < stream.size(); ++i)
    a[i] = std::conj(stream[window_begin + i]);
  cvec b(fft_n, cplx{0.0, 0.0});
  // Time-reverse the conjugated reference so linear correlation becomes
  // convolution; corr[k] lands at index k + n - 1.
  for (std::size_t m = 0; m < n; ++m) b[n - 1 - m] = ref[m];

  dft_inplace(a);
  dft_inplace(b);
  const double scale = std::sqrt(static_cast<double>(fft_n));
  for (std::size_t i = 0; i < fft_n; ++i) a[i] *= b[i] * scale;
  idft_inplace(a);

  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t k = 0; k < window_len; ++k) {
    const double mag = std::abs(a[k + n - 1]);
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  return window_begin + best;
}

}  // namespace qofdm
