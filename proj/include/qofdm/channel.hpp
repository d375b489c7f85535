// Tapped-delay-line multipath channel, AWGN injection and SNR calibration.
//
// SNR here is the ratio of the average power of the noiseless received
// time-domain samples to the average noise power, calibrated from the
// realized tap energy (per-realization SNR).

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qofdm/numerics.hpp"
#include "qofdm/random.hpp"

namespace qofdm {

struct ChannelRealization {
  cvec taps;  // tap j at delay j, j = 0..L-1

  double energy() const { return norm2(taps); }
};

inline std::vector<double> normalized_profile(const std::vector<double>& profile_db) {
  std::vector<double> lin(profile_db.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < lin.size(); ++i) {
    lin[i] = std::pow(10.0, profile_db[i] / 10.0);
    sum += lin[i];
  }
  for (double& p : lin) p /= sum;
  return lin;
}

inline const std::vector<double>& default_profile_db() {
  static const std::vector<double> p = {0.0, -7.0, -12.0, -18.0};
  return p;
}

// Independent circularly symmetric complex Gaussian taps with the given
// power profile (normalized so the expected total energy is 1).
inline ChannelRealization draw_channel(RandomSource& rng,
                                       const std::vector<double>& profile_db = default_profile_db()) {
  const std::vector<double> p = normalized_profile(profile_db);
  ChannelRealization ch;
  ch.taps.resize(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) ch.taps[j] = rng.cgaussian(p[j]);
  return ch;
}

// h_k = sum_j taps_j exp(-2 pi i j k / N): the unnormalized DFT, so the
// circular-convolution identity y = F^H diag(h) s holds exactly.
inline cvec freq_response(const ChannelRealization& ch, int n) {
  cvec padded(n, cplx{0.0, 0.0});
  if (static_cast<int>(ch.taps.size()) > n)
    throw std::invalid_argument("freq_response: more taps than subcarriers");
  std::copy(ch.taps.begin(), ch.taps.end(), padded.begin());
  cvec h = dft(padded);
  const double scale = std::sqrt(static_cast<double>(n));
  for (cplx& x : h) x *= scale;
  return h;
}

inline void apply_awgn(cvec& y, double sigma2, RandomSource& rng) {
  if (sigma2 < 0.0) throw std::invalid_argument("apply_awgn: negative variance");
  if (sigma2 == 0.0) return;
  for (cplx& x : y) x += rng.cgaussian(sigma2);
}

// sigma^2 such that E[|z|^2] / sigma^2 hits the target SNR, with
// E[|z|^2] = (n_used/n) * ||h_t||^2 for unit-energy symbols.
inline double calibrate_sigma(double tap_energy, int n, int n_used, double snr_db) {
  const double signal = (static_cast<double>(n_used) / n) * tap_energy;
  return signal / std::pow(10.0, snr_db / 10.0);
}

// Linear convolution with the channel taps (used by the full-frame path).
inline cvec apply_fir(const cvec& x, const ChannelRealization& ch) {
  const std::size_t l = ch.taps.size();
  cvec y(x.size(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < x.size(); ++i) {
    cplx acc = 0.0;
    const std::size_t jmax = std::min(l, i + 1);
    for (std::size_t j = 0; j < jmax; ++j) acc += ch.taps[j] * x[i - j];
    y[i] = acc;
  }
  return y;
}

}  // namespace qofdm
