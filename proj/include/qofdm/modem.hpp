// Constellation mapping, subcarrier mapping with guard bands, and OFDM
// modulation with cyclic prefix.
//
// Bit-label conventions (Gray, bit value 0 on the positive side so that a
// positive LLR means "bit 0 more likely"):
//   4-QAM:  (b0 b1) -> ((1-2*b0) + j(1-2*b1)) / sqrt(2)
//   16-QAM: (b0 b1 b2 b3) -> (pam(b0,b1) + j*pam(b2,b3)) / sqrt(10)
//           with pam: 00 -> +3, 01 -> +1, 11 -> -1, 10 -> -3
// Both have unit average energy; the soft demapper in the detector uses the
// same tables.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qofdm/numerics.hpp"

namespace qofdm {

struct Constellation {
  int order = 0;            // M
  int bits_per_symbol = 0;  // log2(M)
  std::vector<cplx> points; // indexed by the bit label read MSB-first

  static Constellation qam4() {
    Constellation c;
    c.order = 4;
    c.bits_per_symbol = 2;
    c.points.resize(4);
    const double s = 1.0 / std::sqrt(2.0);
    for (int label = 0; label < 4; ++label) {
      const int b0 = (label >> 1) & 1, b1 = label & 1;
      c.points[label] = {s * (1 - 2 * b0), s * (1 - 2 * b1)};
    }
    return c;
  }

  static Constellation qam16() {
    Constellation c;
    c.order = 16;
    c.bits_per_symbol = 4;
    c.points.resize(16);
    const double s = 1.0 / std::sqrt(10.0);
    auto pam = [](int hi, int lo) {
      // Gray: 00 -> +3, 01 -> +1, 11 -> -1, 10 -> -3
      const int mag = lo ? 1 : 3;
      return hi ? -mag : mag;
    };
    for (int label = 0; label < 16; ++label) {
      const int b0 = (label >> 3) & 1, b1 = (label >> 2) & 1;
      const int b2 = (label >> 1) & 1, b3 = label & 1;
      c.points[label] = {s * pam(b0, b1), s * pam(b2, b3)};
    }
    return c;
  }

  static Constellation by_order(int m) {
    if (m == 4) return qam4();
    if (m == 16) return qam16();
    throw std::invalid_argument("Constellation: unsupported order " + std::to_string(m));
  }

  cplx map_label(int label) const { return points[label]; }

  int nearest_label(cplx x) const {
    int best = 0;
    double bd = std::norm(x - points[0]);
    for (int l = 1; l < order; ++l) {
      const double d = std::norm(x - points[l]);
      if (d < bd) {
        bd = d;
        best = l;
      }
    }
    return best;
  }
};

// Maps coded bits onto constellation symbols, MSB-first per symbol.
inline cvec qam_map(std::span<const std::uint8_t> bits, const Constellation& c) {
  if (bits.size() % c.bits_per_symbol != 0)
    throw std::invalid_argument("qam_map: bit count not divisible by bits/symbol");
  cvec out(bits.size() / c.bits_per_symbol);
  for (std::size_t s = 0; s < out.size(); ++s) {
    int label = 0;
    for (int b = 0; b < c.bits_per_symbol; ++b)
      label = (label << 1) | (bits[s * c.bits_per_symbol + b] & 1);
    out[s] = c.points[label];
  }
  return out;
}

inline void append_label_bits(std::vector<std::uint8_t>& bits, int label, int nbits) {
  for (int b = nbits - 1; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((label >> b) & 1));
}

// Data subcarrier layout: n_used bins symmetric about (and excluding) DC,
// ordered from the most negative frequency to the most positive.
struct SubcarrierPlan {
  int n = 0;
  int n_used = 0;
  std::vector<int> bins;   // DFT bin index per position
  std::vector<int> freqs;  // signed frequency index per position

  static SubcarrierPlan make(int n, int n_used) {
    if (n <= 0 || !is_pow2(static_cast<std::size_t>(n)))
      throw std::invalid_argument("SubcarrierPlan: N must be a power of two");
    if (n_used <= 0 || n_used % 2 != 0 || n_used >= n)
      throw std::invalid_argument("SubcarrierPlan: N_used must be even and < N");
    SubcarrierPlan p;
    p.n = n;
    p.n_used = n_used;
    p.bins.reserve(n_used);
    p.freqs.reserve(n_used);
    for (int f = -n_used / 2; f <= n_used / 2; ++f) {
      if (f == 0) continue;  // DC stays null
      p.freqs.push_back(f);
      p.bins.push_back((f + n) % n);
    }
    return p;
  }
};

// Scatters s_d onto the plan's bins; guard bins (and DC) are exactly zero.
inline cvec subcarrier_map(const cvec& s_d, const SubcarrierPlan& plan) {
  if (static_cast<int>(s_d.size()) != plan.n_used)
    throw std::invalid_argument("subcarrier_map: size mismatch with plan");
  cvec out(plan.n, cplx{0.0, 0.0});
  for (int i = 0; i < plan.n_used; ++i) out[plan.bins[i]] = s_d[i];
  return out;
}

inline cvec subcarrier_extract(const cvec& s, const SubcarrierPlan& plan) {
  if (static_cast<int>(s.size()) != plan.n)
    throw std::invalid_argument("subcarrier_extract: size mismatch with plan");
  cvec out(plan.n_used);
  for (int i = 0; i < plan.n_used; ++i) out[i] = s[plan.bins[i]];
  return out;
}

// IDFT plus cyclic prefix: output is [tail cp samples | idft(s)].
inline cvec ofdm_modulate(const cvec& s, int cp_len) {
  const int n = static_cast<int>(s.size());
  if (cp_len < 0 || cp_len >= n) throw std::invalid_argument("ofdm_modulate: bad cp length");
  cvec core = idft(s);
  cvec out(n + cp_len);
  for (int i = 0; i < cp_len; ++i) out[i] = core[n - cp_len + i];
  std::copy(core.begin(), core.end(), out.begin() + cp_len);
  return out;
}

inline cvec cp_strip(const cvec& y, int cp_len) {
  if (cp_len < 0 || static_cast<int>(y.size()) <= cp_len)
    throw std::invalid_argument("cp_strip: bad cp length");
  return cvec(y.begin() + cp_len, y.end());
}

}  // namespace qofdm
