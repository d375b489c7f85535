// Rate-1/3 parallel-concatenated turbo code with [13, 15] (octal) RSC
// constituents (constraint length 4), QPP internal interleaver, optional
// puncturing to rate 1/2, and an iterative max-log-MAP decoder.
//
// LLR convention throughout: L = ln P(bit = 0) / P(bit = 1), so a positive
// value favors bit 0.
//
// Codeword layout (rate 1/3): [systematic K][parity1 K][parity2 K][tails 12]
// where the tails are (x, z) pairs from terminating encoder 1 then encoder 2
// independently (3 steps each). Rate 1/2 keeps all systematic bits and
// alternates parity1 (even positions) with parity2 (odd positions).

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qofdm {

enum class CodeRate { kOneThird, kOneHalf };

struct TurboCodeSpec {
  int k = 0;
  CodeRate rate = CodeRate::kOneThird;
  int decoder_iterations = 8;

  int coded_length() const {
    return (rate == CodeRate::kOneThird ? 3 * k : 2 * k) + 12;
  }
};

namespace turbo_detail {

struct QppEntry {
  int k, f1, f2;
};

// Quadratic permutation polynomial parameters per block size (3GPP TS 36.212
// Table 5.1.3-3).
inline const std::vector<QppEntry>& qpp_table() {
  static const std::vector<QppEntry> table = {
      {40, 3, 10},     {48, 7, 12},     {56, 19, 42},    {64, 7, 16},     {72, 7, 18},
      {80, 11, 20},    {88, 5, 22},     {96, 11, 24},    {104, 7, 26},    {112, 41, 84},
      {120, 103, 90},  {128, 15, 32},   {136, 9, 34},    {144, 17, 108},  {152, 9, 38},
      {160, 21, 120},  {168, 101, 84},  {176, 21, 44},   {184, 57, 46},   {192, 23, 48},
      {200, 13, 50},   {208, 27, 52},   {216, 11, 36},   {224, 27, 56},   {232, 85, 58},
      {240, 29, 60},   {248, 33, 62},   {256, 15, 32},   {264, 17, 198},  {272, 33, 68},
      {280, 103, 210}, {288, 19, 36},   {296, 19, 74},   {304, 37, 76},   {312, 19, 78},
      {320, 21, 120},  {328, 21, 82},   {336, 115, 84},  {344, 193, 86},  {352, 21, 44},
      {360, 133, 90},  {368, 81, 46},   {376, 45, 94},   {384, 23, 48},   {392, 243, 98},
      {400, 151, 40},  {408, 155, 102}, {416, 25, 52},   {424, 51, 106},  {432, 47, 72},
      {440, 91, 110},  {448, 29, 168},  {456, 29, 114},  {464, 247, 58},  {472, 29, 118},
      {480, 89, 180},  {488, 91, 122},  {496, 157, 62},  {504, 55, 84},   {512, 31, 64},
      {528, 17, 66},   {544, 35, 68},   {560, 227, 420}, {576, 65, 96},   {592, 19, 74},
      {608, 37, 76},   {624, 41, 234},  {640, 39, 80},   {656, 185, 82},  {672, 43, 252},
      {688, 21, 86},   {704, 155, 44},  {720, 79, 120},  {736, 139, 92},  {752, 23, 94},
      {768, 217, 48},  {784, 25, 98},   {800, 17, 80},   {816, 127, 102}, {832, 25, 52},
      {848, 239, 106}, {864, 17, 48},   {880, 137, 110}, {896, 215, 112}, {912, 29, 114},
      {928, 15, 58},   {944, 147, 118}, {960, 29, 60},   {976, 59, 122},  {992, 65, 124},
      {1008, 55, 84},  {1024, 31, 64},  {1056, 17, 66},  {1088, 171, 204},{1120, 67, 140},
      {1152, 35, 72},  {1184, 19, 74},  {1216, 39, 76},  {1248, 19, 78},  {1280, 199, 240},
      {1312, 21, 82},  {1344, 211, 252},{1376, 21, 86},  {1408, 43, 88},  {1440, 149, 60},
      {1472, 45, 92},  {1504, 49, 846}, {1536, 71, 48},  {1568, 13, 28},  {1600, 17, 80},
      {1632, 25, 102}, {1664, 183, 104},{1696, 55, 954}, {1728, 127, 96}, {1760, 27, 110},
      {1792, 29, 112}, {1824, 29, 114}, {1856, 57, 116}, {1888, 45, 354}, {1920, 31, 120},
      {1952, 59, 610}, {1984, 185, 124},{2016, 113, 420},{2048, 31, 64},  {2112, 17, 66},
      {2176, 171, 136},{2240, 209, 420},{2304, 253, 216},{2368, 367, 444},{2432, 265, 456},
      {2496, 181, 468},{2560, 39, 80},  {2624, 27, 164}, {2688, 127, 504},{2752, 143, 172},
      {2816, 43, 88},  {2880, 29, 300}, {2944, 45, 92},  {3008, 157, 188},{3072, 47, 96},
      {3136, 13, 28},  {3200, 111, 240},{3264, 443, 204},{3328, 51, 104}, {3392, 51, 212},
      {3456, 451, 192},{3520, 257, 220},{3584, 57, 336}, {3648, 313, 228},{3712, 271, 232},
      {3776, 179, 236},{3840, 331, 120},{3904, 363, 244},{3968, 375, 248},{4032, 127, 168},
      {4096, 31, 64},  {4160, 33, 130}, {4224, 43, 264}, {4288, 33, 134}, {4352, 477, 408},
      {4416, 35, 138}, {4480, 233, 280},{4544, 357, 142},{4608, 337, 480},{4672, 37, 146},
      {4736, 71, 444}, {4800, 71, 120}, {4864, 37, 152}, {4928, 39, 462}, {4992, 127, 234},
      {5056, 39, 158}, {5120, 39, 80},  {5184, 31, 96},  {5248, 113, 902},{5312, 41, 166},
      {5376, 251, 336},{5440, 43, 170}, {5504, 21, 86},  {5568, 43, 174}, {5632, 45, 176},
      {5696, 45, 178}, {5760, 161, 120},{5824, 89, 182}, {5888, 323, 184},{5952, 47, 186},
      {6016, 23, 94},  {6080, 47, 190}, {6144, 263, 480},
  };
  return table;
}

inline const QppEntry* find_qpp(int k) {
  const auto& t = qpp_table();
  auto it = std::lower_bound(t.begin(), t.end(), k,
                             [](const QppEntry& e, int key) { return e.k < key; });
  if (it != t.end() && it->k == k) return &*it;
  return nullptr;
}

// RSC [13, 15]: feedback 1 + D^2 + D^3, feedforward 1 + D + D^3.
// State encoding s = s1*4 + s2*2 + s3 with s1 the newest register.
struct Trellis {
  std::array<std::array<int, 2>, 8> next{};
  std::array<std::array<int, 2>, 8> parity{};
  std::array<int, 8> term_input{};  // systematic bit that drives the state to 0

  Trellis() {
    for (int s = 0; s < 8; ++s) {
      const int s1 = (s >> 2) & 1, s2 = (s >> 1) & 1, s3 = s & 1;
      for (int u = 0; u < 2; ++u) {
        const int a = u ^ s2 ^ s3;
        parity[s][u] = a ^ s1 ^ s3;
        next[s][u] = (a << 2) | (s >> 1);
      }
      term_input[s] = s2 ^ s3;
    }
  }
};

inline const Trellis& trellis() {
  static const Trellis t;
  return t;
}

}  // namespace turbo_detail

inline std::vector<int> supported_code_block_sizes() {
  std::vector<int> out;
  for (const auto& e : turbo_detail::qpp_table()) out.push_back(e.k);
  return out;
}

// Largest supported code block size <= k_max, or 0 if none.
inline int largest_supported_block(int k_max) {
  int best = 0;
  for (const auto& e : turbo_detail::qpp_table()) {
    if (e.k <= k_max) best = e.k;
  }
  return best;
}

inline std::vector<int> qpp_interleave(int k) {
  const auto* e = turbo_detail::find_qpp(k);
  if (e == nullptr) {
    const auto& t = turbo_detail::qpp_table();
    int below = 0, above = 0;
    for (const auto& q : t) {
      if (q.k < k) below = q.k;
      if (q.k > k && above == 0) above = q.k;
    }
    throw std::invalid_argument("qpp_interleave: unsupported K=" + std::to_string(k) +
                                " (nearest supported: " + std::to_string(below) + ", " +
                                std::to_string(above) + ")");
  }
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) {
    const long long ii = i;
    perm[i] = static_cast<int>((e->f1 * ii + e->f2 * ii * ii) % k);
  }
  return perm;
}

namespace turbo_detail {

// Runs one RSC encoder; returns K parity bits plus 3 terminating
// (systematic, parity) pairs.
struct RscOutput {
  std::vector<std::uint8_t> parity;
  std::array<std::uint8_t, 3> tail_sys{};
  std::array<std::uint8_t, 3> tail_par{};
};

inline RscOutput rsc_encode(const std::vector<std::uint8_t>& bits) {
  const Trellis& t = trellis();
  RscOutput out;
  out.parity.resize(bits.size());
  int s = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const int u = bits[i] & 1;
    out.parity[i] = static_cast<std::uint8_t>(t.parity[s][u]);
    s = t.next[s][u];
  }
  for (int i = 0; i < 3; ++i) {
    const int u = t.term_input[s];
    out.tail_sys[i] = static_cast<std::uint8_t>(u);
    out.tail_par[i] = static_cast<std::uint8_t>(t.parity[s][u]);
    s = t.next[s][u];
  }
  return out;
}

constexpr double kNegInf = -1e30;

// Max-log BCJR over one terminated constituent. Returns the extrinsic LLRs.
inline void bcjr_maxlog(const std::vector<double>& l_sys, const std::vector<double>& l_par,
                        const std::vector<double>& l_apriori,
                        const std::array<double, 3>& tail_sys,
                        const std::array<double, 3>& tail_par, std::vector<double>& l_ext,
                        std::vector<double>& alpha, std::vector<double>& beta) {
  const Trellis& t = trellis();
  const int k = static_cast<int>(l_sys.size());
  const int steps = k + 3;

  auto gamma = [&](int step, int s, int u) {
    double ls, lp;
    if (step < k) {
      ls = l_sys[step] + l_apriori[step];
      lp = l_par[step];
    } else {
      ls = tail_sys[step - k];
      lp = tail_par[step - k];
    }
    const int p = t.parity[s][u];
    return 0.5 * ((u == 0) ? ls : -ls) + 0.5 * ((p == 0) ? lp : -lp);
  };

  alpha.assign(static_cast<std::size_t>(steps + 1) * 8, kNegInf);
  beta.assign(static_cast<std::size_t>(steps + 1) * 8, kNegInf);
  alpha[0] = 0.0;

  for (int step = 0; step < steps; ++step) {
    const double* a = &alpha[static_cast<std::size_t>(step) * 8];
    double* an = &alpha[static_cast<std::size_t>(step + 1) * 8];
    for (int s = 0; s < 8; ++s) {
      if (a[s] <= kNegInf) continue;
      if (step < k) {
        for (int u = 0; u < 2; ++u) {
          const double m = a[s] + gamma(step, s, u);
          const int ns = t.next[s][u];
          if (m > an[ns]) an[ns] = m;
        }
      } else {
        const int u = t.term_input[s];
        const double m = a[s] + gamma(step, s, u);
        const int ns = t.next[s][u];
        if (m > an[ns]) an[ns] = m;
      }
    }
  }

  beta[static_cast<std::size_t>(steps) * 8 + 0] = 0.0;
  for (int step = steps - 1; step >= 0; --step) {
    double* b = &beta[static_cast<std::size_t>(step) * 8];
    const double* bn = &beta[static_cast<std::size_t>(step + 1) * 8];
    for (int s = 0; s < 8; ++s) {
      if (step < k) {
        for (int u = 0; u < 2; ++u) {
          const double m = gamma(step, s, u) + bn[t.next[s][u]];
          if (m > b[s]) b[s] = m;
        }
      } else {
        const int u = t.term_input[s];
        const double m = gamma(step, s, u) + bn[t.next[s][u]];
        if (m > b[s]) b[s] = m;
      }
    }
  }

  l_ext.resize(k);
  for (int step = 0; step < k; ++step) {
    const double* a = &alpha[static_cast<std::size_t>(step) * 8];
    const double* bn = &beta[static_cast<std::size_t>(step + 1) * 8];
    double m0 = kNegInf, m1 = kNegInf;
    for (int s = 0; s < 8; ++s) {
      if (a[s] <= kNegInf) continue;
      const double g0 = a[s] + gamma(step, s, 0) + bn[t.next[s][0]];
      const double g1 = a[s] + gamma(step, s, 1) + bn[t.next[s][1]];
      if (g0 > m0) m0 = g0;
      if (g1 > m1) m1 = g1;
    }
    const double app = m0 - m1;
    l_ext[step] = app - l_sys[step] - l_apriori[step];
  }
}

}  // namespace turbo_detail

inline std::vector<std::uint8_t> turbo_encode(const std::vector<std::uint8_t>& info,
                                              const TurboCodeSpec& spec) {
  if (static_cast<int>(info.size()) != spec.k)
    throw std::invalid_argument("turbo_encode: info length != K");
  const std::vector<int> perm = qpp_interleave(spec.k);

  std::vector<std::uint8_t> interleaved(spec.k);
  for (int i = 0; i < spec.k; ++i) interleaved[i] = info[perm[i]];

  const auto enc1 = turbo_detail::rsc_encode(info);
  const auto enc2 = turbo_detail::rsc_encode(interleaved);

  std::vector<std::uint8_t> out;
  out.reserve(spec.coded_length());
  out.insert(out.end(), info.begin(), info.end());
  if (spec.rate == CodeRate::kOneThird) {
    out.insert(out.end(), enc1.parity.begin(), enc1.parity.end());
    out.insert(out.end(), enc2.parity.begin(), enc2.parity.end());
  } else {
    for (int i = 0; i < spec.k; ++i)
      out.push_back((i % 2 == 0) ? enc1.parity[i] : enc2.parity[i]);
  }
  for (int i = 0; i < 3; ++i) {
    out.push_back(enc1.tail_sys[i]);
    out.push_back(enc1.tail_par[i]);
  }
  for (int i = 0; i < 3; ++i) {
    out.push_back(enc2.tail_sys[i]);
    out.push_back(enc2.tail_par[i]);
  }
  return out;
}

// Rate-1/3 codeword -> rate-1/2 by keeping systematic bits and alternating
// the two parity streams.
inline std::vector<std::uint8_t> puncture_to_half(const std::vector<std::uint8_t>& coded,
                                                  int k) {
  if (static_cast<int>(coded.size()) != 3 * k + 12)
    throw std::invalid_argument("puncture_to_half: bad codeword length");
  std::vector<std::uint8_t> out;
  out.reserve(2 * k + 12);
  out.insert(out.end(), coded.begin(), coded.begin() + k);
  for (int i = 0; i < k; ++i)
    out.push_back((i % 2 == 0) ? coded[k + i] : coded[2 * k + i]);
  out.insert(out.end(), coded.begin() + 3 * k, coded.end());
  return out;
}

// Rate-1/2 LLRs -> rate-1/3 LLR layout with zeros at punctured positions.
inline std::vector<double> depuncture_from_half(const std::vector<double>& llr, int k) {
  if (static_cast<int>(llr.size()) != 2 * k + 12)
    throw std::invalid_argument("depuncture_from_half: bad LLR length");
  std::vector<double> out(3 * k + 12, 0.0);
  std::copy(llr.begin(), llr.begin() + k, out.begin());
  for (int i = 0; i < k; ++i) {
    if (i % 2 == 0)
      out[k + i] = llr[k + i];
    else
      out[2 * k + i] = llr[k + i];
  }
  std::copy(llr.begin() + 2 * k, llr.end(), out.begin() + 3 * k);
  return out;
}

inline std::vector<std::uint8_t> turbo_decode(const std::vector<double>& llr_in,
                                              const TurboCodeSpec& spec) {
  if (static_cast<int>(llr_in.size()) != spec.coded_length())
    throw std::invalid_argument("turbo_decode: LLR length mismatch");
  const int k = spec.k;
  const std::vector<double>* llr = &llr_in;
  std::vector<double> dep;
  if (spec.rate == CodeRate::kOneHalf) {
    dep = depuncture_from_half(llr_in, k);
    llr = &dep;
  }

  const std::vector<int> perm = qpp_interleave(k);
  std::vector<double> l_sys(llr->begin(), llr->begin() + k);
  std::vector<double> l_par1(llr->begin() + k, llr->begin() + 2 * k);
  std::vector<double> l_par2(llr->begin() + 2 * k, llr->begin() + 3 * k);
  std::array<double, 3> tail_sys1, tail_par1, tail_sys2, tail_par2;
  for (int i = 0; i < 3; ++i) {
    tail_sys1[i] = (*llr)[3 * k + 2 * i];
    tail_par1[i] = (*llr)[3 * k + 2 * i + 1];
    tail_sys2[i] = (*llr)[3 * k + 6 + 2 * i];
    tail_par2[i] = (*llr)[3 * k + 6 + 2 * i + 1];
  }

  std::vector<double> sys_int(k);
  for (int i = 0; i < k; ++i) sys_int[i] = l_sys[perm[i]];

  std::vector<double> le1(k, 0.0), le2_deint(k, 0.0), le1_int(k), le2(k);
  std::vector<double> alpha, beta;
  for (int it = 0; it < spec.decoder_iterations; ++it) {
    turbo_detail::bcjr_maxlog(l_sys, l_par1, le2_deint, tail_sys1, tail_par1, le1, alpha, beta);
    for (int i = 0; i < k; ++i) le1_int[i] = le1[perm[i]];
    turbo_detail::bcjr_maxlog(sys_int, l_par2, le1_int, tail_sys2, tail_par2, le2, alpha, beta);
    for (int i = 0; i < k; ++i) le2_deint[perm[i]] = le2[i];
  }

  std::vector<std::uint8_t> bits(k);
  for (int i = 0; i < k; ++i) {
    const double app = l_sys[i] + le1[i] + le2_deint[i];
    bits[i] = (app >= 0.0) ? 0 : 1;
  }
  return bits;
}

}  // namespace qofdm
