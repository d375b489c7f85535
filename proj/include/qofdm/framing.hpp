// Radio frame structure: 10 subframes of 2 slots, 7 OFDM symbols per slot,
// CP of 160 samples on symbol 0 and 144 on symbols 1-6. PSS (Zadoff-Chu)
// rides the last symbol of slots 0 and 10; slot 1 opens with a null symbol
// for noise estimation; slots 2-19 carry one pilot symbol followed by data
// symbols, one turbo codeword per slot.

#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qofdm/coding.hpp"
#include "qofdm/modem.hpp"
#include "qofdm/numerics.hpp"
#include "qofdm/random.hpp"

namespace qofdm {

enum class SymbolRole { kIdle, kPss, kPilot, kNull, kData };

struct FrameSchedule {
  int n = 2048;
  int n_data = 1186;
  int subframes = 10;
  int slots_per_subframe = 2;
  int symbols_per_slot = 7;
  int cp_first = 160;
  int cp_rest = 144;
  double sample_rate_hz = 153.6e6;
  int version = 1;
  // Literal reading of the frame description places a PSS in symbol 6 of
  // every slot 0..10; the default uses slots {0, 10} only.
  bool literal_pss_slots = false;

  int slots() const { return subframes * slots_per_subframe; }
  int cp_len(int sym) const { return sym == 0 ? cp_first : cp_rest; }
  int slot_samples() const {
    return symbols_per_slot * n + cp_first + (symbols_per_slot - 1) * cp_rest;
  }
  int frame_samples() const { return slots() * slot_samples(); }

  bool is_pss_slot(int slot) const {
    return literal_pss_slots ? (slot >= 0 && slot <= 10) : (slot == 0 || slot == 10);
  }

  SymbolRole role(int slot, int sym) const {
    if (slot < 0 || slot >= slots() || sym < 0 || sym >= symbols_per_slot)
      throw std::invalid_argument("FrameSchedule::role: out of range");
    if (sym == symbols_per_slot - 1 && is_pss_slot(slot)) return SymbolRole::kPss;
    if (slot == 1 && sym == 0) return SymbolRole::kNull;
    if (slot >= 2) return sym == 0 ? SymbolRole::kPilot : SymbolRole::kData;
    return SymbolRole::kIdle;
  }

  int data_symbols_in_slot(int slot) const {
    int count = 0;
    for (int sym = 0; sym < symbols_per_slot; ++sym)
      if (role(slot, sym) == SymbolRole::kData) ++count;
    return count;
  }
};

struct SymbolInfo {
  int slot = 0;
  int sym = 0;
  long offset = 0;  // first sample of the CP
  int cp_len = 0;
  SymbolRole role = SymbolRole::kIdle;

  long core_offset() const { return offset + cp_len; }
};

inline std::vector<SymbolInfo> frame_layout(const FrameSchedule& sched) {
  std::vector<SymbolInfo> out;
  out.reserve(static_cast<std::size_t>(sched.slots()) * sched.symbols_per_slot);
  long offset = 0;
  for (int slot = 0; slot < sched.slots(); ++slot) {
    for (int sym = 0; sym < sched.symbols_per_slot; ++sym) {
      SymbolInfo info;
      info.slot = slot;
      info.sym = sym;
      info.offset = offset;
      info.cp_len = sched.cp_len(sym);
      info.role = sched.role(slot, sym);
      out.push_back(info);
      offset += info.cp_len + sched.n;
    }
  }
  return out;
}

// Zadoff-Chu synchronization symbol. The length-63 root sequence
// exp(-j pi root n(n+1) / 63) has its center element punctured at DC and the
// remaining 62 elements mapped symmetrically around DC. Returns the
// frequency-domain symbol t and the unit-norm time-domain reference t_r.
struct PssPair {
  cvec t;    // frequency domain, length N
  cvec t_r;  // time domain, unit norm, length N
};

inline cvec zc_sequence(int root, int length) {
  cvec z(length);
  for (int m = 0; m < length; ++m) {
    const double phase = -std::numbers::pi * root * m * (m + 1) / static_cast<double>(length);
    z[m] = std::polar(1.0, phase);
  }
  return z;
}

inline PssPair zc_pss(int root, int n) {
  if (std::gcd(root, 63) != 1)
    throw std::invalid_argument("zc_pss: root must be coprime with 63");
  const cvec z = zc_sequence(root, 63);
  const auto plan = SubcarrierPlan::make(n, 62);
  cvec t_d(62);
  for (int i = 0; i < 31; ++i) t_d[i] = z[i];            // frequencies -31..-1
  for (int i = 31; i < 62; ++i) t_d[i] = z[i + 1];       // frequencies +1..+31
  PssPair out;
  out.t = subcarrier_map(t_d, plan);
  out.t_r = idft(out.t);
  const double nrm = std::sqrt(norm2(out.t_r));
  for (cplx& x : out.t_r) x /= nrm;
  return out;
}

struct PilotSpec {
  std::uint64_t seed = 0x5EED;

  // Equiprobable 4-QAM entries, |p_j| = 1, fixed by the seed.
  cvec pilot_data(const SubcarrierPlan& plan) const {
    RandomSource rng(seed, static_cast<std::uint64_t>(RngStream::kPilot));
    cvec p(plan.n_used);
    const double s = 1.0 / std::sqrt(2.0);
    for (auto& x : p) x = {s * (1 - 2 * rng.bit()), s * (1 - 2 * rng.bit())};
    return p;
  }
};

// Per-slot code sizing: one codeword per data slot, block size chosen as the
// largest supported size whose codeword fits the slot's coded-bit capacity;
// leftover positions are padded with zero bits.
struct SlotCoding {
  int data_symbols = 0;
  int active_carriers = 0;  // data entries actually carrying coded bits
  int capacity_bits = 0;
  int k = 0;
  int coded_bits = 0;
  int pad_bits = 0;
};

inline int active_data_carriers(const Constellation& c, int n_data) {
  // 16-QAM leaves the final data subcarrier to a fixed dummy symbol so the
  // coded-bit count stays divisible by 4.
  return c.order == 16 ? n_data - 1 : n_data;
}

// Scrambles the pad region after a codeword so padded symbols keep the unit
// average energy the SNR calibration assumes. Deterministic per slot tag.
inline void fill_padding(std::vector<std::uint8_t>& bits, std::size_t from,
                         std::uint64_t slot_tag) {
  RandomSource rng(0xFADE, static_cast<std::uint64_t>(RngStream::kPadding), slot_tag);
  for (std::size_t i = from; i < bits.size(); ++i)
    bits[i] = static_cast<std::uint8_t>(rng.bit());
}

inline cplx dummy_data_symbol() { return {1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2}; }

inline SlotCoding slot_coding(const Constellation& c, CodeRate rate, int data_symbols,
                              int n_data) {
  SlotCoding sc;
  sc.data_symbols = data_symbols;
  sc.active_carriers = active_data_carriers(c, n_data);
  sc.capacity_bits = data_symbols * sc.active_carriers * c.bits_per_symbol;
  const int denom = rate == CodeRate::kOneThird ? 3 : 2;
  const int k_max = (sc.capacity_bits - 12) / denom;
  sc.k = largest_supported_block(k_max);
  if (sc.k == 0) throw std::invalid_argument("slot_coding: capacity below smallest block");
  sc.coded_bits = denom * sc.k + 12;
  sc.pad_bits = sc.capacity_bits - sc.coded_bits;
  return sc;
}

// Everything the metric computation needs to score a received frame.
struct SlotLedger {
  int slot = 0;
  SlotCoding coding;
  std::vector<std::uint8_t> info_bits;
  std::vector<std::uint8_t> coded_bits;  // codeword then pad zeros
  std::vector<int> data_symbol_indices;  // symbol index within the slot
};

struct FrameBuild {
  cvec samples;
  std::vector<SlotLedger> slots;
  cvec pilot_data;  // p_d used on every pilot symbol
};

inline long frame_payload_bits(const FrameSchedule& sched, const Constellation& c,
                               CodeRate rate) {
  long total = 0;
  for (int slot = 0; slot < sched.slots(); ++slot) {
    const int ds = sched.data_symbols_in_slot(slot);
    if (ds > 0) total += slot_coding(c, rate, ds, sched.n_data).k;
  }
  return total;
}

inline FrameBuild build_frame(const std::vector<std::uint8_t>& payload,
                              const FrameSchedule& sched, const PilotSpec& pilot,
                              const Constellation& c, CodeRate rate, int zc_root = 25) {
  if (static_cast<long>(payload.size()) != frame_payload_bits(sched, c, rate))
    throw std::invalid_argument("build_frame: payload size mismatch");

  const auto plan = SubcarrierPlan::make(sched.n, sched.n_data);
  const cvec p_d = pilot.pilot_data(plan);
  const cvec pilot_freq = subcarrier_map(p_d, plan);
  const auto pss = zc_pss(zc_root, sched.n);

  FrameBuild out;
  out.samples.reserve(sched.frame_samples());
  out.pilot_data = p_d;

  std::size_t consumed = 0;
  for (int slot = 0; slot < sched.slots(); ++slot) {
    // Prepare this slot's codeword if it carries data.
    SlotLedger ledger;
    std::size_t bit_cursor = 0;
    const int ds = sched.data_symbols_in_slot(slot);
    if (ds > 0) {
      ledger.slot = slot;
      ledger.coding = slot_coding(c, rate, ds, sched.n_data);
      ledger.info_bits.assign(payload.begin() + consumed,
                              payload.begin() + consumed + ledger.coding.k);
      consumed += ledger.coding.k;
      TurboCodeSpec spec{ledger.coding.k, rate};
      ledger.coded_bits = turbo_encode(ledger.info_bits, spec);
      ledger.coded_bits.resize(ledger.coding.capacity_bits, 0);
      fill_padding(ledger.coded_bits, ledger.coding.coded_bits,
                   static_cast<std::uint64_t>(slot));
    }

    for (int sym = 0; sym < sched.symbols_per_slot; ++sym) {
      const SymbolRole role = sched.role(slot, sym);
      const int cp = sched.cp_len(sym);
      cvec freq(sched.n, cplx{0.0, 0.0});
      switch (role) {
        case SymbolRole::kPss:
          freq = pss.t;
          break;
        case SymbolRole::kPilot:
          freq = pilot_freq;
          break;
        case SymbolRole::kData: {
          const int active = ledger.coding.active_carriers;
          const int bps = c.bits_per_symbol;
          std::vector<std::uint8_t> bits(ledger.coded_bits.begin() + bit_cursor,
                                         ledger.coded_bits.begin() + bit_cursor +
                                             static_cast<std::size_t>(active) * bps);
          bit_cursor += static_cast<std::size_t>(active) * bps;
          cvec s_d = qam_map(bits, c);
          if (active < plan.n_used) s_d.push_back(dummy_data_symbol());
          freq = subcarrier_map(s_d, plan);
          ledger.data_symbol_indices.push_back(sym);
          break;
        }
        case SymbolRole::kNull:
        case SymbolRole::kIdle:
          break;
      }
      if (role == SymbolRole::kNull || role == SymbolRole::kIdle) {
        out.samples.insert(out.samples.end(), sched.n + cp, cplx{0.0, 0.0});
      } else {
        const cvec sym_samples = ofdm_modulate(freq, cp);
        out.samples.insert(out.samples.end(), sym_samples.begin(), sym_samples.end());
      }
    }
    if (ds > 0) out.slots.push_back(std::move(ledger));
  }
  return out;
}

}  // namespace qofdm
