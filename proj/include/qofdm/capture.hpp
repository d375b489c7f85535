// Waveform capture files: little-endian interleaved (real, imag) float64
// samples, plus a sidecar "<path>.meta" text file carrying N, the sample
// rate, the schedule version and the payload seed for replay.

#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qofdm/numerics.hpp"

namespace qofdm {

struct CaptureMeta {
  int n = 0;
  double sample_rate_hz = 0.0;
  int schedule_version = 0;
  std::uint64_t seed = 0;
};

struct Capture {
  cvec samples;
  CaptureMeta meta;
};

inline void write_capture(const std::string& path, const cvec& samples,
                          const CaptureMeta& meta) {
  std::ofstream iq(path, std::ios::binary);
  if (!iq) throw std::runtime_error("write_capture: cannot open " + path);
  for (const cplx& x : samples) {
    const double re = x.real(), im = x.imag();
    iq.write(reinterpret_cast<const char*>(&re), sizeof(double));
    iq.write(reinterpret_cast<const char*>(&im), sizeof(double));
  }
  if (!iq) throw std::runtime_error("write_capture: write failed for " + path);

  std::ofstream ms(path + ".meta");
  if (!ms) throw std::runtime_error("write_capture: cannot open " + path + ".meta");
  ms << "n = " << meta.n << "\n"
     << "sample_rate_hz = " << meta.sample_rate_hz << "\n"
     << "schedule_version = " << meta.schedule_version << "\n"
     << "seed = " << meta.seed << "\n";
}

inline Capture read_capture(const std::string& path) {
  std::ifstream iq(path, std::ios::binary);
  if (!iq) throw std::runtime_error("read_capture: cannot open " + path);
  Capture cap;
  double buf[2];
  while (iq.read(reinterpret_cast<char*>(buf), sizeof(buf)))
    cap.samples.emplace_back(buf[0], buf[1]);
  if (iq.gcount() != 0) throw std::runtime_error("read_capture: truncated sample in " + path);

  std::ifstream ms(path + ".meta");
  if (!ms) throw std::runtime_error("read_capture: missing sidecar " + path + ".meta");
  std::string line;
  while (std::getline(ms, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "n")
      cap.meta.n = std::stoi(value);
    else if (key == "sample_rate_hz")
      cap.meta.sample_rate_hz = std::stod(value);
    else if (key == "schedule_version")
      cap.meta.schedule_version = std::stoi(value);
    else if (key == "seed")
      cap.meta.seed = std::stoull(value);
  }
  return cap;
}

}  // namespace qofdm
