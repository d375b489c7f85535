#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "qofdm/coding.hpp"
#include "qofdm/random.hpp"

using namespace qofdm;

namespace {

std::vector<std::uint8_t> random_bits(RandomSource& rng, int n) {
  std::vector<std::uint8_t> b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng.bit());
  return b;
}

// BPSK over AWGN: bit 0 -> +1. LLR = ln P0/P1 = 2r/sigma^2 * ... with
// amplitude a and noise variance s2 per real sample: LLR = 2*a*r/s2.
std::vector<double> bpsk_awgn_llrs(const std::vector<std::uint8_t>& coded, double sigma2,
                                   RandomSource& rng) {
  std::vector<double> llr(coded.size());
  for (std::size_t i = 0; i < coded.size(); ++i) {
    const double tx = coded[i] ? -1.0 : 1.0;
    const double r = tx + std::sqrt(sigma2) * rng.gaussian();
    llr[i] = 2.0 * r / sigma2;
  }
  return llr;
}

}  // namespace

TEST_CASE("qpp permutations are bijective for every table size", "[coding]") {
  for (int k : supported_code_block_sizes()) {
    const auto perm = qpp_interleave(k);
    std::vector<char> seen(k, 0);
    for (int v : perm) {
      REQUIRE(v >= 0);
      REQUIRE(v < k);
      REQUIRE(seen[v] == 0);
      seen[v] = 1;
    }
  }
}

TEST_CASE("qpp basics", "[coding]") {
  REQUIRE(qpp_interleave(40)[0] == 0);  // f(0) = 0 for any entry
  REQUIRE_THROWS_WITH(qpp_interleave(41), Catch::Matchers::ContainsSubstring("40"));
  REQUIRE_THROWS_WITH(qpp_interleave(41), Catch::Matchers::ContainsSubstring("48"));

  // applying the permutation then its inverse is the identity
  const auto perm = qpp_interleave(1184);
  std::vector<int> data(1184);
  std::iota(data.begin(), data.end(), 0);
  std::vector<int> shuffled(1184), back(1184);
  for (int i = 0; i < 1184; ++i) shuffled[i] = data[perm[i]];
  for (int i = 0; i < 1184; ++i) back[perm[i]] = shuffled[i];
  REQUIRE(back == data);
}

TEST_CASE("encoder output lengths and all-zero codeword", "[coding]") {
  TurboCodeSpec spec{1184, CodeRate::kOneThird};
  const std::vector<std::uint8_t> zeros(1184, 0);
  const auto coded = turbo_encode(zeros, spec);
  REQUIRE(coded.size() == 3u * 1184 + 12);
  for (auto b : coded) REQUIRE(b == 0);

  TurboCodeSpec half{1184, CodeRate::kOneHalf};
  REQUIRE(turbo_encode(zeros, half).size() == 2u * 1184 + 12);

  std::vector<std::uint8_t> wrong(100, 0);
  REQUIRE_THROWS_AS(turbo_encode(wrong, spec), std::invalid_argument);
}

TEST_CASE("encoder is linear over GF(2)", "[coding]") {
  RandomSource rng(31, 1);
  TurboCodeSpec spec{320, CodeRate::kOneThird};
  const auto a = random_bits(rng, 320);
  const auto b = random_bits(rng, 320);
  std::vector<std::uint8_t> axb(320);
  for (int i = 0; i < 320; ++i) axb[i] = a[i] ^ b[i];
  const auto ca = turbo_encode(a, spec);
  const auto cb = turbo_encode(b, spec);
  const auto cab = turbo_encode(axb, spec);
  for (std::size_t i = 0; i < ca.size(); ++i) REQUIRE(cab[i] == (ca[i] ^ cb[i]));
}

TEST_CASE("noiseless loopback decodes exactly", "[coding]") {
  RandomSource rng(32, 1);
  for (CodeRate rate : {CodeRate::kOneThird, CodeRate::kOneHalf}) {
    TurboCodeSpec spec{512, rate};
    const auto info = random_bits(rng, 512);
    const auto coded = turbo_encode(info, spec);
    std::vector<double> llr(coded.size());
    for (std::size_t i = 0; i < coded.size(); ++i) llr[i] = coded[i] ? -30.0 : 30.0;
    REQUIRE(turbo_decode(llr, spec) == info);
  }
}

TEST_CASE("all-plus LLRs decode to the all-zero word", "[coding]") {
  TurboCodeSpec spec{128, CodeRate::kOneThird};
  std::vector<double> llr(spec.coded_length(), 30.0);
  const auto out = turbo_decode(llr, spec);
  for (auto b : out) REQUIRE(b == 0);
}

TEST_CASE("puncture/depuncture round trip", "[coding]") {
  RandomSource rng(33, 1);
  TurboCodeSpec spec{256, CodeRate::kOneThird};
  const auto info = random_bits(rng, 256);
  const auto coded = turbo_encode(info, spec);
  const auto punct = puncture_to_half(coded, 256);
  REQUIRE(punct.size() == 2u * 256 + 12);
  // systematic bits intact
  for (int i = 0; i < 256; ++i) REQUIRE(punct[i] == coded[i]);
  // rate-1/2 layout equals direct encoding at rate 1/2
  TurboCodeSpec half{256, CodeRate::kOneHalf};
  REQUIRE(punct == turbo_encode(info, half));

  std::vector<double> llr(punct.size());
  for (std::size_t i = 0; i < punct.size(); ++i) llr[i] = punct[i] ? -4.0 : 4.0;
  const auto dep = depuncture_from_half(llr, 256);
  REQUIRE(dep.size() == 3u * 256 + 12);
  for (int i = 0; i < 256; ++i) REQUIRE(dep[i] == llr[i]);
  int zeros = 0;
  for (int i = 0; i < 256; ++i) {
    const double p1 = dep[256 + i], p2 = dep[512 + i];
    if (i % 2 == 0) {
      REQUIRE(p2 == 0.0);
      REQUIRE(p1 != 0.0);
    } else {
      REQUIRE(p1 == 0.0);
      REQUIRE(p2 != 0.0);
    }
    zeros += (p1 == 0.0) + (p2 == 0.0);
  }
  REQUIRE(zeros == 256);
}

TEST_CASE("max-log decoding is invariant to LLR scaling", "[coding]") {
  RandomSource rng(34, 1);
  TurboCodeSpec spec{320, CodeRate::kOneThird};
  const auto info = random_bits(rng, 320);
  const auto coded = turbo_encode(info, spec);
  RandomSource noise(34, 2);
  auto llr = bpsk_awgn_llrs(coded, 0.9, noise);
  const auto out1 = turbo_decode(llr, spec);
  for (double& v : llr) v *= 2.0;
  const auto out2 = turbo_decode(llr, spec);
  REQUIRE(out1 == out2);
}

TEST_CASE("decoder BER improves with iterations near the waterfall", "[coding]") {
  // Averaged over blocks, BER at 8 iterations must not exceed BER at 1
  // iteration (allowing 2x Monte Carlo slack when both are tiny).
  RandomSource rng(35, 1);
  const int k = 512, blocks = 120;
  const double ebn0_db = 1.2;
  const double rate = static_cast<double>(k) / (3 * k + 12);
  const double sigma2 = 1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0));

  long err1 = 0, err8 = 0;
  RandomSource noise(35, 2);
  for (int b = 0; b < blocks; ++b) {
    const auto info = random_bits(rng, k);
    TurboCodeSpec spec{k, CodeRate::kOneThird};
    const auto coded = turbo_encode(info, spec);
    const auto llr = bpsk_awgn_llrs(coded, sigma2, noise);
    spec.decoder_iterations = 1;
    const auto d1 = turbo_decode(llr, spec);
    spec.decoder_iterations = 8;
    const auto d8 = turbo_decode(llr, spec);
    for (int i = 0; i < k; ++i) {
      err1 += d1[i] != info[i];
      err8 += d8[i] != info[i];
    }
  }
  INFO("errors at 1 iter " << err1 << ", at 8 iters " << err8);
  REQUIRE(err8 <= std::max<long>(2 * err1, 10));
  REQUIRE(err8 < err1);  // waterfall region: iterations must actually help
}

TEST_CASE("turbo waterfall: BER < 1e-4 at Eb/N0 = 3 dB over 1e6 bits", "[coding][slow]") {
  RandomSource rng(36, 1);
  RandomSource noise(36, 2);
  const int k = 6144;
  TurboCodeSpec spec{k, CodeRate::kOneThird};
  const double rate = static_cast<double>(k) / spec.coded_length();
  const double sigma2 = 1.0 / (2.0 * rate * std::pow(10.0, 3.0 / 10.0));
  long errors = 0, bits = 0;
  while (bits < 1000000) {
    const auto info = random_bits(rng, k);
    const auto coded = turbo_encode(info, spec);
    const auto llr = bpsk_awgn_llrs(coded, sigma2, noise);
    const auto dec = turbo_decode(llr, spec);
    for (int i = 0; i < k; ++i) errors += dec[i] != info[i];
    bits += k;
  }
  INFO("BER " << static_cast<double>(errors) / bits);
  REQUIRE(static_cast<double>(errors) / bits < 1e-4);
}
