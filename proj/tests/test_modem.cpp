#include <catch2/catch_amalgamated.hpp>

#include "qofdm/channel.hpp"
#include "qofdm/modem.hpp"
#include "qofdm/random.hpp"

using namespace qofdm;

TEST_CASE("4-QAM maps 00 to (1+j)/sqrt(2) and is constant modulus", "[modem]") {
  const auto c = Constellation::qam4();
  std::vector<std::uint8_t> bits = {0, 0};
  const cvec s = qam_map(bits, c);
  REQUIRE(s[0].real() == Catch::Approx(1.0 / std::sqrt(2.0)));
  REQUIRE(s[0].imag() == Catch::Approx(1.0 / std::sqrt(2.0)));
  for (const cplx& p : c.points) REQUIRE(std::abs(p) == Catch::Approx(1.0));
}

TEST_CASE("constellations have unit average energy and Gray adjacency", "[modem]") {
  for (int order : {4, 16}) {
    const auto c = Constellation::by_order(order);
    double e = 0.0;
    for (const cplx& p : c.points) e += std::norm(p);
    REQUIRE(e / order == Catch::Approx(1.0));

    // Gray property: nearest neighbours differ in exactly one bit.
    double dmin = 1e9;
    for (int a = 0; a < order; ++a)
      for (int b = a + 1; b < order; ++b)
        dmin = std::min(dmin, std::abs(c.points[a] - c.points[b]));
    for (int a = 0; a < order; ++a) {
      for (int b = 0; b < order; ++b) {
        if (a == b) continue;
        if (std::abs(c.points[a] - c.points[b]) < dmin * 1.001) {
          const int diff = a ^ b;
          REQUIRE((diff & (diff - 1)) == 0);
        }
      }
    }
  }
}

TEST_CASE("qam_map rejects bad bit counts", "[modem]") {
  const auto c = Constellation::qam4();
  std::vector<std::uint8_t> bits = {0, 0, 1};
  REQUIRE_THROWS_AS(qam_map(bits, c), std::invalid_argument);
}

TEST_CASE("subcarrier plan excludes DC and splits around it", "[modem]") {
  const auto plan = SubcarrierPlan::make(8, 4);
  REQUIRE(plan.freqs == std::vector<int>{-2, -1, 1, 2});
  REQUIRE(plan.bins == std::vector<int>{6, 7, 1, 2});
}

TEST_CASE("subcarrier map/extract round trip and norm preservation", "[modem]") {
  const auto plan = SubcarrierPlan::make(8, 4);
  cvec s_d = {cplx{1, 0}, cplx{1, 0}, cplx{1, 0}, cplx{1, 0}};
  const cvec mapped = subcarrier_map(s_d, plan);
  for (int i = 0; i < 8; ++i) {
    const bool active = std::find(plan.bins.begin(), plan.bins.end(), i) != plan.bins.end();
    REQUIRE(std::abs(mapped[i]) == (active ? 1.0 : 0.0));
  }
  REQUIRE(norm2(mapped) == Catch::Approx(norm2(s_d)));
  REQUIRE(subcarrier_extract(mapped, plan) == s_d);
}

TEST_CASE("ofdm modulate prepends the symbol tail as CP", "[modem]") {
  RandomSource rng(5, 1);
  cvec s(64);
  for (auto& x : s) x = rng.cgaussian(1.0);
  const int cp = 16;
  const cvec tx = ofdm_modulate(s, cp);
  REQUIRE(tx.size() == 64u + cp);
  for (int i = 0; i < cp; ++i) REQUIRE(tx[i] == tx[64 - cp + i + cp]);
  REQUIRE(ofdm_modulate(s, 0) == idft(s));
  // core energy preserved
  double core = 0.0;
  for (int i = cp; i < cp + 64; ++i) core += std::norm(tx[i]);
  REQUIRE(core == Catch::Approx(norm2(s)));
  REQUIRE_THROWS_AS(ofdm_modulate(s, 64), std::invalid_argument);
}

TEST_CASE("cp_strip recovers the symbol noiselessly", "[modem]") {
  RandomSource rng(6, 1);
  cvec s(64);
  for (auto& x : s) x = rng.cgaussian(1.0);
  const cvec rx = cp_strip(ofdm_modulate(s, 16), 16);
  const cvec back = dft(rx);
  for (std::size_t i = 0; i < s.size(); ++i) REQUIRE(std::abs(back[i] - s[i]) < 1e-12);
}

TEST_CASE("CP turns the FIR channel into per-subcarrier gains", "[modem]") {
  // Passing the CP-extended symbol through an L-tap FIR and stripping the CP
  // must equal idft(h .* s) with h the channel frequency response.
  RandomSource rng(7, 2);
  const int n = 64, cp = 16;
  const auto plan = SubcarrierPlan::make(n, 32);
  cvec s_d(32);
  for (auto& x : s_d) x = rng.cgaussian(1.0);
  const cvec s = subcarrier_map(s_d, plan);

  auto ch = draw_channel(rng);
  const cvec h = freq_response(ch, n);

  // Time-domain: two consecutive symbols so the CP of the second absorbs the
  // first symbol's tail, exercising genuine inter-symbol interference.
  cvec tx;
  const cvec sym = ofdm_modulate(s, cp);
  tx.insert(tx.end(), sym.begin(), sym.end());
  tx.insert(tx.end(), sym.begin(), sym.end());
  const cvec rx = apply_fir(tx, ch);
  const cvec second(rx.begin() + (n + cp), rx.end());
  const cvec rx_core = cp_strip(second, cp);

  cvec expect(n);
  for (int i = 0; i < n; ++i) expect[i] = h[i] * s[i];
  const cvec expect_t = idft(expect);
  for (int i = 0; i < n; ++i) REQUIRE(std::abs(rx_core[i] - expect_t[i]) < 1e-10);
}
