#include <catch2/catch_amalgamated.hpp>

#include "qofdm/channel.hpp"
#include "qofdm/modem.hpp"
#include "qofdm/random.hpp"
#include "support/oracles.hpp"

using namespace qofdm;

TEST_CASE("normalized power profile", "[channel]") {
  const auto p = normalized_profile(default_profile_db());
  double sum = 0.0;
  for (double x : p) sum += x;
  REQUIRE(sum == Catch::Approx(1.0).epsilon(1e-12));
  // 10^(dB/10) then normalize for [0, -7, -12, -18] dB
  REQUIRE(p[0] == Catch::Approx(0.7821844061).epsilon(1e-9));
  REQUIRE(p[1] == Catch::Approx(0.1560663069).epsilon(1e-9));
  REQUIRE(p[2] == Catch::Approx(0.0493524996).epsilon(1e-9));
  REQUIRE(p[3] == Catch::Approx(0.0123967874).epsilon(1e-9));
}

TEST_CASE("channel draw has unit expected energy and L taps", "[channel]") {
  RandomSource rng(11, 1);
  double e = 0.0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    const auto ch = draw_channel(rng);
    REQUIRE(ch.taps.size() == 4u);
    e += ch.energy();
  }
  REQUIRE(e / trials == Catch::Approx(1.0).epsilon(0.01));
}

TEST_CASE("frequency response of a unit tap at delay 0 is all ones", "[channel]") {
  ChannelRealization ch;
  ch.taps = {cplx{1.0, 0.0}};
  const cvec h = freq_response(ch, 16);
  for (const cplx& x : h) REQUIRE(std::abs(x - cplx{1.0, 0.0}) < 1e-12);
}

TEST_CASE("frequency response satisfies Parseval for the unnormalized DFT", "[channel]") {
  RandomSource rng(12, 1);
  const auto ch = draw_channel(rng);
  const int n = 64;
  const cvec h = freq_response(ch, n);
  REQUIRE(norm2(h) / n == Catch::Approx(ch.energy()).epsilon(1e-10));
}

TEST_CASE("awgn variance and independence of real/imag parts", "[channel]") {
  RandomSource rng(13, 1);
  const double sigma2 = 0.37;
  cvec y(1000000, cplx{0.0, 0.0});
  apply_awgn(y, sigma2, rng);
  double p = 0.0, cross = 0.0, pr = 0.0, pi = 0.0;
  for (const cplx& x : y) {
    p += std::norm(x);
    cross += x.real() * x.imag();
    pr += x.real() * x.real();
    pi += x.imag() * x.imag();
  }
  const std::size_t n = y.size();
  REQUIRE(p / n == Catch::Approx(sigma2).epsilon(0.01));
  const double rho = (cross / n) / std::sqrt((pr / n) * (pi / n));
  REQUIRE(std::abs(rho) < 0.01);

  cvec z(8, cplx{1.0, 2.0});
  apply_awgn(z, 0.0, rng);
  for (const cplx& x : z) REQUIRE(x == cplx{1.0, 2.0});
}

TEST_CASE("sigma calibration", "[channel]") {
  REQUIRE(calibrate_sigma(1.0, 8, 8, 0.0) == Catch::Approx(1.0));
  REQUIRE(calibrate_sigma(1.0, 2048, 1186, 12.0) ==
          Catch::Approx((1186.0 / 2048.0) / std::pow(10.0, 1.2)).epsilon(1e-12));
  REQUIRE(calibrate_sigma(1.0, 2048, 1186, 12.0) == Catch::Approx(0.036539).epsilon(1e-4));
  REQUIRE(calibrate_sigma(2.0, 64, 32, 3.0) ==
          Catch::Approx(2.0 * calibrate_sigma(1.0, 64, 32, 3.0)).epsilon(1e-12));
}

TEST_CASE("received pilot symbol equals F^H diag(h) x + n against direct matrices", "[channel]") {
  // Simulated chain (frequency-domain construction) versus a direct
  // matrix evaluation of the system model at N = 64.
  RandomSource rng(14, 2);
  const int n = 64;
  const auto plan = SubcarrierPlan::make(n, 32);
  const auto ch = draw_channel(rng);
  const cvec h = freq_response(ch, n);

  cvec s_d(plan.n_used);
  for (auto& x : s_d) x = rng.cgaussian(1.0);
  const cvec s = subcarrier_map(s_d, plan);

  cvec x(n);
  for (int i = 0; i < n; ++i) x[i] = h[i] * s[i];
  cvec z = idft(x);
  const double sigma2 = calibrate_sigma(ch.energy(), n, plan.n_used, 10.0);
  RandomSource noise_rng(14, 3);
  apply_awgn(z, sigma2, noise_rng);

  // Direct: time-domain via explicit naive idft of diag(h)*s plus the same
  // noise draws.
  const auto zt = oracles::naive_dft(x, /*inverse=*/true);
  RandomSource noise_rng2(14, 3);
  cvec z2(zt.begin(), zt.end());
  apply_awgn(z2, sigma2, noise_rng2);
  for (int i = 0; i < n; ++i) REQUIRE(std::abs(z[i] - z2[i]) < 1e-10);
}
