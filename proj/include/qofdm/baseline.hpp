// Conventional receiver used as the comparison method: LS/LMMSE channel
// estimation on F q_P and a per-subcarrier one-tap equalizer, both ignoring
// the quantization nonlinearity. Implemented as the GTurbo loop with one
// iteration and Module A bypassed, which keeps the documented reduction
// property bit-exact.

#pragma once

#include "qofdm/frontend.hpp"
#include "qofdm/gturbo.hpp"
#include "qofdm/modem.hpp"

namespace qofdm {

// Quantization distortion of a unit-variance Gaussian input through the
// B-bit mid-rise quantizer at the matched step size: E[(y - Q(y))^2], per
// real dimension, in closed form per cell.
inline double quantizer_gaussian_mse(int bits) {
  const QuantizerSpec q = QuantizerSpec::make(bits, 1.0);
  const int ncells = 1 << bits;
  double mse = 0.0;
  for (int b = 1; b <= ncells; ++b) {
    const double a = q.thresholds[b - 1];
    const double u = q.thresholds[b];
    const double c = q.levels[b - 1];
    const double pa = std::isinf(a) ? 0.0 : norm_pdf(a);
    const double pu = std::isinf(u) ? 0.0 : norm_pdf(u);
    const double za = std::isinf(a) ? 0.0 : norm_cdf(a);
    const double zu = std::isinf(u) ? 1.0 : norm_cdf(u);
    const double apa = std::isinf(a) ? 0.0 : a * pa;
    const double upu = std::isinf(u) ? 0.0 : u * pu;
    // int (y-c)^2 phi(y) dy over (a, u)
    mse += (zu - za) * (1.0 + c * c) - (upu - apa) - 2.0 * c * (pa - pu);
  }
  return mse;
}

// h_bar_d = W_d (F q_P)_d / p_bar_d, with the same cached LMMSE weight the
// GTurbo estimator uses.
inline cvec conventional_estimate(const cvec& q_p, const cvec& pilot_d, double g_agc,
                                  const SubcarrierPlan& plan, int l_hat, double gamma2) {
  EstimatorConfig cfg;
  cfg.l_hat = l_hat;
  cfg.gamma2 = gamma2;
  cfg.t_max = 1;
  cfg.normalize = false;
  cfg.module_a_mode = ModuleAMode::kBypass;
  // The bypass variance only feeds the (unused) extrinsic bookkeeping here.
  cfg.bypass_variance = 1.0;
  const QuantizerSpec unused = QuantizerSpec::make(1, 1.0);
  return estimate_channel(q_p, pilot_d, g_agc, 0.0, unused, plan, cfg).h_bar_d;
}

// One-tap equalization followed by the same max-log LLR rule the GTurbo
// detector uses, with the supplied noise-plus-distortion variance.
inline std::vector<double> conventional_detect(const cvec& q_d, const cvec& h_bar_d,
                                               double npd_variance,
                                               const SubcarrierPlan& plan,
                                               const Constellation& c, int active = -1) {
  const cvec fq = dft(q_d);
  cvec x_d(plan.n_used);
  for (int j = 0; j < plan.n_used; ++j) x_d[j] = fq[plan.bins[j]];
  return compute_llr(x_d, npd_variance, h_bar_d, c, active);
}

}  // namespace qofdm
