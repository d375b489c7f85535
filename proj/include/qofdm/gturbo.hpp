// GTurbo inference engine: the shared quantization-aware posterior stage
// (Module A), the LMMSE-refinement channel estimator, the constellation-prior
// data detector, and max-log LLR computation.
//
// Module A treats each time-domain entry independently: the prior is
// CN(z_pri_j, v_pri), the observation is the quantizer cell that captured
// z_j + noise, and the posterior follows from truncated-Gaussian moments.
// Extrinsic means/variances are exchanged with Module B through harmonic
// variance differences so neither module double-counts evidence.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "qofdm/frontend.hpp"
#include "qofdm/modem.hpp"
#include "qofdm/numerics.hpp"

namespace qofdm {

// ---------------------------------------------------------------------------
// Module A
// ---------------------------------------------------------------------------

struct RealPosterior {
  double mean = 0.0;
  double var = 0.0;
};

// Posterior of one real dimension: prior N(z_pri, v_pri/2), observation
// y = z + n with n ~ N(0, sigma2_bar/2) quantized to the cell (l, u].
inline RealPosterior quantized_awgn_posterior(double z_pri, double v_pri, double sigma2_bar,
                                              double l, double u) {
  const double s2 = 0.5 * (v_pri + sigma2_bar);
  const double s = std::sqrt(s2);
  const double e1 = (z_pri - l) / s;
  const double e2 = (z_pri - u) / s;
  const auto r = truncated_gaussian_moments(e1, e2);
  RealPosterior out;
  out.mean = z_pri + (0.5 * v_pri / s) * r.m;
  out.var = 0.5 * v_pri - (0.25 * v_pri * v_pri / s2) * (r.m * r.m + r.v);
  if (out.var < 0.0) out.var = 0.0;
  return out;
}

// How Module A treats the front-end observation.
enum class ModuleAMode {
  kQuantized,  // truncated-Gaussian posterior from the quantizer cells
  kAwgn,       // exact linear-Gaussian posterior (full-resolution input)
  kBypass,     // x_ext = F q directly; reduces the loop to the conventional receiver
};

struct ExtrinsicClamp {
  double lo = 1e-13;
  double hi = 1e6;
};

inline double clamp_extrinsic(double inv_diff, const ExtrinsicClamp& c, int& events) {
  // inv_diff = 1/v_post - 1/v_pri; a nonpositive value means the posterior
  // failed to tighten and the harmonic difference has no valid solution.
  if (inv_diff <= 0.0) {
    ++events;
    return c.hi;
  }
  const double v = 1.0 / inv_diff;
  if (v < c.lo) {
    ++events;
    return c.lo;
  }
  if (v > c.hi) {
    ++events;
    return c.hi;
  }
  return v;
}

struct ModuleAResult {
  cvec z_post;
  std::vector<double> v_post;  // per entry (both real dimensions summed)
  double v_post_avg = 0.0;
  cvec x_ext;  // frequency domain, full length N
  double v_ext = 0.0;
  int clamps = 0;
};

inline ModuleAResult module_a(const cvec& z_pri, double v_pri, const cvec& q,
                              double sigma2_bar, const QuantizerSpec& quant,
                              const ExtrinsicClamp& clamp = {}) {
  if (!(v_pri > 0.0)) throw std::invalid_argument("module_a: v_pri must be positive");
  if (sigma2_bar < 0.0) throw std::invalid_argument("module_a: negative noise variance");
  const std::size_t n = z_pri.size();
  if (q.size() != n) throw std::invalid_argument("module_a: size mismatch");

  ModuleAResult out;
  out.z_post.resize(n);
  out.v_post.resize(n);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto [lr, ur] = quant.bounds(q[j].real());
    const auto [li, ui] = quant.bounds(q[j].imag());
    const RealPosterior pr = quantized_awgn_posterior(z_pri[j].real(), v_pri, sigma2_bar, lr, ur);
    const RealPosterior pi = quantized_awgn_posterior(z_pri[j].imag(), v_pri, sigma2_bar, li, ui);
    out.z_post[j] = {pr.mean, pi.mean};
    out.v_post[j] = pr.var + pi.var;
    acc += out.v_post[j];
  }
  // Floor keeps the extrinsic combination finite when the posterior
  // collapses (saturated cells at extreme SNR).
  out.v_post_avg = std::max(acc / static_cast<double>(n), clamp.lo);

  out.v_ext = clamp_extrinsic(1.0 / out.v_post_avg - 1.0 / v_pri, clamp, out.clamps);
  const cvec fz_post = dft(out.z_post);
  const cvec fz_pri = dft(z_pri);
  out.x_ext.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    out.x_ext[j] = out.v_ext * (fz_post[j] / out.v_post_avg - fz_pri[j] / v_pri);
  return out;
}

// Full-resolution variant: same extrinsic bookkeeping, exact AWGN posterior.
inline ModuleAResult module_a_awgn(const cvec& z_pri, double v_pri, const cvec& y,
                                   double sigma2_bar, const ExtrinsicClamp& clamp = {}) {
  if (!(v_pri > 0.0)) throw std::invalid_argument("module_a_awgn: v_pri must be positive");
  const std::size_t n = z_pri.size();
  ModuleAResult out;
  out.z_post.resize(n);
  out.v_post.resize(n);
  const double gain = v_pri / (v_pri + sigma2_bar);
  const double var = v_pri * sigma2_bar / (v_pri + sigma2_bar);
  for (std::size_t j = 0; j < n; ++j) {
    out.z_post[j] = z_pri[j] + gain * (y[j] - z_pri[j]);
    out.v_post[j] = var;
  }
  out.v_post_avg = std::max(var, clamp.lo);
  out.v_ext = clamp_extrinsic(1.0 / var - 1.0 / v_pri, clamp, out.clamps);
  const cvec fz_post = dft(out.z_post);
  const cvec fz_pri = dft(z_pri);
  out.x_ext.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    out.x_ext[j] = out.v_ext * (fz_post[j] / out.v_post_avg - fz_pri[j] / v_pri);
  return out;
}

// ---------------------------------------------------------------------------
// LMMSE weight for the channel refinement stage
// ---------------------------------------------------------------------------

// Correlation of channel responses at signed-frequency offset df under a
// uniform tapped-delay-line profile of length l_hat.
inline cplx channel_correlation(int df, int l_hat, int n) {
  if (df == 0) return {1.0, 0.0};
  const double a = 2.0 * std::numbers::pi * l_hat * df / static_cast<double>(n);
  const cplx denom{0.0, a};
  return (1.0 - std::exp(cplx{0.0, -a})) / denom;
}

namespace gturbo_detail {

inline Eigen::MatrixXcd data_autocorrelation(const SubcarrierPlan& plan, int l_hat) {
  const int nd = plan.n_used;
  Eigen::MatrixXcd r(nd, nd);
  for (int m = 0; m < nd; ++m)
    for (int k = 0; k < nd; ++k)
      r(m, k) = channel_correlation(plan.freqs[m] - plan.freqs[k], l_hat, plan.n);
  return r;
}

struct WeightKey {
  int n, n_used, l_hat;
  double gamma2;
  bool operator==(const WeightKey&) const = default;
};

// Data-row block of the LMMSE weight, cached per configuration: building it
// costs a dense Hermitian solve, applying it is one matrix-vector product
// per iteration.
inline std::shared_ptr<const Eigen::MatrixXcd> weight_data_block(const SubcarrierPlan& plan,
                                                                 int l_hat, double gamma2) {
  static std::mutex mu;
  static std::vector<std::pair<WeightKey, std::shared_ptr<const Eigen::MatrixXcd>>> cache;
  const WeightKey key{plan.n, plan.n_used, l_hat, gamma2};
  std::lock_guard<std::mutex> lock(mu);
  for (const auto& [k, w] : cache)
    if (k == key) return w;

  Eigen::MatrixXcd r = data_autocorrelation(plan, l_hat);
  Eigen::MatrixXcd a = r;
  a.diagonal().array() += gamma2;
  // W = R (R + g I)^{-1}; both Hermitian, so W = (A^{-1} R)^H.
  Eigen::MatrixXcd w = a.llt().solve(r).adjoint();
  auto ptr = std::make_shared<const Eigen::MatrixXcd>(std::move(w));
  cache.emplace_back(key, ptr);
  return ptr;
}

}  // namespace gturbo_detail

// Full N x N_d LMMSE weight W = R_{h h_d} (R_{h_d h_d} + gamma2 I)^{-1},
// rows in DFT-bin order. The estimator itself only ever applies the data-row
// block; the full matrix exists for direct use and verification.
inline Eigen::MatrixXcd lmmse_weight(const SubcarrierPlan& plan, int l_hat, double gamma2) {
  if (l_hat < 1) throw std::invalid_argument("lmmse_weight: l_hat must be >= 1");
  if (!(gamma2 > 0.0)) throw std::invalid_argument("lmmse_weight: gamma2 must be positive");
  const int n = plan.n;
  const int nd = plan.n_used;
  Eigen::MatrixXcd cross(n, nd);
  for (int k = 0; k < n; ++k) {
    const int fk = (k <= n / 2) ? k : k - n;
    for (int m = 0; m < nd; ++m)
      cross(k, m) = channel_correlation(fk - plan.freqs[m], l_hat, plan.n);
  }
  Eigen::MatrixXcd a = gturbo_detail::data_autocorrelation(plan, l_hat);
  a.diagonal().array() += gamma2;
  return a.llt().solve(cross.adjoint()).adjoint().eval();
}

// ---------------------------------------------------------------------------
// Channel estimator
// ---------------------------------------------------------------------------

// How the extrinsic combination coefficient alpha is computed. The formula
// as printed divides the weight diagonal by the signed pilot entries; the
// Jacobian trace of the x -> x_post map drops that division.
enum class AlphaMode { kPaperSigned, kPaperMagnitude, kJacobianTrace };

struct EstimatorConfig {
  int l_hat = 4;
  double gamma2 = 1e-5;
  int t_max = 10;
  bool normalize = false;
  double v_floor = 1e-13;
  AlphaMode alpha_mode = AlphaMode::kJacobianTrace;
  ModuleAMode module_a_mode = ModuleAMode::kQuantized;
  double bypass_variance = 0.0;  // v_B^pri when module A is bypassed
  bool capture_extrinsic = false;
};

struct EstimateResult {
  cvec h_bar_d;             // final CSI, includes the sqrt(g_agc) factor
  std::vector<cvec> trace;  // per-iteration estimates of h_d (AGC removed)
  int iterations = 0;
  int clamp_events = 0;
  double max_guard_leak = 0.0;  // largest |x| seen on a guard bin
  // iteration-1 extrinsic snapshot (for the orthogonality diagnostics)
  cvec x_pri_b_d;
  cvec x_ext_b_d;
};

namespace gturbo_detail {

inline std::vector<char> guard_mask(const SubcarrierPlan& plan) {
  std::vector<char> guard(plan.n, 1);
  for (int bin : plan.bins) guard[bin] = 0;
  return guard;
}

inline double guard_magnitude(const cvec& x, const std::vector<char>& guard) {
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (guard[k]) worst = std::max(worst, std::abs(x[k]));
  return worst;
}

}  // namespace gturbo_detail

inline EstimateResult estimate_channel(const cvec& q_p, const cvec& pilot_d, double g_agc,
                                       double sigma2_hat, const QuantizerSpec& quant,
                                       const SubcarrierPlan& plan,
                                       const EstimatorConfig& cfg) {
  const int n = plan.n;
  const int nd = plan.n_used;
  if (static_cast<int>(q_p.size()) != n)
    throw std::invalid_argument("estimate_channel: observation length != N");
  if (static_cast<int>(pilot_d.size()) != nd)
    throw std::invalid_argument("estimate_channel: pilot length != N_d");
  if (!(g_agc > 0.0)) throw std::invalid_argument("estimate_channel: g_agc must be positive");

  const double sqrt_g = std::sqrt(g_agc);
  cvec p_bar_d(nd);
  for (int j = 0; j < nd; ++j) p_bar_d[j] = sqrt_g * pilot_d[j];
  const double sigma2_bar = g_agc * sigma2_hat;

  const auto w = gturbo_detail::weight_data_block(plan, cfg.l_hat, cfg.gamma2);
  const Eigen::MatrixXcd& w_d = *w;

  cplx alpha{0.0, 0.0};
  switch (cfg.alpha_mode) {
    case AlphaMode::kPaperSigned:
      for (int j = 0; j < nd; ++j) alpha += w_d(j, j) / p_bar_d[j];
      break;
    case AlphaMode::kPaperMagnitude:
      for (int j = 0; j < nd; ++j) alpha += w_d(j, j) / std::abs(p_bar_d[j]);
      break;
    case AlphaMode::kJacobianTrace:
      for (int j = 0; j < nd; ++j) alpha += w_d(j, j);
      break;
  }
  alpha /= static_cast<double>(nd);

  // Receiver-side amplitude reference: P_r is known through g_agc = 1/P_r.
  const double p_h_hat = std::max((1.0 / g_agc - sigma2_hat), 1e-12) * n / nd;

  EstimateResult out;
  double v_pri = 1.0 - g_agc * sigma2_hat;
  if (v_pri <= 0.0) v_pri = 1e-3;  // noise-power overestimate
  cvec z_pri(n, cplx{0.0, 0.0});
  cvec x_pri_b(n, cplx{0.0, 0.0});

  Eigen::VectorXcd y_d(nd);
  Eigen::VectorXcd h_hat(nd);

  const ExtrinsicClamp clamp;
  for (int t = 1; t <= cfg.t_max; ++t) {
    double v_pri_b;
    if (cfg.module_a_mode == ModuleAMode::kBypass) {
      const cvec fq = dft(q_p);
      for (int j = 0; j < nd; ++j) x_pri_b[plan.bins[j]] = fq[plan.bins[j]];
      v_pri_b = cfg.bypass_variance;
    } else {
      ModuleAResult a = (cfg.module_a_mode == ModuleAMode::kQuantized)
                            ? module_a(z_pri, v_pri, q_p, sigma2_bar, quant, clamp)
                            : module_a_awgn(z_pri, v_pri, q_p, sigma2_bar, clamp);
      out.clamp_events += a.clamps;
      for (int j = 0; j < nd; ++j) x_pri_b[plan.bins[j]] = a.x_ext[plan.bins[j]];
      v_pri_b = a.v_ext;
    }

    // Module B: LMMSE refinement of h_d from x = diag(p_bar) h.
    for (int j = 0; j < nd; ++j) y_d(j) = x_pri_b[plan.bins[j]] / p_bar_d[j];
    h_hat.noalias() = w_d * y_d;

    cvec h_iter(nd);
    if (cfg.normalize) {
      const double nrm = h_hat.norm();
      const double scale = nrm > 0.0 ? std::sqrt(nd * p_h_hat) / nrm : 0.0;
      for (int j = 0; j < nd; ++j) h_iter[j] = scale * h_hat(j);
    } else {
      for (int j = 0; j < nd; ++j) h_iter[j] = h_hat(j);
    }
    out.trace.push_back(h_iter);
    out.iterations = t;

    // Extrinsic of Module B.
    cvec x_post_d(nd);
    for (int j = 0; j < nd; ++j) x_post_d[j] = p_bar_d[j] * h_hat(j);

    cplx num{0.0, 0.0};
    double den = 0.0;
    cvec u_d(nd);
    for (int j = 0; j < nd; ++j) {
      u_d[j] = x_post_d[j] - alpha * x_pri_b[plan.bins[j]];
      num += std::conj(x_pri_b[plan.bins[j]]) * u_d[j];
      den += std::norm(u_d[j]);
    }
    const cplx c = den > 0.0 ? num / den : cplx{0.0, 0.0};

    cvec x_pri_a(n, cplx{0.0, 0.0});
    double v_next = 0.0;
    for (int j = 0; j < nd; ++j) {
      const cplx e = c * u_d[j];
      x_pri_a[plan.bins[j]] = e;
      v_next += std::norm(e - x_post_d[j]);
    }
    v_next /= nd;

    if (t == 1 && cfg.capture_extrinsic) {
      out.x_pri_b_d.resize(nd);
      for (int j = 0; j < nd; ++j) out.x_pri_b_d[j] = x_pri_b[plan.bins[j]];
      out.x_ext_b_d.resize(nd);
      for (int j = 0; j < nd; ++j) out.x_ext_b_d[j] = x_pri_a[plan.bins[j]];
    }
    if (cfg.capture_extrinsic) {
      const auto guard = gturbo_detail::guard_mask(plan);
      out.max_guard_leak = std::max(out.max_guard_leak,
                                    gturbo_detail::guard_magnitude(x_pri_b, guard));
      out.max_guard_leak = std::max(out.max_guard_leak,
                                    gturbo_detail::guard_magnitude(x_pri_a, guard));
    }

    z_pri = idft(x_pri_a);
    v_pri = std::clamp(v_next, clamp.lo, clamp.hi);
    if (v_pri != v_next) ++out.clamp_events;

    if (v_pri_b < cfg.v_floor || v_pri < cfg.v_floor) break;
  }

  out.h_bar_d.resize(nd);
  const cvec& last = out.trace.back();
  for (int j = 0; j < nd; ++j) out.h_bar_d[j] = sqrt_g * last[j];
  return out;
}

// ---------------------------------------------------------------------------
// Data detector
// ---------------------------------------------------------------------------

struct ModuleBResult {
  cvec s_post;
  std::vector<double> v_post;
  double v_post_weighted = 0.0;  // (1/N) sum |h_j|^2 v_post_j over data bins
  cvec x_post_d;
};

// Per-subcarrier posterior of the constellation symbol given the Gaussian
// pseudo-observation x_pri_j / h_j with variance v_pri_b / |h_j|^2. Entries
// at positions >= active carry a known dummy symbol and collapse to it.
inline ModuleBResult detector_module_b(const cvec& x_pri_d, double v_pri_b, const cvec& h_bar_d,
                                       const Constellation& c, int n_total, int active,
                                       cplx dummy) {
  const int nd = static_cast<int>(x_pri_d.size());
  if (static_cast<int>(h_bar_d.size()) != nd)
    throw std::invalid_argument("detector_module_b: size mismatch");
  if (!(v_pri_b > 0.0)) throw std::invalid_argument("detector_module_b: v_pri_b must be positive");

  ModuleBResult out;
  out.s_post.resize(nd);
  out.v_post.resize(nd);
  out.x_post_d.resize(nd);
  double acc = 0.0;
  const int m = c.order;
  for (int j = 0; j < nd; ++j) {
    const double h2 = std::norm(h_bar_d[j]);
    if (j >= active) {
      out.s_post[j] = dummy;
      out.v_post[j] = 0.0;
      out.x_post_d[j] = h_bar_d[j] * dummy;
      continue;
    }
    if (h2 < 1e-300) {
      // No observation: posterior reverts to the prior moments.
      out.s_post[j] = {0.0, 0.0};
      out.v_post[j] = 1.0;
      out.x_post_d[j] = {0.0, 0.0};
      continue;
    }
    const cplx xt = x_pri_d[j] / h_bar_d[j];
    const double beta = v_pri_b / h2;
    double dmin = kInf;
    for (int s = 0; s < m; ++s) dmin = std::min(dmin, std::norm(xt - c.points[s]));
    double wsum = 0.0;
    cplx mean{0.0, 0.0};
    double second = 0.0;
    for (int s = 0; s < m; ++s) {
      const double w = std::exp(-(std::norm(xt - c.points[s]) - dmin) / beta);
      wsum += w;
      mean += w * c.points[s];
      second += w * std::norm(c.points[s]);
    }
    mean /= wsum;
    second /= wsum;
    out.s_post[j] = mean;
    out.v_post[j] = std::max(second - std::norm(mean), 0.0);
    out.x_post_d[j] = h_bar_d[j] * mean;
    acc += h2 * out.v_post[j];
  }
  out.v_post_weighted = std::max(acc / static_cast<double>(n_total), 1e-13);
  return out;
}

struct DetectorConfig {
  Constellation constellation = Constellation::qam4();
  int t_max = 5;
  double v_floor = 1e-13;
  int active = -1;  // data entries carrying coded bits; -1 = all
  cplx dummy = {1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
  ModuleAMode module_a_mode = ModuleAMode::kQuantized;
  double bypass_variance = 0.0;
};

struct DetectResult {
  cvec x_pri_d;  // final Module-B input on the data bins
  double v_pri_b = 0.0;
  int iterations = 0;
  int clamp_events = 0;
  std::vector<cvec> trace_x;  // per-iteration Module-B inputs (when traced)
  std::vector<double> trace_v;
};

inline DetectResult detect(const cvec& q_d, const cvec& h_bar_d, double g_agc,
                           double sigma2_hat, const QuantizerSpec& quant,
                           const SubcarrierPlan& plan, const DetectorConfig& cfg,
                           bool want_trace = false) {
  const int n = plan.n;
  const int nd = plan.n_used;
  if (static_cast<int>(q_d.size()) != n)
    throw std::invalid_argument("detect: observation length != N");
  if (static_cast<int>(h_bar_d.size()) != nd)
    throw std::invalid_argument("detect: CSI length != N_d");

  const double sigma2_bar = g_agc * sigma2_hat;
  const int active = cfg.active < 0 ? nd : cfg.active;

  double v_pri = 0.0;
  for (int j = 0; j < nd; ++j) v_pri += std::norm(h_bar_d[j]);
  v_pri /= n;
  if (v_pri <= 0.0) throw std::invalid_argument("detect: zero CSI energy");

  cvec z_pri(n, cplx{0.0, 0.0});
  cvec x_pri_b(n, cplx{0.0, 0.0});

  DetectResult out;
  const ExtrinsicClamp clamp;
  for (int t = 1; t <= cfg.t_max; ++t) {
    double v_pri_b;
    if (cfg.module_a_mode == ModuleAMode::kBypass) {
      const cvec fq = dft(q_d);
      for (int j = 0; j < nd; ++j) x_pri_b[plan.bins[j]] = fq[plan.bins[j]];
      v_pri_b = cfg.bypass_variance;
    } else {
      ModuleAResult a = (cfg.module_a_mode == ModuleAMode::kQuantized)
                            ? module_a(z_pri, v_pri, q_d, sigma2_bar, quant, clamp)
                            : module_a_awgn(z_pri, v_pri, q_d, sigma2_bar, clamp);
      out.clamp_events += a.clamps;
      for (int j = 0; j < nd; ++j) x_pri_b[plan.bins[j]] = a.x_ext[plan.bins[j]];
      v_pri_b = a.v_ext;
    }

    out.x_pri_d.resize(nd);
    for (int j = 0; j < nd; ++j) out.x_pri_d[j] = x_pri_b[plan.bins[j]];
    out.v_pri_b = v_pri_b;
    out.iterations = t;
    if (want_trace) {
      out.trace_x.push_back(out.x_pri_d);
      out.trace_v.push_back(v_pri_b);
    }
    if (v_pri_b < cfg.v_floor) break;

    // Module B: discrete prior refinement.
    const ModuleBResult b = detector_module_b(out.x_pri_d, v_pri_b, h_bar_d,
                                              cfg.constellation, n, active, cfg.dummy);
    const double v_ext_b =
        clamp_extrinsic(1.0 / b.v_post_weighted - 1.0 / v_pri_b, clamp, out.clamp_events);

    cvec x_post(n, cplx{0.0, 0.0});
    for (int j = 0; j < nd; ++j) x_post[plan.bins[j]] = b.x_post_d[j];
    const cvec z_post_t = idft(x_post);
    const cvec z_pri_t = idft(x_pri_b);
    for (int i = 0; i < n; ++i)
      z_pri[i] = v_ext_b * (z_post_t[i] / b.v_post_weighted - z_pri_t[i] / v_pri_b);
    v_pri = v_ext_b;
    if (v_pri < cfg.v_floor) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// LLR computation (max-log, Eq.-(17) style)
// ---------------------------------------------------------------------------

// LLR(b_ji) = (|x~ - s(bit=1)|^2 - |x~ - s(bit=0)|^2) / beta_j with
// x~ = x_pri_j / h_j and beta_j = v_pri_b / |h_j|^2, taking the nearest
// constellation point within each bit subset. Positive favors bit 0.
// Subcarriers with zero CSI produce zero LLRs (erasures).
inline std::vector<double> compute_llr(const cvec& x_pri_d, double v_pri_b, const cvec& h_bar_d,
                                       const Constellation& c, int active = -1) {
  if (!(v_pri_b > 0.0)) throw std::invalid_argument("compute_llr: v_pri_b must be positive");
  const int nd = static_cast<int>(x_pri_d.size());
  const int n_active = active < 0 ? nd : active;
  const int bps = c.bits_per_symbol;
  std::vector<double> llr(static_cast<std::size_t>(n_active) * bps, 0.0);
  std::vector<double> min0(bps), min1(bps);
  for (int j = 0; j < n_active; ++j) {
    const double h2 = std::norm(h_bar_d[j]);
    if (h2 < 1e-300) continue;  // erasure
    const cplx xt = x_pri_d[j] / h_bar_d[j];
    const double beta = v_pri_b / h2;
    std::fill(min0.begin(), min0.end(), kInf);
    std::fill(min1.begin(), min1.end(), kInf);
    for (int s = 0; s < c.order; ++s) {
      const double d = std::norm(xt - c.points[s]);
      for (int b = 0; b < bps; ++b) {
        const bool bit = (s >> (bps - 1 - b)) & 1;
        double& slot = bit ? min1[b] : min0[b];
        if (d < slot) slot = d;
      }
    }
    for (int b = 0; b < bps; ++b)
      llr[static_cast<std::size_t>(j) * bps + b] = (min1[b] - min0[b]) / beta;
  }
  return llr;
}

}  // namespace qofdm
