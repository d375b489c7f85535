// Shared numeric kernels: unitary DFT/IDFT for power-of-two sizes and
// numerically stable truncated-Gaussian moment ratios.
//
// The moment ratios are
//   ratio_m = (phi(e1) - phi(e2)) / (Phi(e1) - Phi(e2))
//   ratio_v = (e1 phi(e1) - e2 phi(e2)) / (Phi(e1) - Phi(e2))
// for e1 > e2. Both bounds deep in one tail would underflow a naive
// evaluation, so the tail path factors out the dominant Gaussian density and
// works with scaled complementary-error-function (Mills-ratio) terms.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace qofdm {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double norm2(const cvec& v) {
  double s = 0.0;
  for (const cplx& x : v) s += std::norm(x);
  return s;
}

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// ---------------------------------------------------------------------------
// FFT
// ---------------------------------------------------------------------------

// Radix-2 plan for one transform size. Unitary convention: both directions
// scale by 1/sqrt(n), forward kernel exp(-2*pi*i*m*n/N).
class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    if (!is_pow2(n)) throw std::invalid_argument("FftPlan: size must be a power of two");
    tw_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
      tw_[k] = {std::cos(a), std::sin(a)};
    }
    rev_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      rev_[i] = r;
    }
  }

  std::size_t size() const { return n_; }

  void forward(cplx* a) const { run(a, false); }
  void inverse(cplx* a) const { run(a, true); }

 private:
  void run(cplx* a, bool inv) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (rev_[i] > i) std::swap(a[i], a[rev_[i]]);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t step = n_ / len;
      for (std::size_t blk = 0; blk < n_; blk += len) {
        for (std::size_t k = 0; k < len / 2; ++k) {
          cplx w = tw_[k * step];
          if (inv) w = std::conj(w);
          const cplx u = a[blk + k];
          const cplx t = a[blk + k + len / 2] * w;
          a[blk + k] = u + t;
          a[blk + k + len / 2] = u - t;
        }
      }
    }
    const double s = 1.0 / std::sqrt(static_cast<double>(n_));
    for (std::size_t i = 0; i < n_; ++i) a[i] *= s;
  }

  std::size_t n_;
  std::vector<cplx> tw_;
  std::vector<std::size_t> rev_;
};

namespace detail {

inline const FftPlan& plan_for(std::size_t n) {
  static std::mutex mu;
  static std::unordered_map<std::size_t, std::unique_ptr<FftPlan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<FftPlan>(n)).first;
  return *it->second;
}

}  // namespace detail

inline cvec dft(const cvec& v) {
  cvec out = v;
  detail::plan_for(v.size()).forward(out.data());
  return out;
}

inline cvec idft(const cvec& v) {
  cvec out = v;
  detail::plan_for(v.size()).inverse(out.data());
  return out;
}

inline void dft_inplace(cvec& v) { detail::plan_for(v.size()).forward(v.data()); }
inline void idft_inplace(cvec& v) { detail::plan_for(v.size()).inverse(v.data()); }

// ---------------------------------------------------------------------------
// Gaussian helpers
// ---------------------------------------------------------------------------

// exp(-x^2/2) with the argument split via fma so its rounding error does not
// get amplified by large |x|.
inline double exp_neg_half_sq(double x) {
  const double h = x * x;
  const double lo = std::fma(x, x, -h);
  return std::exp(-0.5 * h) * (1.0 - 0.5 * lo);
}

inline double norm_pdf(double x) {
  return exp_neg_half_sq(x) / std::sqrt(2.0 * std::numbers::pi);
}

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Upper Mills ratio R(x) = Q(x)/phi(x) for x >= 0. Used by the tail path of
// the truncated moments; switches to the asymptotic expansion once
// exp(x^2/2) would overflow.
inline double mills_upper(double x) {
  if (x < 36.0) {
    const double h = x * x;
    const double lo = std::fma(x, x, -h);
    return 0.5 * std::erfc(x / std::numbers::sqrt2) * std::sqrt(2.0 * std::numbers::pi) *
           std::exp(0.5 * h) * (1.0 + 0.5 * lo);
  }
  // R(x) ~ (1/x) * (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...), truncated well past
  // machine precision for x >= 36.
  const double ix2 = 1.0 / (x * x);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 9; ++k) {
    term *= -(2.0 * k - 1.0) * ix2;
    sum += term;
  }
  return sum / x;
}

struct TruncGaussRatios {
  double m;  // (phi(e1)-phi(e2)) / (Phi(e1)-Phi(e2))
  double v;  // (e1 phi(e1)-e2 phi(e2)) / (Phi(e1)-Phi(e2))
};

// Requires e1 > e2; e1 may be +inf and e2 may be -inf.
inline TruncGaussRatios truncated_gaussian_moments(double e1, double e2) {
  if (std::isnan(e1) || std::isnan(e2) || !(e1 > e2))
    throw std::invalid_argument("truncated_gaussian_moments: requires eta1 > eta2");

  if (std::isinf(e1) && std::isinf(e2)) return {0.0, 0.0};

  // Reflect so the computation happens in the left tail / straddling region:
  // ratios(e1, e2) = (-m', v') where (m', v') = ratios(-e2, -e1).
  if (e1 + e2 > 0.0 || std::isinf(e1)) {
    TruncGaussRatios r = truncated_gaussian_moments(-e2, -e1);
    return {-r.m, r.v};
  }

  if (std::isinf(e2)) {
    // One-sided cell (-inf, e1].
    if (e1 >= -6.0) {
      const double d = norm_cdf(e1);
      const double p = norm_pdf(e1);
      return {p / d, e1 * p / d};
    }
    const double r = mills_upper(-e1);  // Phi(e1) = phi(e1) * R(-e1)
    return {1.0 / r, e1 / r};
  }

  if (e1 <= -6.0) {
    // Both bounds deep in the left tail: factor out phi(e1).
    // d = phi(e2)/phi(e1) in (0,1) since |e2| > |e1|.
    const double t = 0.5 * (e1 - e2) * (e1 + e2);
    const double d = std::exp(t);
    const double den = mills_upper(-e1) - d * mills_upper(-e2);
    return {-std::expm1(t) / den, (e1 - e2 * d) / den};
  }

  const double den = 0.5 * (std::erfc(-e1 / std::numbers::sqrt2) -
                            std::erfc(-e2 / std::numbers::sqrt2));
  const double p1 = norm_pdf(e1);
  const double p2 = norm_pdf(e2);
  return {(p1 - p2) / den, (e1 * p1 - e2 * p2) / den};
}

}  // namespace qofdm
