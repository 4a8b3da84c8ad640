#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "exie/color.hpp"
#include "exie/error.hpp"
#include "exie/image.hpp"

namespace exie {

/// Peak signal-to-noise ratio in dB with peak 1.0, i.e. 10 log10(1/MSE)
/// where MSE averages squared differences over every sample.  Identical
/// images yield positive infinity.
inline double psnr(const Image& a, const Image& b) {
  if (!a.same_size(b))
    throw DimensionError("psnr requires images of equal size");
  const double s0 = detail::plane_sq_diff(a.channel(0), b.channel(0));
  const double s1 = detail::plane_sq_diff(a.channel(1), b.channel(1));
  const double s2 = detail::plane_sq_diff(a.channel(2), b.channel(2));
  const double mse =
      (s0 + s1 + s2) / static_cast<double>(a.value_count());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

namespace detail {

inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;

/// Normalized 11x11 Gaussian window, sigma 1.5.
inline const std::vector<double>& ssim_weights() {
  static const std::vector<double> w = [] {
    std::vector<double> v(kSsimWindow * kSsimWindow);
    const int r = kSsimWindow / 2;
    double sum = 0.0;
    for (int i = 0; i < kSsimWindow; ++i) {
      for (int j = 0; j < kSsimWindow; ++j) {
        const double di = i - r, dj = j - r;
        const double g =
            std::exp(-(di * di + dj * dj) / (2.0 * kSsimSigma * kSsimSigma));
        v[i * kSsimWindow + j] = g;
        sum += g;
      }
    }
    for (double& x : v) x /= sum;
    return v;
  }();
  return w;
}

} // namespace detail

/// Single-scale SSIM with the standard 11x11 Gaussian window (sigma 1.5),
/// K1 = 0.01, K2 = 0.03, dynamic range 1.  Only window positions fully
/// inside the image contribute; the result is the mean over those positions,
/// averaged across the three channels.  Requires min(H, W) >= 11.
inline double ssim(const Image& a, const Image& b) {
  using namespace detail;
  if (!a.same_size(b))
    throw DimensionError("ssim requires images of equal size");
  if (a.height() < kSsimWindow || a.width() < kSsimWindow)
    throw DimensionError("ssim requires both dimensions >= 11");

  const std::vector<double>& w = ssim_weights();
  const int H = a.height(), W = a.width();
  const int r = kSsimWindow / 2;
  constexpr double c1 = kSsimK1 * kSsimK1;
  constexpr double c2 = kSsimK2 * kSsimK2;

  double channel_sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    double acc = 0.0;
    std::size_t count = 0;
    for (int ci = r; ci < H - r; ++ci) {
      for (int cj = r; cj < W - r; ++cj) {
        double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
        const double* wp = w.data();
        for (int di = -r; di <= r; ++di) {
          for (int dj = -r; dj <= r; ++dj, ++wp) {
            const double xv = a.at(ci + di, cj + dj, c);
            const double yv = b.at(ci + di, cj + dj, c);
            mx += *wp * xv;
            my += *wp * yv;
            sxx += *wp * xv * xv;
            syy += *wp * yv * yv;
            sxy += *wp * xv * yv;
          }
        }
        const double vx = sxx - mx * mx;
        const double vy = syy - my * my;
        const double cov = sxy - mx * my;
        const double num = (2.0 * mx * my + c1) * (2.0 * cov + c2);
        const double den = (mx * mx + my * my + c1) * (vx + vy + c2);
        acc += num / den;
        ++count;
      }
    }
    channel_sum += acc / static_cast<double>(count);
  }
  return channel_sum / 3.0;
}

/// Mean per-pixel CIE76 color difference: pixels are taken as sRGB, mapped
/// to L*a*b* under D65, and the Euclidean Lab distances are averaged.
/// White versus black is exactly 100.
inline double delta_e76(const Image& a, const Image& b) {
  if (!a.same_size(b))
    throw DimensionError("delta_e76 requires images of equal size");
  double acc = 0.0;
  for (int i = 0; i < a.height(); ++i) {
    for (int j = 0; j < a.width(); ++j) {
      const Lab p = srgb_to_lab(a.at(i, j, 0), a.at(i, j, 1), a.at(i, j, 2));
      const Lab q = srgb_to_lab(b.at(i, j, 0), b.at(i, j, 1), b.at(i, j, 2));
      const double dl = p.L - q.L, da = p.a - q.a, db = p.b - q.b;
      acc += std::sqrt(dl * dl + da * da + db * db);
    }
  }
  return acc / static_cast<double>(a.pixel_count());
}

/// All three fidelity metrics for one image pair.
struct MetricsReport {
  double psnr = 0.0;
  double ssim = 0.0;
  double delta_e76 = 0.0;
};

inline MetricsReport metrics_report(const Image& a, const Image& b) {
  return {psnr(a, b), ssim(a, b), delta_e76(a, b)};
}

} // namespace exie
