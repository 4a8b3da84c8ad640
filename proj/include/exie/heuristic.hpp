#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "exie/error.hpp"
#include "exie/image.hpp"
#include "exie/operators.hpp"

namespace exie {

/// Returned by a step counter when no number of applications of its family
/// can move the source sample to the target sample.  Always assigned
/// explicitly, never produced by overflow or division by zero.
inline constexpr double kInfiniteCounter =
    std::numeric_limits<double>::infinity();

/// Numeric guards for the step counters.
struct HeuristicConfig {
  /// Gamma counters clamp samples into [eps_log, 1 - eps_log] before taking
  /// logarithms, keeping both log arguments strictly inside (0, 1).
  double eps_log = 1e-4;
  /// Samples closer than this are treated as already equal (counter 0), and
  /// a sample this close to the contrast pivot is treated as on the pivot.
  double eps_eq = 1e-9;

  void validate() const {
    if (!(eps_log > 0.0 && eps_log < 0.5))
      throw ConfigError("eps_log must lie in (0, 0.5)");
    if (!(eps_eq >= 0.0))
      throw ConfigError("eps_eq must be non-negative");
  }
};

namespace detail {

/// log(0.9), log(1.4), log(1.05), log(0.6): denominators of the ratio
/// counters, derived from the parameter menus.
inline const double kLogSigmaDown = std::log(kContrastSigmas[0]);
inline const double kLogSigmaUp = std::log(kContrastSigmas[1]);
inline const double kLogGammaDown = std::log(kGammaValues[1]);
inline const double kLogGammaUp = std::log(kGammaValues[0]);

/// Largest |delta| in the brightness menu; one step moves a sample at most
/// this far, so the brightness counter is d / this.
inline const double kMaxAbsDelta = [] {
  double m = 0.0;
  for (double d : kBrightnessDeltas) m = std::max(m, std::fabs(d));
  return m;
}();

/// Contrast counter core on pivot-relative offsets; callers have already
/// handled the sample-equality case.
inline double contrast_steps(double sx, double sy, double eps_eq) noexcept {
  if (std::fabs(sx) <= eps_eq || std::fabs(sy) <= eps_eq)
    return kInfiniteCounter;
  if ((sx > 0.0) != (sy > 0.0)) return kInfiniteCounter;
  const double rho = sy / sx;
  if (rho == 1.0) return 0.0;
  return rho > 1.0 ? std::log(rho) / kLogSigmaUp : std::log(rho) / kLogSigmaDown;
}

/// Gamma counter core given precomputed logs of the clamped samples.  The
/// direction is chosen from the raw samples: darkening uses the gamma above
/// 1, brightening the gamma below 1.
inline double gamma_steps(double x, double y, double lx, double ly) noexcept {
  const double r = ly / lx;
  const double v = x >= y ? std::log(r) / kLogGammaDown
                          : std::log(r) / kLogGammaUp;
  return v > 0.0 ? v : 0.0;
}

} // namespace detail

/// Fractional number of brightness steps from x to y: |x - y| divided by the
/// largest step the menu offers.  0 when the samples are eps_eq-equal;
/// always finite.
inline double brightness_counter(double x, double y,
                                 const HeuristicConfig& cfg = {}) {
  const double d = std::fabs(x - y);
  if (d <= cfg.eps_eq) return 0.0;
  double best = kInfiniteCounter;
  for (double delta : kBrightnessDeltas)
    best = std::min(best, d / std::fabs(delta));
  return best;
}

/// Fractional number of contrast steps from x to y around pivot mu.
/// Contrast scales the offset from the pivot, so the count is the log of the
/// offset ratio in base sigma: the expanding sigma when the target offset is
/// larger, the shrinking sigma when smaller.  Infinite when the samples sit
/// on opposite sides of the pivot or either sits on it (within eps_eq);
/// 0 when the samples are eps_eq-equal.
inline double contrast_counter(double x, double y, double mu,
                               const HeuristicConfig& cfg = {}) {
  if (std::fabs(x - y) <= cfg.eps_eq) return 0.0;
  return detail::contrast_steps(x - mu, y - mu, cfg.eps_eq);
}

/// Fractional number of gamma steps from x to y.  Repeated gamma raises a
/// sample to the power gamma^n, so the count is log(log y / log x) in base
/// log gamma, with samples clamped into [eps_log, 1 - eps_log] first and the
/// gamma chosen by direction (above 1 to darken, below 1 to brighten).
/// Floored at 0; 0 when the samples are eps_eq-equal; always finite.
inline double gamma_counter(double x, double y,
                            const HeuristicConfig& cfg = {}) {
  if (std::fabs(x - y) <= cfg.eps_eq) return 0.0;
  const double lo = cfg.eps_log, hi = 1.0 - cfg.eps_log;
  const double lx = std::log(std::min(std::max(x, lo), hi));
  const double ly = std::log(std::min(std::max(y, lo), hi));
  return detail::gamma_steps(x, y, lx, ly);
}

namespace detail {

/// Admissible-step evaluator against a fixed target.
///
/// The value of the whole-image heuristic is the maximum over samples of the
/// cheapest family's counter, with contrast pivoted on the candidate's
/// channel means.  Computed naively that costs three transcendentals per
/// sample; this evaluator keeps a running maximum m and discards a sample as
/// soon as any one counter provably falls at or below m, which needs no
/// logarithm for the brightness and contrast tests and one for the gamma
/// test.  Screen thresholds are refreshed whenever m grows.  The screens are
/// exact up to last-bit rounding of the thresholds, so the result can differ
/// from the naive maximum only by around one ulp.
class HeuristicEvaluator {
public:
  explicit HeuristicEvaluator(const Image& target, HeuristicConfig cfg = {})
      : cfg_(cfg), target_(target) {
    cfg_.validate();
    const double lo = cfg_.eps_log, hi = 1.0 - cfg_.eps_log;
    const auto tv = target_.values();
    log_target_.resize(tv.size());
    for (std::size_t i = 0; i < tv.size(); ++i)
      log_target_[i] = std::log(std::min(std::max(tv[i], lo), hi));
  }

  const Image& target() const noexcept { return target_; }
  const HeuristicConfig& config() const noexcept { return cfg_; }

  /// Maximum over one channel's samples of the minimum counter, but not less
  /// than floor.  x is the candidate plane, mu its mean.  Seeding floor with
  /// a maximum already established on other planes tightens the screens; the
  /// overall image heuristic is unchanged because it is itself a maximum.
  double channel_max(std::span<const double> x, int channel, double mu,
                     double floor = 0.0) const {
    const std::size_t n = x.size();
    const std::span<const double> y = target_.channel(channel);
    const double* ly_plane = log_target_.data() + channel * n;
    const double eps_eq = cfg_.eps_eq;
    const double lo = cfg_.eps_log, hi = 1.0 - cfg_.eps_log;

    double m = floor;
    // Thresholds equivalent to "counter <= m" for each family.
    double d_skip = m * kMaxAbsDelta;
    double rho_lo = std::pow(kContrastSigmas[0], m);
    double rho_hi = std::pow(kContrastSigmas[1], m);
    double gam_dn = std::pow(kGammaValues[1], m);
    double gam_up = std::pow(kGammaValues[0], m);

    for (std::size_t i = 0; i < n; ++i) {
      const double xv = x[i];
      const double yv = y[i];
      const double d = std::fabs(xv - yv);
      if (d <= eps_eq) continue;
      if (d <= d_skip) continue;

      const double sx = xv - mu;
      const double sy = yv - mu;
      const bool contrast_finite = std::fabs(sx) > eps_eq &&
                                   std::fabs(sy) > eps_eq &&
                                   (sx > 0.0) == (sy > 0.0);
      double rho = 0.0;
      if (contrast_finite) {
        rho = sy / sx;
        if (rho >= rho_lo && rho <= rho_hi) continue;
      }

      // Gamma screen: with lx, ly < 0, "steps <= m" flips the ratio test
      // into a product comparison needing only this one logarithm.
      const double lx = std::log(std::min(std::max(xv, lo), hi));
      const double ly = ly_plane[i];
      if (xv >= yv) {
        if (ly >= gam_dn * lx) continue;
      } else {
        if (ly <= gam_up * lx) continue;
      }

      // Every family exceeds m here; compute the exact minimum.
      const double nb = d / kMaxAbsDelta;
      double nc;
      if (!contrast_finite) {
        nc = kInfiniteCounter;
      } else if (rho == 1.0) {
        nc = 0.0;
      } else {
        nc = rho > 1.0 ? std::log(rho) / kLogSigmaUp
                       : std::log(rho) / kLogSigmaDown;
      }
      const double ng = gamma_steps(xv, yv, lx, ly);
      const double cand = std::min(nb, std::min(nc, ng));
      if (cand > m) {
        m = cand;
        d_skip = m * kMaxAbsDelta;
        rho_lo = std::pow(kContrastSigmas[0], m);
        rho_hi = std::pow(kContrastSigmas[1], m);
        gam_dn = std::pow(kGammaValues[1], m);
        gam_up = std::pow(kGammaValues[0], m);
      }
    }
    return m;
  }

  /// Heuristic over a whole candidate image, pivoting contrast on the
  /// candidate's channel means.
  double whole_image(const Image& x) const {
    double m = 0.0;
    for (int c = 0; c < 3; ++c)
      m = channel_max(x.channel(c), c, x.channel_mean(c), m);
    return m;
  }

private:
  HeuristicConfig cfg_;
  Image target_;
  std::vector<double> log_target_;
};

} // namespace detail

/// Admissible estimate of the number of elementary operator applications
/// separating x from target: the maximum over all samples of the cheapest
/// single-family step count, with contrast pivoted on x's channel means.
/// Never negative; 0 exactly when every sample pair is eps_eq-equal; finite
/// because the brightness counter is always finite.
inline double heuristic_h(const Image& x, const Image& target,
                          const HeuristicConfig& cfg = {}) {
  if (!x.same_size(target))
    throw DimensionError("heuristic_h requires images of equal size");
  const detail::HeuristicEvaluator ev(target, cfg);
  return ev.whole_image(x);
}

} // namespace exie
