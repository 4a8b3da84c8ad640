#pragma once

#include <cmath>

namespace exie {

/// CIE L*a*b* coordinates.
struct Lab {
  double L = 0.0;
  double a = 0.0;
  double b = 0.0;
};

namespace detail {

/// Inverse of the sRGB transfer function (IEC 61966-2-1 piecewise curve).
inline double srgb_to_linear(double v) noexcept {
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

/// Linear sRGB to XYZ, D65.
inline constexpr double kSrgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

/// Reference white: the matrix applied to linear (1, 1, 1), i.e. exact row
/// sums.  Tabulated D65 values rounded independently of the matrix would put
/// the gray axis slightly off a* = b* = 0; the row sums keep it exact.
inline const double kWhite[3] = {
    kSrgbToXyz[0][0] + kSrgbToXyz[0][1] + kSrgbToXyz[0][2],
    kSrgbToXyz[1][0] + kSrgbToXyz[1][1] + kSrgbToXyz[1][2],
    kSrgbToXyz[2][0] + kSrgbToXyz[2][1] + kSrgbToXyz[2][2],
};

inline double lab_f(double t) noexcept {
  constexpr double eps = 216.0 / 24389.0;
  constexpr double kappa = 24389.0 / 27.0;
  return t > eps ? std::cbrt(t) : (kappa * t + 16.0) / 116.0;
}

} // namespace detail

/// Convert one sRGB pixel (components in [0, 1]) to L*a*b* under D65.
/// White (1, 1, 1) maps to exactly (100, 0, 0) and any gray maps to
/// a* = b* = 0 up to last-bit rounding.
inline Lab srgb_to_lab(double r, double g, double b) noexcept {
  using namespace detail;
  const double lr = srgb_to_linear(r);
  const double lg = srgb_to_linear(g);
  const double lb = srgb_to_linear(b);
  double f[3];
  for (int row = 0; row < 3; ++row) {
    const double v = kSrgbToXyz[row][0] * lr + kSrgbToXyz[row][1] * lg +
                     kSrgbToXyz[row][2] * lb;
    f[row] = lab_f(v / kWhite[row]);
  }
  return {116.0 * f[1] - 16.0, 500.0 * (f[0] - f[1]), 200.0 * (f[1] - f[2])};
}

} // namespace exie
