#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "exie/error.hpp"

namespace exie {

/// Clamp a value to the unit interval.
inline constexpr double clamp01(double v) noexcept {
  return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

/// Dense RGB raster with normalized double samples in [0, 1].
///
/// Samples are stored channel-planar: the red plane first, then green, then
/// blue, each plane row-major.  Planar storage keeps whole-channel operations
/// (the common case here) contiguous.  Use at(i, j, c) for pixel access and
/// channel(c) for plane access.
class Image {
public:
  Image() = default;

  /// Zero-filled image of the given size.  Throws DimensionError unless both
  /// dimensions are at least 1.
  Image(int height, int width)
      : height_(height), width_(width) {
    check_dims(height, width);
    data_.assign(static_cast<std::size_t>(height) * width * 3, 0.0);
  }

  /// Wrap existing planar data (R plane, G plane, B plane, row-major each).
  /// Throws DimensionError on a size mismatch and std::invalid_argument if
  /// any sample is outside [0, 1] or NaN.
  Image(int height, int width, std::vector<double> data)
      : height_(height), width_(width), data_(std::move(data)) {
    check_dims(height, width);
    if (data_.size() != static_cast<std::size_t>(height) * width * 3)
      throw DimensionError("image data length does not match dimensions");
    for (double v : data_)
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("image sample outside [0, 1]");
  }

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height_) * width_;
  }
  std::size_t value_count() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& at(int i, int j, int c) noexcept {
    return data_[static_cast<std::size_t>(c) * pixel_count() +
                 static_cast<std::size_t>(i) * width_ + j];
  }
  double at(int i, int j, int c) const noexcept {
    return data_[static_cast<std::size_t>(c) * pixel_count() +
                 static_cast<std::size_t>(i) * width_ + j];
  }

  std::span<double> channel(int c) noexcept {
    return {data_.data() + static_cast<std::size_t>(c) * pixel_count(),
            pixel_count()};
  }
  std::span<const double> channel(int c) const noexcept {
    return {data_.data() + static_cast<std::size_t>(c) * pixel_count(),
            pixel_count()};
  }

  std::span<double> values() noexcept { return {data_.data(), data_.size()}; }
  std::span<const double> values() const noexcept {
    return {data_.data(), data_.size()};
  }

  /// Arithmetic mean of one channel plane.
  double channel_mean(int c) const noexcept {
    const auto plane = channel(c);
    double acc = 0.0;
    for (double v : plane) acc += v;
    return acc / static_cast<double>(plane.size());
  }

  bool same_size(const Image& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const Image& a, const Image& b) {
    return a.height_ == b.height_ && a.width_ == b.width_ && a.data_ == b.data_;
  }

private:
  static void check_dims(int height, int width) {
    if (height < 1 || width < 1)
      throw DimensionError("image dimensions must be at least 1x1");
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

namespace detail {

/// Sum of squared differences over one pair of equal-length planes,
/// accumulated in storage order.
inline double plane_sq_diff(std::span<const double> a,
                            std::span<const double> b) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

} // namespace detail

/// Euclidean distance between two images of equal size: the square root of
/// the sum of squared per-sample differences, unnormalized.  The sum is
/// accumulated per channel plane and the three partials are added in channel
/// order, which makes the value reproducible from per-channel partials.
inline double distance(const Image& a, const Image& b) {
  if (!a.same_size(b))
    throw DimensionError("distance requires images of equal size");
  const double s0 = detail::plane_sq_diff(a.channel(0), b.channel(0));
  const double s1 = detail::plane_sq_diff(a.channel(1), b.channel(1));
  const double s2 = detail::plane_sq_diff(a.channel(2), b.channel(2));
  return std::sqrt(s0 + s1 + s2);
}

/// Downscale by box averaging.  The input rows are split into out_height
/// contiguous bands and the columns into out_width contiguous bands; each
/// output sample is the plain mean of its box.  When the size does not divide
/// evenly the leading bands get the base size and the trailing bands absorb
/// one extra row or column each.  Upscaling is not supported; requesting an
/// output larger than the input (in either dimension) or smaller than 1x1
/// throws DimensionError.
inline Image resize_box(const Image& img, int out_height, int out_width) {
  if (out_height < 1 || out_width < 1)
    throw DimensionError("resize_box output must be at least 1x1");
  if (out_height > img.height() || out_width > img.width())
    throw DimensionError("resize_box cannot upscale");

  // Band boundaries: with rem = H % out, the trailing rem bands are one
  // larger, so band k starts at k*base + max(0, k - (out - rem)).
  const auto bounds = [](int in, int out) {
    std::vector<int> b(static_cast<std::size_t>(out) + 1);
    const int base = in / out;
    const int rem = in % out;
    for (int k = 0; k <= out; ++k)
      b[k] = k * base + std::max(0, k - (out - rem));
    return b;
  };
  const std::vector<int> rb = bounds(img.height(), out_height);
  const std::vector<int> cb = bounds(img.width(), out_width);

  Image out(out_height, out_width);
  for (int c = 0; c < 3; ++c) {
    for (int oi = 0; oi < out_height; ++oi) {
      for (int oj = 0; oj < out_width; ++oj) {
        double acc = 0.0;
        for (int i = rb[oi]; i < rb[oi + 1]; ++i)
          for (int j = cb[oj]; j < cb[oj + 1]; ++j)
            acc += img.at(i, j, c);
        const double n = static_cast<double>(rb[oi + 1] - rb[oi]) *
                         (cb[oj + 1] - cb[oj]);
        out.at(oi, oj, c) = acc / n;
      }
    }
  }
  return out;
}

} // namespace exie
