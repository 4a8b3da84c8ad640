#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "exie/error.hpp"
#include "exie/image.hpp"

namespace exie {

/// The three elementary edit families.
enum class OpFamily : std::uint8_t { Brightness, Contrast, Gamma };

/// Which channels an operator touches.
enum class ChannelSelector : std::uint8_t { All, R, G, B };

/// Parameter menus, one per family.  An operator's param must be drawn from
/// its family's menu.
inline constexpr std::array<double, 4> kBrightnessDeltas{-0.05, 0.05, -0.005,
                                                         0.005};
inline constexpr std::array<double, 2> kContrastSigmas{0.9, 1.4};
inline constexpr std::array<double, 2> kGammaValues{0.6, 1.05};

inline constexpr std::array<ChannelSelector, 4> kSelectors{
    ChannelSelector::All, ChannelSelector::R, ChannelSelector::G,
    ChannelSelector::B};

/// One elementary edit: a family, a parameter from that family's menu, and a
/// channel selector.
struct Operator {
  OpFamily family = OpFamily::Brightness;
  double param = 0.0;
  ChannelSelector channels = ChannelSelector::All;

  friend bool operator==(const Operator&, const Operator&) = default;
};

/// Strict weak order over operators (family, then param, then selector), for
/// use as a map key.
struct OperatorLess {
  bool operator()(const Operator& a, const Operator& b) const noexcept {
    return std::tuple(static_cast<int>(a.family), a.param,
                      static_cast<int>(a.channels)) <
           std::tuple(static_cast<int>(b.family), b.param,
                      static_cast<int>(b.channels));
  }
};

inline std::string family_name(OpFamily f) {
  switch (f) {
    case OpFamily::Brightness: return "brightness";
    case OpFamily::Contrast: return "contrast";
    case OpFamily::Gamma: return "gamma";
  }
  return "?";
}

inline std::string selector_name(ChannelSelector s) {
  switch (s) {
    case ChannelSelector::All: return "all";
    case ChannelSelector::R: return "r";
    case ChannelSelector::G: return "g";
    case ChannelSelector::B: return "b";
  }
  return "?";
}

/// Channel indices an operator touches, in plane order.
inline std::span<const int> selected_channels(ChannelSelector s) noexcept {
  static constexpr std::array<int, 3> all{0, 1, 2};
  static constexpr std::array<int, 1> r{0}, g{1}, b{2};
  switch (s) {
    case ChannelSelector::All: return all;
    case ChannelSelector::R: return r;
    case ChannelSelector::G: return g;
    case ChannelSelector::B: return b;
  }
  return {};
}

/// True when the operator's parameter is exactly one of its family's menu
/// values.
inline bool valid_operator(const Operator& op) noexcept {
  const auto in_menu = [&](std::span<const double> menu) {
    for (double m : menu)
      if (op.param == m) return true;
    return false;
  };
  switch (op.family) {
    case OpFamily::Brightness:
      return in_menu({kBrightnessDeltas.data(), kBrightnessDeltas.size()});
    case OpFamily::Contrast:
      return in_menu({kContrastSigmas.data(), kContrastSigmas.size()});
    case OpFamily::Gamma:
      return in_menu({kGammaValues.data(), kGammaValues.size()});
  }
  return false;
}

/// Short human-readable form, e.g. "brightness(+0.05, all)".
inline std::string op_name(const Operator& op) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s(%+g, %s)", family_name(op.family).c_str(),
                op.param, selector_name(op.channels).c_str());
  return buf;
}

namespace detail {

/// Transform one plane.  For contrast, mu is the mean of the input plane,
/// taken before the transform.  Every kernel ends in clamp01.  These are the
/// only sample transforms in the library; the search reuses them verbatim so
/// its incremental results match a plain replay bit for bit.
inline void transform_plane(OpFamily family, double param,
                            std::span<const double> in, std::span<double> out,
                            double mu) noexcept {
  const std::size_t n = in.size();
  switch (family) {
    case OpFamily::Brightness:
      for (std::size_t i = 0; i < n; ++i) out[i] = clamp01(in[i] + param);
      break;
    case OpFamily::Contrast:
      for (std::size_t i = 0; i < n; ++i)
        out[i] = clamp01(mu + param * (in[i] - mu));
      break;
    case OpFamily::Gamma:
      for (std::size_t i = 0; i < n; ++i)
        out[i] = clamp01(std::pow(in[i], param));
      break;
  }
}

} // namespace detail

/// Apply one operator, returning a new image.  Unselected channels are copied
/// bit for bit.  Contrast pivots around the mean of each selected channel of
/// the input image, computed before the transform, so an all-channel contrast
/// uses three independent pivots.  Gamma maps 0 to 0 exactly.
inline Image apply(const Operator& op, const Image& img) {
  Image out = img;
  for (int c : selected_channels(op.channels)) {
    const double mu =
        op.family == OpFamily::Contrast ? img.channel_mean(c) : 0.0;
    detail::transform_plane(op.family, op.param, img.channel(c),
                            out.channel(c), mu);
  }
  return out;
}

/// Apply a list of operators left to right.
inline Image apply_sequence(std::span<const Operator> ops, const Image& img) {
  Image cur = img;
  for (const Operator& op : ops) cur = apply(op, cur);
  return cur;
}

/// All 32 elementary operators: families in brightness, contrast, gamma
/// order; within a family, parameters in menu order; within a parameter,
/// selectors in all, r, g, b order.  This is also the child enumeration
/// order of the search.
inline std::vector<Operator> enumerate_all() {
  std::vector<Operator> ops;
  ops.reserve(32);
  for (double d : kBrightnessDeltas)
    for (ChannelSelector s : kSelectors)
      ops.push_back({OpFamily::Brightness, d, s});
  for (double d : kContrastSigmas)
    for (ChannelSelector s : kSelectors)
      ops.push_back({OpFamily::Contrast, d, s});
  for (double d : kGammaValues)
    for (ChannelSelector s : kSelectors)
      ops.push_back({OpFamily::Gamma, d, s});
  return ops;
}

} // namespace exie
