#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "exie/error.hpp"
#include "exie/image.hpp"
#include "exie/operators.hpp"
#include "exie/sequence.hpp"

namespace exie {

namespace detail {

/// SplitMix64: tiny deterministic generator with a fixed algorithm, so
/// synthetic fixtures are reproducible across platforms and standard library
/// versions.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) noexcept : s_(seed) {}

  std::uint64_t next() noexcept {
    s_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

private:
  std::uint64_t s_;
};

/// True when applying the operator to this image keeps every sample inside
/// [0, 1] without the final clamp doing any work.  Each family's transform
/// is monotone in the sample, so checking the per-plane extremes suffices.
inline bool clip_free(const Operator& op, const Image& img) {
  for (int c : selected_channels(op.channels)) {
    const auto plane = img.channel(c);
    double lo = plane[0], hi = plane[0];
    for (double v : plane) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
    const double mu =
        op.family == OpFamily::Contrast ? img.channel_mean(c) : 0.0;
    const auto raw = [&](double v) {
      switch (op.family) {
        case OpFamily::Brightness: return v + op.param;
        case OpFamily::Contrast: return mu + op.param * (v - mu);
        case OpFamily::Gamma: return std::pow(v, op.param);
      }
      return v;
    };
    if (raw(lo) < 0.0 || raw(hi) > 1.0) return false;
  }
  return true;
}

} // namespace detail

/// A planted-edit fixture: target is exactly truth applied to input.
struct SyntheticPair {
  Image input;
  EditSequence truth;
  Image target;
};

/// Deterministic planted-edit generator for benchmarks and recovery tests.
///
/// The input is a 32x32 image of uniformly random 8-bit levels in [26, 229],
/// so its samples survive PNG quantization exactly and sit well inside the
/// unit interval.  The planted program draws length operators from the six
/// coarse all-channel edits (brightness +-0.05, contrast 0.9 and 1.4, gamma
/// 0.6 and 1.05), rejecting any draw that would clip the current image;
/// every planted step is therefore exactly invertible in distance terms and
/// visible even after 8-bit quantization.  The fine +-0.005 brightness steps
/// are deliberately not planted: they move an image by about one 8-bit level,
/// which a round trip through PNG can erase.  length must lie in [1, 5].
inline SyntheticPair make_synthetic_pair(std::uint64_t seed, int length) {
  if (length < 1 || length > 5)
    throw ConfigError("synthetic pair length must lie in [1, 5]");

  detail::SplitMix64 rng(seed);

  Image input(32, 32);
  for (double& v : input.values())
    v = static_cast<double>(26 + rng.next() % 204) / 255.0;

  static const std::array<Operator, 6> menu{{
      {OpFamily::Brightness, kBrightnessDeltas[0], ChannelSelector::All},
      {OpFamily::Brightness, kBrightnessDeltas[1], ChannelSelector::All},
      {OpFamily::Contrast, kContrastSigmas[0], ChannelSelector::All},
      {OpFamily::Contrast, kContrastSigmas[1], ChannelSelector::All},
      {OpFamily::Gamma, kGammaValues[0], ChannelSelector::All},
      {OpFamily::Gamma, kGammaValues[1], ChannelSelector::All},
  }};

  SyntheticPair pair;
  pair.input = input;
  Image cur = input;
  for (int k = 0; k < length; ++k) {
    Operator op = menu[rng.next() % menu.size()];
    for (int attempt = 0; attempt < 1000 && !detail::clip_free(op, cur);
         ++attempt)
      op = menu[rng.next() % menu.size()];
    if (!detail::clip_free(op, cur))
      op = menu[5];  // gamma never clips; unreachable fallback
    pair.truth.ops.push_back(op);
    cur = apply(op, cur);
  }
  pair.truth.meta = {{"generator", "synth"},
                     {"seed", seed},
                     {"length", length}};
  pair.target = cur;
  return pair;
}

} // namespace exie
