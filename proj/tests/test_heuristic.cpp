#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "exie/heuristic.hpp"
#include "support/oracles.hpp"
#include "support/rng.hpp"

using exie::brightness_counter;
using exie::contrast_counter;
using exie::gamma_counter;
using exie::HeuristicConfig;
using exie::Image;
using testsupport::TestRng;
using Catch::Matchers::WithinAbs;

TEST_CASE("brightness counter worked values") {
  CHECK_THAT(brightness_counter(0.30, 0.40), WithinAbs(2.0, 1e-9));
  CHECK_THAT(brightness_counter(0.40, 0.30), WithinAbs(2.0, 1e-9));
  CHECK_THAT(brightness_counter(0.0, 1.0), WithinAbs(20.0, 1e-9));
  CHECK(brightness_counter(0.37, 0.37) == 0.0);
}

TEST_CASE("contrast counter worked values") {
  // Offsets 0.1 and 0.196 around 0.5: the ratio is 1.96 = 1.4^2.
  CHECK_THAT(contrast_counter(0.6, 0.696, 0.5), WithinAbs(2.0, 1e-9));
  // Opposite sides of the pivot can never meet.
  CHECK(std::isinf(contrast_counter(0.4, 0.6, 0.5)));
  // A sample on the pivot never leaves it.
  CHECK(std::isinf(contrast_counter(0.5, 0.7, 0.5)));
  CHECK(std::isinf(contrast_counter(0.3, 0.5, 0.5)));
  // Shrinking toward the pivot uses the 0.9 branch.
  CHECK_THAT(contrast_counter(0.5 + 0.2, 0.5 + 0.2 * 0.81, 0.5),
             WithinAbs(2.0, 1e-9));
  CHECK(contrast_counter(0.42, 0.42, 0.5) == 0.0);
}

TEST_CASE("gamma counter worked values") {
  // Two applications of gamma 0.6: x^(0.6^2).
  const double y = std::pow(0.25, 0.36);
  CHECK_THAT(gamma_counter(0.25, y), WithinAbs(2.0, 1e-9));
  // Darkening from 0.607 down to 0.25 takes about 21 gamma-1.05 steps.
  CHECK_THAT(gamma_counter(0.607, 0.25),
             WithinAbs(20.933105677276814, 1e-9));
  CHECK(gamma_counter(0.8, 0.8) == 0.0);
}

TEST_CASE("counters are non-negative and brightness and gamma stay finite") {
  TestRng rng(11001);
  for (int it = 0; it < 500; ++it) {
    const double x = rng.unit();
    const double y = rng.unit();
    const double mu = rng.unit();
    const double nb = brightness_counter(x, y);
    const double nc = contrast_counter(x, y, mu);
    const double ng = gamma_counter(x, y);
    CHECK(nb >= 0.0);
    CHECK(nc >= 0.0);
    CHECK(ng >= 0.0);
    CHECK(std::isfinite(nb));
    CHECK(std::isfinite(ng));
  }
  // Extremes included.
  CHECK(std::isfinite(brightness_counter(0.0, 1.0)));
  CHECK(std::isfinite(gamma_counter(0.0, 1.0)));
  CHECK(std::isfinite(gamma_counter(1.0, 0.0)));
}

TEST_CASE("counters agree with step simulation within one application") {
  TestRng rng(11002);
  int finite_contrast = 0;
  for (int it = 0; it < 300; ++it) {
    const double x = rng.in(0.02, 0.98);
    const double y = rng.in(0.02, 0.98);
    const double mu = rng.in(0.1, 0.9);
    if (std::fabs(x - mu) < 1e-3 || std::fabs(y - mu) < 1e-3) continue;
    if (std::fabs(x - y) < 1e-6) continue;

    const double nb = brightness_counter(x, y);
    const double sb = testsupport::sim_brightness_steps(x, y);
    CHECK(std::fabs(nb - sb) <= 1.0 + 1e-6);

    const double ng = gamma_counter(x, y);
    const double sg = testsupport::sim_gamma_steps(x, y);
    CHECK(std::fabs(ng - sg) <= 1.0 + 1e-6);

    const double nc = contrast_counter(x, y, mu);
    const double sc = testsupport::sim_contrast_steps(x, y, mu);
    REQUIRE(std::isinf(nc) == std::isinf(sc));
    if (std::isfinite(nc)) {
      CHECK(std::fabs(nc - sc) <= 1.0 + 1e-6);
      ++finite_contrast;
    }
  }
  CHECK(finite_contrast > 50);
}

TEST_CASE("whole-image heuristic is zero exactly on equal images") {
  TestRng rng(11003);
  const Image x = testsupport::random_image(rng, 8, 8);
  CHECK(exie::heuristic_h(x, x) == 0.0);

  Image y = x;
  y.at(3, 3, 1) = exie::clamp01(y.at(3, 3, 1) + 0.2);
  CHECK(exie::heuristic_h(x, y) > 0.0);
}

TEST_CASE("a single far-off sample is costed by its cheapest family") {
  // One sample 0.5 -> 1.0 with everything else equal: contrast cannot move
  // it (zero offset from the mean), gamma takes ~17 steps, brightness 10.
  Image x(4, 4), t(4, 4);
  for (double& v : x.values()) v = 0.5;
  t = x;
  t.at(0, 0, 0) = 1.0;
  CHECK_THAT(exie::heuristic_h(x, t), WithinAbs(10.0, 1e-9));
}

TEST_CASE("black to white costs exactly the coarse brightness ladder") {
  Image black(4, 4), white(4, 4);
  for (double& v : white.values()) v = 1.0;
  const double h = exie::heuristic_h(black, white);
  CHECK(std::isfinite(h));
  CHECK_THAT(h, WithinAbs(20.0, 1e-9));
}

TEST_CASE("screened evaluator matches the naive maximum") {
  TestRng rng(11004);
  for (int it = 0; it < 20; ++it) {
    const Image x = testsupport::random_image(rng, 8, 8);
    const Image t = testsupport::random_image(rng, 8, 8);
    const double naive = testsupport::naive_heuristic(x, t);
    CHECK_THAT(exie::heuristic_h(x, t), WithinAbs(naive, 1e-12));
  }
  // Near-identical pairs exercise the equality and epsilon paths.
  for (int it = 0; it < 10; ++it) {
    const Image x = testsupport::random_image(rng, 8, 8, 0.3, 0.7);
    Image t = x;
    for (double& v : t.values())
      if (rng.unit() < 0.1) v = exie::clamp01(v + rng.in(-0.01, 0.01));
    const double naive = testsupport::naive_heuristic(x, t);
    CHECK_THAT(exie::heuristic_h(x, t), WithinAbs(naive, 1e-12));
  }
}

TEST_CASE("seeding the channel maximum only raises the floor") {
  TestRng rng(11005);
  const Image x = testsupport::random_image(rng, 8, 8);
  const Image t = testsupport::random_image(rng, 8, 8);
  const exie::detail::HeuristicEvaluator ev(t);
  for (int c = 0; c < 3; ++c) {
    const double mu = x.channel_mean(c);
    const double plain = ev.channel_max(x.channel(c), c, mu);
    for (double seed : {0.0, 0.5, plain * 0.5, plain, plain * 2.0}) {
      const double seeded = ev.channel_max(x.channel(c), c, mu, seed);
      CHECK_THAT(seeded, WithinAbs(std::max(seed, plain), 1e-12));
    }
  }
}

TEST_CASE("heuristic configuration is validated") {
  HeuristicConfig bad;
  bad.eps_log = 0.0;
  CHECK_THROWS_AS(bad.validate(), exie::ConfigError);
  bad.eps_log = 0.6;
  CHECK_THROWS_AS(bad.validate(), exie::ConfigError);
  bad = HeuristicConfig{};
  bad.eps_eq = -1e-9;
  CHECK_THROWS_AS(bad.validate(), exie::ConfigError);
  CHECK_NOTHROW(HeuristicConfig{}.validate());

  const Image a(2, 2), b(2, 3);
  CHECK_THROWS_AS(exie::heuristic_h(a, b), exie::DimensionError);
}
