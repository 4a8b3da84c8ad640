#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "exie/color.hpp"
#include "exie/metrics.hpp"
#include "support/rng.hpp"

using exie::Image;
using testsupport::TestRng;
using Catch::Matchers::WithinAbs;

namespace {

Image constant_image(int h, int w, double r, double g, double b) {
  Image img(h, w);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      img.at(i, j, 0) = r;
      img.at(i, j, 1) = g;
      img.at(i, j, 2) = b;
    }
  return img;
}

} // namespace

TEST_CASE("psnr matches closed forms for uniform offsets") {
  // MSE 0.25 -> 10 log10(4); MSE 0.01 -> 20 dB.
  const Image a = constant_image(16, 16, 0.25, 0.25, 0.25);
  const Image b = constant_image(16, 16, 0.75, 0.75, 0.75);
  CHECK_THAT(exie::psnr(a, b), WithinAbs(6.020599913279624, 1e-9));

  const Image c = constant_image(16, 16, 0.45, 0.45, 0.45);
  const Image d = constant_image(16, 16, 0.55, 0.55, 0.55);
  CHECK_THAT(exie::psnr(c, d), WithinAbs(20.0, 1e-9));
}

TEST_CASE("psnr of identical images is the infinity sentinel") {
  TestRng rng(13001);
  const Image a = testsupport::random_image(rng, 8, 8);
  CHECK(std::isinf(exie::psnr(a, a)));
  CHECK(exie::psnr(a, a) > 0.0);
}

TEST_CASE("psnr is symmetric and rejects size mismatches") {
  TestRng rng(13002);
  const Image a = testsupport::random_image(rng, 8, 8);
  const Image b = testsupport::random_image(rng, 8, 8);
  CHECK(exie::psnr(a, b) == exie::psnr(b, a));
  CHECK_THROWS_AS(exie::psnr(a, Image(8, 9)), exie::DimensionError);
}

TEST_CASE("ssim of an image with itself is one") {
  TestRng rng(13003);
  const Image a = testsupport::random_image(rng, 16, 16);
  CHECK_THAT(exie::ssim(a, a), WithinAbs(1.0, 1e-12));
}

TEST_CASE("ssim of distinct constant images matches the closed form") {
  // Constant 0.5 vs 0.6: all variances vanish, leaving
  // (2*0.3 + 1e-4)(9e-4) / ((0.25 + 0.36 + 1e-4)(9e-4)) = 0.9836092443861661.
  const Image a = constant_image(16, 16, 0.5, 0.5, 0.5);
  const Image b = constant_image(16, 16, 0.6, 0.6, 0.6);
  CHECK_THAT(exie::ssim(a, b), WithinAbs(0.9836092443861661, 1e-9));
}

TEST_CASE("ssim stays within bounds, is symmetric, and needs 11x11") {
  TestRng rng(13004);
  for (int it = 0; it < 5; ++it) {
    const Image a = testsupport::random_image(rng, 12, 15);
    const Image b = testsupport::random_image(rng, 12, 15);
    const double s = exie::ssim(a, b);
    CHECK(s <= 1.0 + 1e-12);
    CHECK(s >= -1.0 - 1e-12);
    CHECK_THAT(exie::ssim(b, a), WithinAbs(s, 1e-12));
  }
  CHECK_NOTHROW(exie::ssim(Image(11, 11), Image(11, 11)));
  CHECK_THROWS_AS(exie::ssim(Image(10, 12), Image(10, 12)),
                  exie::DimensionError);
  CHECK_THROWS_AS(exie::ssim(Image(12, 10), Image(12, 10)),
                  exie::DimensionError);
}

TEST_CASE("srgb_to_lab maps white and black to the Lab axis endpoints") {
  const exie::Lab white = exie::srgb_to_lab(1.0, 1.0, 1.0);
  CHECK_THAT(white.L, WithinAbs(100.0, 1e-12));
  CHECK_THAT(white.a, WithinAbs(0.0, 1e-12));
  CHECK_THAT(white.b, WithinAbs(0.0, 1e-12));

  const exie::Lab black = exie::srgb_to_lab(0.0, 0.0, 0.0);
  CHECK_THAT(black.L, WithinAbs(0.0, 1e-12));
  CHECK_THAT(black.a, WithinAbs(0.0, 1e-12));
  CHECK_THAT(black.b, WithinAbs(0.0, 1e-12));
}

TEST_CASE("grays sit on the neutral axis") {
  for (double v : {0.1, 0.2, 0.5, 0.73, 0.9}) {
    const exie::Lab lab = exie::srgb_to_lab(v, v, v);
    CHECK_THAT(lab.a, WithinAbs(0.0, 1e-9));
    CHECK_THAT(lab.b, WithinAbs(0.0, 1e-9));
  }
}

TEST_CASE("delta_e76 worked values") {
  const Image white = constant_image(4, 4, 1.0, 1.0, 1.0);
  const Image black = constant_image(4, 4, 0.0, 0.0, 0.0);
  CHECK_THAT(exie::delta_e76(white, black), WithinAbs(100.0, 1e-9));

  const Image red = constant_image(4, 4, 1.0, 0.0, 0.0);
  const Image green = constant_image(4, 4, 0.0, 1.0, 0.0);
  CHECK_THAT(exie::delta_e76(red, green),
             WithinAbs(170.56523675642947, 1e-6));

  CHECK(exie::delta_e76(red, red) == 0.0);
}

TEST_CASE("delta_e76 is symmetric and non-negative") {
  TestRng rng(13005);
  for (int it = 0; it < 5; ++it) {
    const Image a = testsupport::random_image(rng, 6, 6);
    const Image b = testsupport::random_image(rng, 6, 6);
    const double d = exie::delta_e76(a, b);
    CHECK(d >= 0.0);
    CHECK_THAT(exie::delta_e76(b, a), WithinAbs(d, 1e-12));
  }
}

TEST_CASE("metrics_report bundles all three metrics") {
  TestRng rng(13006);
  const Image a = testsupport::random_image(rng, 16, 16);
  const Image b = testsupport::random_image(rng, 16, 16);
  const exie::MetricsReport m = exie::metrics_report(a, b);
  CHECK(m.psnr == exie::psnr(a, b));
  CHECK(m.ssim == exie::ssim(a, b));
  CHECK(m.delta_e76 == exie::delta_e76(a, b));
}
