#include <doctest.h>

#include <array>
#include <map>

#include "tumorseg/error.hpp"
#include "tumorseg/metrics.hpp"
#include "tumorseg/render.hpp"

using namespace tumorseg;

namespace {

RgbImage flat_background(int rows, int cols, std::uint8_t value) {
  RgbImage img;
  for (int k = 0; k < 3; ++k) img.channels[k] = PlaneU8(rows, cols, value);
  return img;
}

BinaryMask block(int rows, int cols, int r0, int r1, int c0, int c1) {
  BinaryMask m(rows, cols, 0);
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c) m(r, c) = 1;
  return m;
}

std::array<std::uint8_t, 3> pixel(const RgbImage& img, int r, int c) {
  return {img.channels[0](r, c), img.channels[1](r, c), img.channels[2](r, c)};
}

std::map<std::array<std::uint8_t, 3>, int> color_histogram(const RgbImage& img) {
  std::map<std::array<std::uint8_t, 3>, int> hist;
  for (int r = 0; r < img.rows(); ++r)
    for (int c = 0; c < img.cols(); ++c) ++hist[pixel(img, r, c)];
  return hist;
}

// Blend outcomes for background 200, darken 0.5, alpha 0.5.
constexpr std::array<std::uint8_t, 3> kDark = {100, 100, 100};
constexpr std::array<std::uint8_t, 3> kRed = {255, 0, 0};
constexpr std::array<std::uint8_t, 3> kGreenBlend = {50, 178, 50};
constexpr std::array<std::uint8_t, 3> kYellowBlend = {178, 178, 50};
constexpr std::array<std::uint8_t, 3> kPinkBlend = {178, 114, 146};

}  // namespace

TEST_CASE("empty masks leave only the darkened background") {
  const RgbImage bg = flat_background(6, 7, 200);
  const RgbImage out = render_overlay(bg, BinaryMask(6, 7, 0), BinaryMask(6, 7, 0));
  CHECK(out.rows() == 6);
  CHECK(out.cols() == 7);
  const auto hist = color_histogram(out);
  REQUIRE(hist.size() == 1);
  CHECK(hist.at(kDark) == 42);
}

TEST_CASE("perfect prediction shows agreement and contour colors only") {
  const RgbImage bg = flat_background(8, 8, 200);
  const BinaryMask gt = block(8, 8, 2, 5, 2, 5);
  const RgbImage out = render_overlay(bg, gt, gt);

  const auto hist = color_histogram(out);
  CHECK(hist.at(kRed) == 12);         // 4x4 block perimeter
  CHECK(hist.at(kGreenBlend) == 4);   // its 2x2 interior
  CHECK(hist.at(kDark) == 64 - 16);
  CHECK(!hist.count(kYellowBlend));
  CHECK(!hist.count(kPinkBlend));
}

TEST_CASE("a shifted prediction partitions pixels into the five classes") {
  const RgbImage bg = flat_background(8, 8, 200);
  const BinaryMask gt = block(8, 8, 2, 5, 2, 5);
  const BinaryMask pred = block(8, 8, 2, 5, 4, 7);
  const RgbImage out = render_overlay(bg, gt, pred);

  const auto hist = color_histogram(out);
  CHECK(hist.at(kRed) == 12);          // ground-truth contour wins everywhere
  CHECK(hist.at(kGreenBlend) == 2);    // overlap off the contour
  CHECK(hist.at(kYellowBlend) == 8);   // false positives
  CHECK(hist.at(kPinkBlend) == 2);     // misses off the contour
  CHECK(hist.at(kDark) == 40);
  int total = 0;
  for (const auto& [color, count] : hist) total += count;
  CHECK(total == 64);
  CHECK(hist.size() == 5);

  // Contour pixels carry the pure boundary color, no blending.
  const BinaryMask contour = boundary_mask(gt);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c)
      if (contour(r, c)) CHECK(pixel(out, r, c) == kRed);
}

TEST_CASE("grayscale backgrounds render like replicated rgb") {
  const PlaneU8 gray(8, 8, 200);
  const BinaryMask gt = block(8, 8, 1, 4, 1, 4);
  const BinaryMask pred = block(8, 8, 2, 5, 2, 5);
  const RgbImage a = render_overlay(gray, gt, pred);
  const RgbImage b = render_overlay(flat_background(8, 8, 200), gt, pred);
  for (int k = 0; k < 3; ++k) CHECK(a.channels[k] == b.channels[k]);
}

TEST_CASE("custom factors reach the blend math") {
  OverlaySpec spec;
  spec.background_darken = 1.0;  // keep the background as is
  spec.region_alpha = 1.0;       // paint regions solid
  const RgbImage bg = flat_background(4, 4, 120);
  BinaryMask pred(4, 4, 0);
  pred(1, 1) = 1;
  const RgbImage out = render_overlay(bg, BinaryMask(4, 4, 0), pred, spec);
  CHECK(pixel(out, 1, 1) == std::array<std::uint8_t, 3>{255, 255, 0});
  CHECK(pixel(out, 0, 0) == std::array<std::uint8_t, 3>{120, 120, 120});
}

TEST_CASE("overlay inputs are validated") {
  OverlaySpec bad;
  bad.region_alpha = 1.5;
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  const RgbImage bg = flat_background(4, 4, 10);
  CHECK_THROWS_AS((void)render_overlay(bg, BinaryMask(3, 3, 0), BinaryMask(4, 4, 0)),
                  ValidationError);
}
