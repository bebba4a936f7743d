#include <doctest.h>

#include <filesystem>

#include "test_util.hpp"
#include "tumorseg/error.hpp"
#include "tumorseg/png_io.hpp"

using namespace tumorseg;
using testutil::TempDir;

namespace {

PlaneU8 gradient(int rows, int cols, int phase) {
  PlaneU8 p(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      p(r, c) = static_cast<std::uint8_t>((r * 37 + c * 11 + phase) % 256);
  return p;
}

}  // namespace

TEST_CASE("gray PNG round-trip") {
  TempDir dir("png_gray");
  const PlaneU8 img = gradient(5, 7, 0);
  const auto path = dir / "g.png";
  write_png_gray(path, img);
  CHECK(png_is_gray(path));
  CHECK(read_png_gray(path) == img);
}

TEST_CASE("rgb PNG round-trip") {
  TempDir dir("png_rgb");
  RgbImage img;
  for (int k = 0; k < 3; ++k) img.channels[k] = gradient(6, 4, 40 * k);
  const auto path = dir / "c.png";
  write_png_rgb(path, img);
  CHECK(!png_is_gray(path));
  const RgbImage back = read_png_rgb(path);
  for (int k = 0; k < 3; ++k) CHECK(back.channels[k] == img.channels[k]);
}

TEST_CASE("gray file read through the rgb reader replicates channels") {
  TempDir dir("png_gray_as_rgb");
  const PlaneU8 img = gradient(3, 3, 5);
  const auto path = dir / "g.png";
  write_png_gray(path, img);
  const RgbImage rgb = read_png_rgb(path);
  CHECK(rgb.channels[0] == img);
  CHECK(rgb.channels[1] == img);
  CHECK(rgb.channels[2] == img);
}

TEST_CASE("mask PNG writes 0/255 and reads back by threshold") {
  TempDir dir("png_mask");
  BinaryMask mask(4, 5, 0);
  mask(1, 2) = 1;
  mask(3, 4) = 1;
  const auto path = dir / "m.png";
  write_mask_png(path, mask);

  const PlaneU8 raw = read_png_gray(path);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 5; ++c) CHECK(raw(r, c) == (mask(r, c) ? 255 : 0));
  CHECK(read_mask_png(path) == mask);
}

TEST_CASE("mask threshold sits at 128") {
  TempDir dir("png_thresh");
  PlaneU8 img(1, 2);
  img(0, 0) = 127;
  img(0, 1) = 128;
  const auto path = dir / "t.png";
  write_png_gray(path, img);
  const BinaryMask m = read_mask_png(path);
  CHECK(m(0, 0) == 0);
  CHECK(m(0, 1) == 1);
}

TEST_CASE("writes are atomic and deterministic") {
  TempDir dir("png_atomic");
  const PlaneU8 img = gradient(9, 9, 1);
  write_png_gray(dir / "a.png", img);
  write_png_gray(dir / "b.png", img);
  CHECK(testutil::files_equal(dir / "a.png", dir / "b.png"));
  for (const auto& entry : std::filesystem::directory_iterator(dir.path()))
    CHECK(entry.path().extension() == ".png");  // no leftover temp files
}

TEST_CASE("reader failures map to the right error kinds") {
  TempDir dir("png_err");
  CHECK_THROWS_AS((void)read_png_gray(dir / "missing.png"), IoError);
  testutil::write_file(dir / "fake.png", "definitely not a png");
  CHECK_THROWS_AS((void)read_png_gray(dir / "fake.png"), ParseError);
}

TEST_CASE("empty images are rejected at write") {
  TempDir dir("png_empty");
  CHECK_THROWS_AS(write_png_gray(dir / "e.png", PlaneU8()), ValidationError);
}
