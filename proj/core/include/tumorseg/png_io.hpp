#ifndef TUMORSEG_PNG_IO_HPP
#define TUMORSEG_PNG_IO_HPP

#include <array>
#include <filesystem>

#include "tumorseg/grid.hpp"

namespace tumorseg {

struct RgbImage {
  std::array<PlaneU8, 3> channels;  // R, G, B

  int rows() const { return channels[0].rows(); }
  int cols() const { return channels[0].cols(); }
};

// 8-bit PNG I/O. Only grayscale and RGB at bit depth 8 are handled;
// anything else (palette, 16-bit, alpha) is a ParseError. Writes are
// atomic: encode to "<path>.tmp", then rename.
void write_png_gray(const std::filesystem::path& path, const PlaneU8& image);
void write_png_rgb(const std::filesystem::path& path, const RgbImage& image);

PlaneU8 read_png_gray(const std::filesystem::path& path);
RgbImage read_png_rgb(const std::filesystem::path& path);  // grayscale reads as R=G=B

bool png_is_gray(const std::filesystem::path& path);

// Mask convention for ingested predictions: value >= 128 reads as true.
BinaryMask read_mask_png(const std::filesystem::path& path);
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);  // true -> 255

}  // namespace tumorseg

#endif
