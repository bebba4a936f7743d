#include "tumorseg/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <vector>

#include "tumorseg/error.hpp"

namespace tumorseg {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngImage {
  int rows = 0, cols = 0;
  int channels = 0;  // 1 = gray, 3 = rgb
  std::vector<std::uint8_t> pixels;  // interleaved
};

PngImage read_png(const std::filesystem::path& path) {
  FilePtr f(std::fopen(path.string().c_str(), "rb"));
  if (!f) throw IoError("cannot open PNG for reading: " + path.string());

  png_byte sig[8];
  if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8))
    throw ParseError("not a PNG file: " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng allocation failure");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("corrupt PNG: " + path.string());
  }
  png_init_io(png, f.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (bit_depth != 8 ||
      (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_RGB)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ParseError("unsupported PNG format (need 8-bit gray or RGB): " + path.string());
  }

  PngImage img;
  img.rows = static_cast<int>(png_get_image_height(png, info));
  img.cols = static_cast<int>(png_get_image_width(png, info));
  img.channels = color_type == PNG_COLOR_TYPE_GRAY ? 1 : 3;
  img.pixels.resize(static_cast<std::size_t>(img.rows) * img.cols * img.channels);

  std::vector<png_bytep> row_ptrs(img.rows);
  const std::size_t stride = static_cast<std::size_t>(img.cols) * img.channels;
  for (int r = 0; r < img.rows; ++r) row_ptrs[r] = img.pixels.data() + r * stride;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void write_png(const std::filesystem::path& path, int rows, int cols, int channels,
               const std::uint8_t* pixels) {
  if (rows < 1 || cols < 1) throw ValidationError("write_png: empty image");
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    FilePtr f(std::fopen(tmp.string().c_str(), "wb"));
    if (!f) throw IoError("cannot open PNG for writing: " + tmp.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
      png_destroy_write_struct(&png, &info);
      throw IoError("libpng allocation failure");
    }
    if (setjmp(png_jmpbuf(png))) {
      png_destroy_write_struct(&png, &info);
      throw IoError("PNG write failure: " + tmp.string());
    }
    png_init_io(png, f.get());
    // Fixed settings keep reruns byte-identical.
    png_set_compression_level(png, 6);
    png_set_filter(png, 0, PNG_ALL_FILTERS);
    png_set_IHDR(png, info, cols, rows, 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_bytep> row_ptrs(rows);
    const std::size_t stride = static_cast<std::size_t>(cols) * channels;
    for (int r = 0; r < rows; ++r)
      row_ptrs[r] = const_cast<png_bytep>(pixels + r * stride);
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed for " + path.string() + ": " + ec.message());
}

}  // namespace

void write_png_gray(const std::filesystem::path& path, const PlaneU8& image) {
  write_png(path, image.rows(), image.cols(), 1, image.data());
}

void write_png_rgb(const std::filesystem::path& path, const RgbImage& image) {
  const int rows = image.rows(), cols = image.cols();
  std::vector<std::uint8_t> interleaved(static_cast<std::size_t>(rows) * cols * 3);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      for (int ch = 0; ch < 3; ++ch)
        interleaved[(static_cast<std::size_t>(r) * cols + c) * 3 + ch] = image.channels[ch](r, c);
  write_png(path, rows, cols, 3, interleaved.data());
}

PlaneU8 read_png_gray(const std::filesystem::path& path) {
  PngImage img = read_png(path);
  if (img.channels != 1)
    throw ParseError("expected single-channel PNG: " + path.string());
  PlaneU8 out(img.rows, img.cols);
  std::copy(img.pixels.begin(), img.pixels.end(), out.data());
  return out;
}

RgbImage read_png_rgb(const std::filesystem::path& path) {
  PngImage img = read_png(path);
  RgbImage out;
  for (auto& ch : out.channels) ch = PlaneU8(img.rows, img.cols);
  for (int r = 0; r < img.rows; ++r) {
    for (int c = 0; c < img.cols; ++c) {
      const std::size_t base = (static_cast<std::size_t>(r) * img.cols + c) * img.channels;
      for (int ch = 0; ch < 3; ++ch)
        out.channels[ch](r, c) = img.pixels[img.channels == 1 ? base : base + ch];
    }
  }
  return out;
}

bool png_is_gray(const std::filesystem::path& path) { return read_png(path).channels == 1; }

BinaryMask read_mask_png(const std::filesystem::path& path) {
  PlaneU8 gray = read_png_gray(path);
  BinaryMask mask(gray.rows(), gray.cols());
  for (std::size_t i = 0; i < gray.size(); ++i) mask.data()[i] = gray.data()[i] >= 128 ? 1 : 0;
  return mask;
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
  PlaneU8 gray(mask.rows(), mask.cols());
  for (std::size_t i = 0; i < mask.size(); ++i) gray.data()[i] = mask.data()[i] ? 255 : 0;
  write_png_gray(path, gray);
}

}  // namespace tumorseg
