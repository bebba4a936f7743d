#include "tumorseg/render.hpp"

#include <cmath>

#include "tumorseg/error.hpp"
#include "tumorseg/metrics.hpp"

namespace tumorseg {
namespace {

std::uint8_t to_u8(double v) {
  const double r = std::round(v);
  return static_cast<std::uint8_t>(r < 0.0 ? 0.0 : (r > 255.0 ? 255.0 : r));
}

}  // namespace

void OverlaySpec::validate() const {
  if (!(background_darken >= 0.0 && background_darken <= 1.0))
    throw ValidationError("overlay: background_darken must lie in [0,1], got " +
                          std::to_string(background_darken));
  if (!(region_alpha >= 0.0 && region_alpha <= 1.0))
    throw ValidationError("overlay: region_alpha must lie in [0,1], got " +
                          std::to_string(region_alpha));
}

RgbImage render_overlay(const RgbImage& background, const BinaryMask& gt, const BinaryMask& pred,
                        const OverlaySpec& spec) {
  spec.validate();
  const int rows = background.rows(), cols = background.cols();
  if (gt.rows() != rows || gt.cols() != cols || pred.rows() != rows || pred.cols() != cols)
    throw ValidationError("render_overlay: background, gt, and pred dims must all match");

  const BinaryMask boundary = boundary_mask(gt);
  RgbImage out;
  for (auto& ch : out.channels) ch = PlaneU8(rows, cols);

  const double alpha = spec.region_alpha;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const bool g = gt(r, c) != 0, p = pred(r, c) != 0;
      const std::array<std::uint8_t, 3>* color = nullptr;
      if (boundary(r, c))
        color = &spec.boundary_color;
      else if (g && p)
        color = &spec.tp_color;
      else if (!g && p)
        color = &spec.fp_color;
      else if (g && !p)
        color = &spec.fn_color;

      for (int ch = 0; ch < 3; ++ch) {
        const double dark = background.channels[ch](r, c) * spec.background_darken;
        double v;
        if (color == &spec.boundary_color)
          v = (*color)[ch];  // boundary is stamped solid, not blended
        else if (color)
          v = dark * (1.0 - alpha) + (*color)[ch] * alpha;
        else
          v = dark;
        out.channels[ch](r, c) = to_u8(v);
      }
    }
  }
  return out;
}

RgbImage render_overlay(const PlaneU8& background, const BinaryMask& gt, const BinaryMask& pred,
                        const OverlaySpec& spec) {
  RgbImage rgb;
  for (auto& ch : rgb.channels) ch = background;
  return render_overlay(rgb, gt, pred, spec);
}

}  // namespace tumorseg
