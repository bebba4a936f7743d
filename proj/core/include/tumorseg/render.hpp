#ifndef TUMORSEG_RENDER_HPP
#define TUMORSEG_RENDER_HPP

#include <array>
#include <cstdint>

#include "tumorseg/grid.hpp"
#include "tumorseg/png_io.hpp"

namespace tumorseg {

// Colors and blend weights for the prediction-vs-truth overlay:
// green = predicted true and is true, yellow = predicted true but false,
// pink = predicted false but true, red = ground-truth boundary.
struct OverlaySpec {
  std::array<std::uint8_t, 3> tp_color = {0, 255, 0};
  std::array<std::uint8_t, 3> fp_color = {255, 255, 0};
  std::array<std::uint8_t, 3> fn_color = {255, 128, 192};
  std::array<std::uint8_t, 3> boundary_color = {255, 0, 0};
  double background_darken = 0.5;
  double region_alpha = 0.5;

  void validate() const;  // factors must lie in [0, 1]
};

// Darken the background, alpha-blend each pixel's class color (TP/FP/FN)
// over it, then stamp the ground-truth boundary solid on top.
RgbImage render_overlay(const RgbImage& background, const BinaryMask& gt, const BinaryMask& pred,
                        const OverlaySpec& spec = {});

// Grayscale background convenience: replicated across channels first.
RgbImage render_overlay(const PlaneU8& background, const BinaryMask& gt, const BinaryMask& pred,
                        const OverlaySpec& spec = {});

}  // namespace tumorseg

#endif
