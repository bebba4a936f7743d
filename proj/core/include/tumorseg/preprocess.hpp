#ifndef TUMORSEG_PREPROCESS_HPP
#define TUMORSEG_PREPROCESS_HPP

#include <array>

#include "tumorseg/sym_eigen.hpp"
#include "tumorseg/types.hpp"

namespace tumorseg {

// Percentile clipping bounds and the [0, 255] target range.
struct NormalizationParams {
  double p_low = 0.5;
  double p_high = 99.5;
};

// Per modality, over the whole 3D volume: clip at the [p_low, p_high]
// percentiles and map affinely so lo -> 0, hi -> 255. A degenerate modality
// (lo == hi) maps to all zeros.
MultimodalVolume normalize_intensity(const MultimodalVolume& volume,
                                     const NormalizationParams& params);

// The (Y, X, 4) axial plane at index z, modality order preserved.
ModalitySlice slice_axial(const MultimodalVolume& volume, int z);

// Pixelwise early fusion across the 4 modality channels: mean-center the
// per-pixel 4-vectors, eigendecompose their 4x4 covariance, and project
// every pixel onto the top-3 eigenvectors. Output planes are ordered by
// descending eigenvalue and are real-valued (no rescaling here).
struct PcaFusion {
  std::array<PlaneF, 3> components;
  EigenResult4 eigen;
  std::array<double, 4> mean{};
};
PcaFusion pca_fuse(const ModalitySlice& slice);

// Channel packing, 4 modalities -> 3 channels of 8-bit values:
//   Combined    (FLAIR, T1-Gd, T2w), T1w dropped
//   Repeated(m) (m, m, m)
//   Pca2d       pca_fuse output, each component min-max rescaled to [0, 255]
PackedSlice pack_channels(const ModalitySlice& slice, PackMethod method,
                          Modality repeated_modality = Modality::T1Gd);

// Quantization rule used throughout: round half away from zero, clamp to [0, 255].
std::uint8_t quantize_u8(double value);

enum class ResizeMode : int { Bilinear = 0, Nearest = 1 };

// Corner-aligned resampling. Bilinear for intensity images; nearest for
// masks so no intermediate label values are invented.
PlaneF resize_bilinear(const PlaneF& image, int out_rows, int out_cols);
PlaneU8 resize_bilinear_u8(const PlaneU8& image, int out_rows, int out_cols);
BinaryMask resize_nearest(const BinaryMask& mask, int out_rows, int out_cols);
PlaneU8 resize_nearest_u8(const PlaneU8& image, int out_rows, int out_cols);

PackedSlice resize_packed(const PackedSlice& slice, int out_rows, int out_cols);

}  // namespace tumorseg

#endif
