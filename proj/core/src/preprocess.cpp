#include "tumorseg/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tumorseg/error.hpp"
#include "tumorseg/metrics.hpp"

namespace tumorseg {

std::uint8_t quantize_u8(double value) {
  const double r = std::round(value);  // halves away from zero
  if (r <= 0.0) return 0;
  if (r >= 255.0) return 255;
  return static_cast<std::uint8_t>(r);
}

MultimodalVolume normalize_intensity(const MultimodalVolume& volume,
                                     const NormalizationParams& params) {
  if (params.p_low < 0.0 || params.p_high > 100.0 || params.p_low >= params.p_high)
    throw ValidationError("normalize_intensity: need 0 <= p_low < p_high <= 100");

  MultimodalVolume out(volume.nz(), volume.ny(), volume.nx(), volume.modalities(),
                       volume.spacing());
  const std::size_t plane = volume.data().size() / 4;
  std::vector<double> values(plane);

  for (int m = 0; m < 4; ++m) {
    const float* src = volume.data().data() + m * plane;
    float* dst = out.data().data() + m * plane;

    for (std::size_t i = 0; i < plane; ++i) {
      if (!std::isfinite(src[i]))
        throw ValidationError("normalize_intensity: non-finite intensity in modality " +
                              std::string(modality_token(volume.modalities()[m])));
      values[i] = src[i];
    }
    std::sort(values.begin(), values.end());
    const double lo = percentile_sorted(values, params.p_low);
    const double hi = percentile_sorted(values, params.p_high);

    if (lo == hi) {
      std::fill(dst, dst + plane, 0.0f);
      continue;
    }
    const double gain = 255.0 / (hi - lo);
    for (std::size_t i = 0; i < plane; ++i) {
      const double clipped = std::clamp(static_cast<double>(src[i]), lo, hi);
      dst[i] = static_cast<float>(std::clamp((clipped - lo) * gain, 0.0, 255.0));
    }
  }
  return out;
}

ModalitySlice slice_axial(const MultimodalVolume& volume, int z) {
  if (z < 0 || z >= volume.nz())
    throw ValidationError("slice_axial: index " + std::to_string(z) + " out of range [0, " +
                          std::to_string(volume.nz()) + ")");
  ModalitySlice slice;
  slice.order = volume.modalities();
  for (int m = 0; m < 4; ++m) {
    slice.planes[m] = PlaneF(volume.ny(), volume.nx());
    for (int y = 0; y < volume.ny(); ++y)
      for (int x = 0; x < volume.nx(); ++x) slice.planes[m](y, x) = volume.at(m, z, y, x);
  }
  return slice;
}

PcaFusion pca_fuse(const ModalitySlice& slice) {
  const int rows = slice.rows(), cols = slice.cols();
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  if (n < 4) throw ValidationError("pca_fuse: need at least 4 pixels");

  PcaFusion fusion;
  for (int m = 0; m < 4; ++m) {
    if (!slice.planes[m].same_dims(slice.planes[0]))
      throw ValidationError("pca_fuse: modality planes disagree in dims");
    double sum = 0.0;
    for (const float v : slice.planes[m]) {
      if (!std::isfinite(v)) throw ValidationError("pca_fuse: non-finite input");
      sum += v;
    }
    fusion.mean[m] = sum / static_cast<double>(n);
  }

  // Cross-modality covariance of the centered per-pixel 4-vectors.
  Mat4 cov{};
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      std::array<double, 4> d;
      for (int m = 0; m < 4; ++m) d[m] = slice.planes[m](r, c) - fusion.mean[m];
      for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) cov[i][j] += d[i] * d[j];
    }
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      cov[i][j] /= static_cast<double>(n);
      cov[j][i] = cov[i][j];
    }

  fusion.eigen = symmetric_eigen_4(cov);

  for (int k = 0; k < 3; ++k) fusion.components[k] = PlaneF(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      std::array<double, 4> d;
      for (int m = 0; m < 4; ++m) d[m] = slice.planes[m](r, c) - fusion.mean[m];
      for (int k = 0; k < 3; ++k) {
        const auto& e = fusion.eigen.eigenvectors[k];
        fusion.components[k](r, c) =
            static_cast<float>(d[0] * e[0] + d[1] * e[1] + d[2] * e[2] + d[3] * e[3]);
      }
    }
  }
  return fusion;
}

namespace {

PlaneU8 quantize_plane(const PlaneF& plane) {
  PlaneU8 out(plane.rows(), plane.cols());
  for (std::size_t i = 0; i < plane.size(); ++i) out.data()[i] = quantize_u8(plane.data()[i]);
  return out;
}

// Min-max rescale to [0, 255]; a constant component becomes all zeros.
PlaneU8 rescale_component(const PlaneF& plane) {
  float lo = plane.data()[0], hi = plane.data()[0];
  for (const float v : plane) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  PlaneU8 out(plane.rows(), plane.cols(), 0);
  if (lo == hi) return out;
  const double gain = 255.0 / (static_cast<double>(hi) - lo);
  for (std::size_t i = 0; i < plane.size(); ++i)
    out.data()[i] = quantize_u8((plane.data()[i] - static_cast<double>(lo)) * gain);
  return out;
}

}  // namespace

PackedSlice pack_channels(const ModalitySlice& slice, PackMethod method,
                          Modality repeated_modality) {
  PackedSlice packed;
  packed.method = method;
  packed.repeated_modality = repeated_modality;
  switch (method) {
    case PackMethod::Combined: {
      packed.channels[0] = quantize_plane(slice.planes[slice.index_of(Modality::Flair)]);
      packed.channels[1] = quantize_plane(slice.planes[slice.index_of(Modality::T1Gd)]);
      packed.channels[2] = quantize_plane(slice.planes[slice.index_of(Modality::T2w)]);
      break;
    }
    case PackMethod::Repeated: {
      const PlaneU8 plane = quantize_plane(slice.planes[slice.index_of(repeated_modality)]);
      packed.channels = {plane, plane, plane};
      break;
    }
    case PackMethod::Pca2d: {
      const PcaFusion fusion = pca_fuse(slice);
      for (int k = 0; k < 3; ++k) packed.channels[k] = rescale_component(fusion.components[k]);
      break;
    }
  }
  return packed;
}

namespace {

double corner_aligned_scale(int in, int out) {
  return out > 1 ? static_cast<double>(in - 1) / (out - 1) : 0.0;
}

void check_target(int out_rows, int out_cols) {
  if (out_rows < 1 || out_cols < 1) throw ValidationError("resize: target must be >= 1x1");
}

}  // namespace

PlaneF resize_bilinear(const PlaneF& image, int out_rows, int out_cols) {
  check_target(out_rows, out_cols);
  const int in_rows = image.rows(), in_cols = image.cols();
  const double sr = corner_aligned_scale(in_rows, out_rows);
  const double sc = corner_aligned_scale(in_cols, out_cols);
  PlaneF out(out_rows, out_cols);
  for (int r = 0; r < out_rows; ++r) {
    const double src_r = r * sr;
    const int r0 = static_cast<int>(src_r);
    const int r1 = std::min(r0 + 1, in_rows - 1);
    const double fr = src_r - r0;
    for (int c = 0; c < out_cols; ++c) {
      const double src_c = c * sc;
      const int c0 = static_cast<int>(src_c);
      const int c1 = std::min(c0 + 1, in_cols - 1);
      const double fc = src_c - c0;
      const double top = image(r0, c0) + (image(r0, c1) - image(r0, c0)) * fc;
      const double bot = image(r1, c0) + (image(r1, c1) - image(r1, c0)) * fc;
      out(r, c) = static_cast<float>(top + (bot - top) * fr);
    }
  }
  return out;
}

PlaneU8 resize_bilinear_u8(const PlaneU8& image, int out_rows, int out_cols) {
  check_target(out_rows, out_cols);
  const int in_rows = image.rows(), in_cols = image.cols();
  const double sr = corner_aligned_scale(in_rows, out_rows);
  const double sc = corner_aligned_scale(in_cols, out_cols);
  PlaneU8 out(out_rows, out_cols);
  for (int r = 0; r < out_rows; ++r) {
    const double src_r = r * sr;
    const int r0 = static_cast<int>(src_r);
    const int r1 = std::min(r0 + 1, in_rows - 1);
    const double fr = src_r - r0;
    for (int c = 0; c < out_cols; ++c) {
      const double src_c = c * sc;
      const int c0 = static_cast<int>(src_c);
      const int c1 = std::min(c0 + 1, in_cols - 1);
      const double fc = src_c - c0;
      const double top = image(r0, c0) + (image(r0, c1) - image(r0, c0)) * fc;
      const double bot = image(r1, c0) + (image(r1, c1) - image(r1, c0)) * fc;
      out(r, c) = quantize_u8(top + (bot - top) * fr);
    }
  }
  return out;
}

PlaneU8 resize_nearest_u8(const PlaneU8& image, int out_rows, int out_cols) {
  check_target(out_rows, out_cols);
  const int in_rows = image.rows(), in_cols = image.cols();
  const double sr = corner_aligned_scale(in_rows, out_rows);
  const double sc = corner_aligned_scale(in_cols, out_cols);
  PlaneU8 out(out_rows, out_cols);
  for (int r = 0; r < out_rows; ++r) {
    const int src_r = std::min(static_cast<int>(std::llround(r * sr)), in_rows - 1);
    for (int c = 0; c < out_cols; ++c) {
      const int src_c = std::min(static_cast<int>(std::llround(c * sc)), in_cols - 1);
      out(r, c) = image(src_r, src_c);
    }
  }
  return out;
}

BinaryMask resize_nearest(const BinaryMask& mask, int out_rows, int out_cols) {
  return resize_nearest_u8(mask, out_rows, out_cols);
}

PackedSlice resize_packed(const PackedSlice& slice, int out_rows, int out_cols) {
  PackedSlice out = slice;
  for (int k = 0; k < 3; ++k)
    out.channels[k] = resize_bilinear_u8(slice.channels[k], out_rows, out_cols);
  return out;
}

}  // namespace tumorseg
