#ifndef TUMORSEG_AUGMENT_HPP
#define TUMORSEG_AUGMENT_HPP

#include <cstdint>
#include <utility>

#include "tumorseg/types.hpp"

namespace tumorseg {

// Full deterministic description of the on-the-fly augmentation pipeline.
// Rotation and elastic deformation are gated independently; order is
// rotation, then elastic. alpha/sigma are in pixels at the native slice
// resolution.
struct AugmentationConfig {
  double rotation_max_deg = 20.0;
  double p_rotate = 0.5;
  double p_elastic = 0.5;
  double elastic_alpha = 30.0;
  double elastic_sigma = 4.0;
  std::uint64_t master_seed = 0;

  void validate() const;
};

// Per-pixel displacement in pixels; dx shifts columns, dy shifts rows.
struct DisplacementField {
  PlaneF dx;
  PlaneF dy;

  int rows() const { return dx.rows(); }
  int cols() const { return dx.cols(); }
};

// Rotation about the image center. Bilinear sampling for the image,
// nearest for the mask, identical geometric transform for both;
// out-of-bounds source samples fill with 0 / false.
std::pair<PlaneF, BinaryMask> rotate(const PlaneF& image, const BinaryMask& mask,
                                     double angle_deg);

// Smoothed random displacement: i.i.d. uniform [-1, 1] noise per pixel,
// Gaussian-smoothed (kernel truncated at radius ceil(3*sigma), renormalized
// at the edges), then scaled by alpha.
DisplacementField elastic_field(int rows, int cols, double alpha, double sigma,
                                std::uint64_t seed);

// Backward warp: output(p) = input(p + d(p)). Bilinear for the image,
// nearest for the mask, same field for both.
std::pair<PlaneF, BinaryMask> elastic_deform(const PlaneF& image, const BinaryMask& mask,
                                             const DisplacementField& field);

// Everything drawn for one sample. field is populated only when elastic
// fired. A plan can be applied to several planes (e.g. RGB channels) so
// they all undergo the identical transform.
struct AugmentPlan {
  bool rotated = false;
  double angle_deg = 0.0;
  bool elastic = false;
  DisplacementField field;
  std::uint64_t sample_seed = 0;
};

// All randomness derives from derive_sample_seed(master_seed, epoch,
// sample_index); the draw order is fixed: u_rotate, angle, u_elastic,
// field noise.
AugmentPlan make_augment_plan(const AugmentationConfig& config, std::uint64_t epoch,
                              std::uint64_t sample_index, int rows, int cols);

std::pair<PlaneF, BinaryMask> apply_augment(const PlaneF& image, const BinaryMask& mask,
                                            const AugmentPlan& plan);

// The full per-sample pipeline: plan, then rotation, then elastic
// deformation; the both-skipped case returns the inputs unchanged.
std::pair<PlaneF, BinaryMask> augment_sample(const PlaneF& image, const BinaryMask& mask,
                                             const AugmentationConfig& config,
                                             std::uint64_t epoch, std::uint64_t sample_index,
                                             AugmentPlan* plan_out = nullptr);

}  // namespace tumorseg

#endif
