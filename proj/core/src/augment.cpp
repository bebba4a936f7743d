#include "tumorseg/augment.hpp"

#include <cmath>
#include <tuple>
#include <vector>

#include "tumorseg/error.hpp"
#include "tumorseg/rng.hpp"

namespace tumorseg {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Bilinear sample with zero fill outside the image.
double sample_bilinear(const PlaneF& image, double r, double c) {
  const int r0 = static_cast<int>(std::floor(r));
  const int c0 = static_cast<int>(std::floor(c));
  const double fr = r - r0;
  const double fc = c - c0;
  auto px = [&](int rr, int cc) -> double {
    return image.in_bounds(rr, cc) ? image(rr, cc) : 0.0;
  };
  const double top = px(r0, c0) + (px(r0, c0 + 1) - px(r0, c0)) * fc;
  const double bot = px(r0 + 1, c0) + (px(r0 + 1, c0 + 1) - px(r0 + 1, c0)) * fc;
  return top + (bot - top) * fr;
}

bool sample_nearest(const BinaryMask& mask, double r, double c) {
  const int rr = static_cast<int>(std::llround(r));
  const int cc = static_cast<int>(std::llround(c));
  return mask.in_bounds(rr, cc) && mask(rr, cc) != 0;
}

// Separable Gaussian smoothing with a truncated kernel renormalized at the
// edges (unit gain everywhere, so a constant field stays constant).
void gaussian_smooth(PlaneF& plane, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  for (int k = -radius; k <= radius; ++k)
    kernel[k + radius] = std::exp(-(static_cast<double>(k) * k) / (2.0 * sigma * sigma));

  const int rows = plane.rows(), cols = plane.cols();
  PlaneF tmp(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double acc = 0.0, wsum = 0.0;
      const int k0 = std::max(-radius, -c), k1 = std::min(radius, cols - 1 - c);
      for (int k = k0; k <= k1; ++k) {
        acc += kernel[k + radius] * plane(r, c + k);
        wsum += kernel[k + radius];
      }
      tmp(r, c) = static_cast<float>(acc / wsum);
    }
  }
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      double acc = 0.0, wsum = 0.0;
      const int k0 = std::max(-radius, -r), k1 = std::min(radius, rows - 1 - r);
      for (int k = k0; k <= k1; ++k) {
        acc += kernel[k + radius] * tmp(r + k, c);
        wsum += kernel[k + radius];
      }
      plane(r, c) = static_cast<float>(acc / wsum);
    }
  }
}

}  // namespace

void AugmentationConfig::validate() const {
  if (p_rotate < 0.0 || p_rotate > 1.0 || p_elastic < 0.0 || p_elastic > 1.0)
    throw ValidationError("AugmentationConfig: probabilities must lie in [0, 1]");
  if (rotation_max_deg < 0.0)
    throw ValidationError("AugmentationConfig: rotation_max_deg must be >= 0");
  if (elastic_sigma <= 0.0) throw ValidationError("AugmentationConfig: elastic_sigma must be > 0");
  if (elastic_alpha < 0.0) throw ValidationError("AugmentationConfig: elastic_alpha must be >= 0");
}

std::pair<PlaneF, BinaryMask> rotate(const PlaneF& image, const BinaryMask& mask,
                                     double angle_deg) {
  if (std::fabs(angle_deg) > 180.0)
    throw ValidationError("rotate: |angle| must be <= 180 degrees");
  if (image.rows() != mask.rows() || image.cols() != mask.cols())
    throw ValidationError("rotate: image/mask dimension mismatch");
  if (angle_deg == 0.0) return {image, mask};

  const int rows = image.rows(), cols = image.cols();
  const double cr = (rows - 1) / 2.0, cc = (cols - 1) / 2.0;
  const double rad = angle_deg * kPi / 180.0;
  const double cos_a = std::cos(rad), sin_a = std::sin(rad);

  PlaneF out_img(rows, cols);
  BinaryMask out_mask(rows, cols, 0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      // Inverse transform of the output pixel back into source coordinates.
      const double dr = r - cr, dc = c - cc;
      const double src_r = cos_a * dr - sin_a * dc + cr;
      const double src_c = sin_a * dr + cos_a * dc + cc;
      out_img(r, c) = static_cast<float>(sample_bilinear(image, src_r, src_c));
      out_mask(r, c) = sample_nearest(mask, src_r, src_c) ? 1 : 0;
    }
  }
  return {std::move(out_img), std::move(out_mask)};
}

DisplacementField elastic_field(int rows, int cols, double alpha, double sigma,
                                std::uint64_t seed) {
  if (sigma <= 0.0) throw ValidationError("elastic_field: sigma must be > 0");
  if (rows < 1 || cols < 1) throw ValidationError("elastic_field: empty field");

  DisplacementField field{PlaneF(rows, cols), PlaneF(rows, cols)};
  DetRng rng(seed);
  for (float& v : field.dx) v = static_cast<float>(rng.uniform_pm1());
  for (float& v : field.dy) v = static_cast<float>(rng.uniform_pm1());
  gaussian_smooth(field.dx, sigma);
  gaussian_smooth(field.dy, sigma);
  for (float& v : field.dx) v = static_cast<float>(v * alpha);
  for (float& v : field.dy) v = static_cast<float>(v * alpha);
  return field;
}

std::pair<PlaneF, BinaryMask> elastic_deform(const PlaneF& image, const BinaryMask& mask,
                                             const DisplacementField& field) {
  if (image.rows() != mask.rows() || image.cols() != mask.cols() ||
      !field.dx.same_dims(image) || !field.dy.same_dims(image))
    throw ValidationError("elastic_deform: dimension mismatch");

  const int rows = image.rows(), cols = image.cols();
  PlaneF out_img(rows, cols);
  BinaryMask out_mask(rows, cols, 0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double src_r = r + field.dy(r, c);
      const double src_c = c + field.dx(r, c);
      out_img(r, c) = static_cast<float>(sample_bilinear(image, src_r, src_c));
      out_mask(r, c) = sample_nearest(mask, src_r, src_c) ? 1 : 0;
    }
  }
  return {std::move(out_img), std::move(out_mask)};
}

AugmentPlan make_augment_plan(const AugmentationConfig& config, std::uint64_t epoch,
                              std::uint64_t sample_index, int rows, int cols) {
  config.validate();
  AugmentPlan plan;
  plan.sample_seed = derive_sample_seed(config.master_seed, epoch, sample_index);
  DetRng rng(plan.sample_seed);
  const double u_rotate = rng.uniform01();
  plan.angle_deg = rng.uniform(-config.rotation_max_deg, config.rotation_max_deg);
  const double u_elastic = rng.uniform01();
  plan.rotated = u_rotate < config.p_rotate;
  plan.elastic = u_elastic < config.p_elastic;
  if (plan.elastic) {
    const std::uint64_t field_seed = rng.next_u64();
    plan.field = elastic_field(rows, cols, config.elastic_alpha, config.elastic_sigma, field_seed);
  }
  return plan;
}

std::pair<PlaneF, BinaryMask> apply_augment(const PlaneF& image, const BinaryMask& mask,
                                            const AugmentPlan& plan) {
  if (!plan.rotated && !plan.elastic) return {image, mask};
  PlaneF img = image;
  BinaryMask msk = mask;
  if (plan.rotated) std::tie(img, msk) = rotate(img, msk, plan.angle_deg);
  if (plan.elastic) std::tie(img, msk) = elastic_deform(img, msk, plan.field);
  return {std::move(img), std::move(msk)};
}

std::pair<PlaneF, BinaryMask> augment_sample(const PlaneF& image, const BinaryMask& mask,
                                             const AugmentationConfig& config,
                                             std::uint64_t epoch, std::uint64_t sample_index,
                                             AugmentPlan* plan_out) {
  AugmentPlan plan = make_augment_plan(config, epoch, sample_index, image.rows(), image.cols());
  auto result = apply_augment(image, mask, plan);
  if (plan_out) *plan_out = std::move(plan);
  return result;
}

}  // namespace tumorseg
