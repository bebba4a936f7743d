#include <cstdio>
#include <iostream>
#include <json.hpp>

#include "cli_internal.hpp"
#include "tumorseg/augment.hpp"
#include "tumorseg/error.hpp"
#include "tumorseg/png_io.hpp"
#include "tumorseg/preprocess.hpp"
#include "tumorseg/report.hpp"

namespace tumorseg::cli {
namespace {

std::string sample_name(int k, const char* suffix) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "sample_%03d_%s.png", k, suffix);
  return buf;
}

PlaneF to_float(const PlaneU8& p) {
  PlaneF out(p.rows(), p.cols());
  for (int r = 0; r < p.rows(); ++r)
    for (int c = 0; c < p.cols(); ++c) out(r, c) = p(r, c);
  return out;
}

PlaneU8 to_u8(const PlaneF& p) {
  PlaneU8 out(p.rows(), p.cols());
  for (int r = 0; r < p.rows(); ++r)
    for (int c = 0; c < p.cols(); ++c) out(r, c) = quantize_u8(p(r, c));
  return out;
}

}  // namespace

void run_augment_preview(const AugmentPreviewOpts& opts) {
  if (opts.image.empty()) throw ValidationError("augment-preview: --image is required");
  if (opts.out.empty()) throw ValidationError("augment-preview: --out is required");
  if (opts.count < 1) throw ValidationError("augment-preview: --count must be >= 1");

  AugmentationConfig config;
  config.rotation_max_deg = opts.rotation_max;
  config.p_rotate = opts.p_rotate;
  config.p_elastic = opts.p_elastic;
  config.elastic_alpha = opts.alpha;
  config.elastic_sigma = opts.sigma;
  config.master_seed = opts.seed;
  config.validate();

  const RgbImage image = read_png_rgb(opts.image);
  BinaryMask mask(image.rows(), image.cols());  // all false when no mask given
  const bool have_mask = !opts.mask.empty();
  if (have_mask) {
    mask = read_mask_png(opts.mask);
    if (mask.rows() != image.rows() || mask.cols() != image.cols())
      throw ValidationError("augment-preview: mask dims do not match image dims");
  }

  const std::filesystem::path out(opts.out);
  std::filesystem::create_directories(out);

  nlohmann::json samples = nlohmann::json::array();
  for (int k = 0; k < opts.count; ++k) {
    const AugmentPlan plan = make_augment_plan(config, opts.epoch,
                                               static_cast<std::uint64_t>(k), image.rows(),
                                               image.cols());
    RgbImage after;
    BinaryMask mask_after;
    for (int ch = 0; ch < 3; ++ch) {
      auto [plane, m] = apply_augment(to_float(image.channels[ch]), mask, plan);
      after.channels[ch] = to_u8(plane);
      if (ch == 0) mask_after = std::move(m);
    }

    write_png_rgb(out / sample_name(k, "before"), image);
    write_png_rgb(out / sample_name(k, "after"), after);
    if (have_mask) {
      write_mask_png(out / sample_name(k, "mask_before"), mask);
      write_mask_png(out / sample_name(k, "mask_after"), mask_after);
    }

    nlohmann::json entry;
    entry["index"] = k;
    entry["sample_seed"] = plan.sample_seed;
    entry["rotated"] = plan.rotated;
    entry["angle_deg"] = plan.angle_deg;
    entry["elastic"] = plan.elastic;
    samples.push_back(std::move(entry));
  }

  nlohmann::json doc;
  doc["command"] = "augment-preview";
  doc["image"] = opts.image;
  doc["mask"] = opts.mask;
  doc["epoch"] = opts.epoch;
  doc["config"] = {{"rotation_max_deg", config.rotation_max_deg},
                   {"p_rotate", config.p_rotate},
                   {"p_elastic", config.p_elastic},
                   {"elastic_alpha", config.elastic_alpha},
                   {"elastic_sigma", config.elastic_sigma},
                   {"master_seed", config.master_seed}};
  doc["samples"] = std::move(samples);
  write_text_file(doc.dump(2) + "\n", out / "params.json");

  std::cout << "wrote " << opts.count << " augmentation previews -> " << opts.out << "\n";
}

}  // namespace tumorseg::cli
