#include <iostream>
#include <sstream>

#include "cli_internal.hpp"
#include "tumorseg/error.hpp"
#include "tumorseg/mask_ops.hpp"
#include "tumorseg/metrics.hpp"
#include "tumorseg/naming.hpp"
#include "tumorseg/nifti.hpp"
#include "tumorseg/parallel.hpp"
#include "tumorseg/png_io.hpp"
#include "tumorseg/preprocess.hpp"
#include "tumorseg/render.hpp"

namespace tumorseg::cli {

void run_render(const RenderOpts& opts) {
  if (opts.dataset.empty()) throw ValidationError("render: --dataset is required");
  if (opts.split.empty()) throw ValidationError("render: --split is required");
  if (opts.slices.empty()) throw ValidationError("render: --slices is required");
  if (opts.out.empty()) throw ValidationError("render: --out is required");
  const auto mode = filter_mode_from_token(opts.filter);
  if (!mode)
    throw ValidationError("render: unknown filter '" + opts.filter + "' (all_rois|target_roi)");

  std::vector<Roi> rois(kAllRois.begin(), kAllRois.end());
  if (!opts.roi.empty()) {
    const auto one = roi_from_token(opts.roi);
    if (!one) throw ValidationError("render: unknown roi '" + opts.roi + "'");
    rois = {*one};
  }

  OverlaySpec spec;
  spec.background_darken = opts.darken;
  spec.region_alpha = opts.alpha;
  spec.validate();

  const std::vector<PredSource> sources = parse_pred_specs(opts.preds);
  const DatasetManifest manifest =
      cases_for_subset(scan_dataset(opts.dataset), opts.split, opts.subset);
  const FilterPolicy policy{opts.min_pixels, *mode};
  const std::filesystem::path slices(opts.slices);
  const std::filesystem::path out(opts.out);
  std::filesystem::create_directories(out);

  struct CaseOutcome {
    std::vector<std::string> missing;
    std::size_t rendered = 0;
  };
  std::vector<CaseOutcome> outcomes(manifest.cases.size());

  parallel_for(
      manifest.cases.size(),
      [&](std::size_t ci) {
        const DatasetCase& item = manifest.cases[ci];
        CaseOutcome& slot = outcomes[ci];
        LabelVolume labels;
        try {
          labels = to_labels(read_nifti(item.label));
        } catch (const ParseError& e) {
          throw ParseError("case " + item.id + ": " + e.what());
        }

        std::vector<PredictionReader> readers;
        readers.reserve(sources.size());
        for (const PredSource& src : sources) readers.emplace_back(src.dir);

        for (int z = 0; z < labels.nz(); ++z)
          for (Roi roi : rois) {
            if (!filter_slice(labels, z, roi, policy)) continue;
            for (std::size_t m = 0; m < sources.size(); ++m)
              if (!readers[m].available(item.id, z, roi))
                slot.missing.push_back("model '" + sources[m].tag + "': " + item.id + " z" +
                                       std::to_string(z) + " " + roi_token(roi));
          }
        if (!slot.missing.empty()) return;

        for (int z = 0; z < labels.nz(); ++z) {
          bool slice_kept = false;
          for (Roi roi : rois)
            if (filter_slice(labels, z, roi, policy)) slice_kept = true;
          if (!slice_kept) continue;

          const std::filesystem::path bg_path = slices / slice_png_name(item.id, z);
          if (!std::filesystem::exists(bg_path))
            throw IoError("render: background slice missing: " + bg_path.string());
          const RgbImage background = read_png_rgb(bg_path);

          for (Roi roi : rois) {
            if (!filter_slice(labels, z, roi, policy)) continue;
            BinaryMask gt = extract_roi_mask(labels, z, roi);
            if (gt.rows() != background.rows() || gt.cols() != background.cols())
              gt = resize_nearest(gt, background.rows(), background.cols());
            for (std::size_t m = 0; m < sources.size(); ++m) {
              auto pred = readers[m].read(item.id, z, roi);
              if (!pred) continue;  // the availability pass above already vetoed this case
              if (pred->rows() != background.rows() || pred->cols() != background.cols())
                *pred = resize_nearest(*pred, background.rows(), background.cols());
              const RgbImage overlay = render_overlay(background, gt, *pred, spec);
              write_png_rgb(out / overlay_png_name(item.id, z, roi, sources[m].tag), overlay);
              ++slot.rendered;
            }
          }
        }
      },
      opts.threads);

  std::vector<std::string> missing;
  std::size_t rendered = 0;
  for (const CaseOutcome& slot : outcomes) {
    missing.insert(missing.end(), slot.missing.begin(), slot.missing.end());
    rendered += slot.rendered;
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "render: " << missing.size() << " predictions missing:";
    for (const std::string& m : missing) msg << "\n  " << m;
    throw ValidationError(msg.str());
  }

  std::cout << "rendered " << rendered << " overlays -> " << opts.out << "\n";
}

}  // namespace tumorseg::cli
