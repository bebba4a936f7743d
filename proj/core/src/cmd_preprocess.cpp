#include <atomic>
#include <iostream>
#include <json.hpp>

#include "cli_internal.hpp"
#include "tumorseg/error.hpp"
#include "tumorseg/mask_ops.hpp"
#include "tumorseg/naming.hpp"
#include "tumorseg/nifti.hpp"
#include "tumorseg/parallel.hpp"
#include "tumorseg/png_io.hpp"
#include "tumorseg/preprocess.hpp"
#include "tumorseg/report.hpp"

namespace tumorseg::cli {
namespace {

template <typename Fn>
auto with_case_context(const CaseId& id, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    throw ValidationError("case " + id + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError("case " + id + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError("case " + id + ": " + e.what());
  }
}

}  // namespace

void run_preprocess(const PreprocessOpts& opts) {
  if (opts.dataset.empty()) throw ValidationError("preprocess: --dataset is required");
  if (opts.out.empty()) throw ValidationError("preprocess: --out is required");
  const auto method = pack_method_from_token(opts.method);
  if (!method)
    throw ValidationError("preprocess: unknown method '" + opts.method +
                          "' (combined|repeated|pca)");
  const auto modality = modality_from_token(opts.modality);
  if (!modality)
    throw ValidationError("preprocess: unknown modality '" + opts.modality +
                          "' (flair|t1w|t1gd|t2w)");
  if (!(opts.clip_low >= 0.0 && opts.clip_low < opts.clip_high && opts.clip_high <= 100.0))
    throw ValidationError("preprocess: clip percentiles need 0 <= low < high <= 100");
  if (opts.size < 0) throw ValidationError("preprocess: --size must be >= 0");

  const DatasetManifest all = scan_dataset(opts.dataset);
  const DatasetManifest manifest = cases_for_subset(all, opts.split, opts.subset);
  const NormalizationParams params{opts.clip_low, opts.clip_high};

  const std::filesystem::path out(opts.out);
  std::filesystem::create_directories(out / "slices");
  std::filesystem::create_directories(out / "masks");
  std::filesystem::create_directories(out / "prompts");

  std::atomic<std::int64_t> total_slices{0};
  parallel_for(
      manifest.cases.size(),
      [&](std::size_t ci) {
        const DatasetCase& item = manifest.cases[ci];
        with_case_context(item.id, [&] {
          const MultimodalVolume volume = to_multimodal(read_nifti(item.image));
          const LabelVolume labels = to_labels(read_nifti(item.label));
          if (labels.nz() != volume.nz() || labels.ny() != volume.ny() ||
              labels.nx() != volume.nx())
            throw ValidationError("label dims do not match image dims");

          const MultimodalVolume normalized = normalize_intensity(volume, params);
          std::vector<PromptRecord> prompts;
          for (int z = 0; z < normalized.nz(); ++z) {
            PackedSlice packed = pack_channels(slice_axial(normalized, z), *method, *modality);
            packed.case_id = item.id;
            packed.z = z;
            if (opts.size > 0 &&
                (packed.rows() != opts.size || packed.cols() != opts.size))
              packed = resize_packed(packed, opts.size, opts.size);
            write_png_rgb(out / "slices" / slice_png_name(item.id, z),
                          RgbImage{packed.channels});

            for (Roi roi : kAllRois) {
              BinaryMask mask = extract_roi_mask(labels, z, roi);
              if (count_pixels(mask) == 0) continue;
              if (opts.size > 0 && (mask.rows() != opts.size || mask.cols() != opts.size))
                mask = resize_nearest(mask, opts.size, opts.size);
              if (count_pixels(mask) == 0) continue;  // downscale can erase tiny regions
              write_mask_png(out / "masks" / mask_png_name(item.id, z, roi), mask);
              prompts.push_back({item.id, z, roi, bounding_box_prompt(mask)});
            }
          }
          write_text_file(prompts_to_json(prompts), out / "prompts" / (item.id + ".json"));
          total_slices += normalized.nz();
        });
      },
      opts.threads);

  nlohmann::json sidecar;
  sidecar["command"] = "preprocess";
  sidecar["dataset"] = opts.dataset;
  sidecar["out"] = opts.out;
  sidecar["method"] = opts.method;
  sidecar["modality"] = opts.modality;
  sidecar["normalization"] = {{"p_low", params.p_low}, {"p_high", params.p_high}};
  sidecar["size"] = opts.size;
  sidecar["split"] = opts.split;
  sidecar["subset"] = opts.subset;
  nlohmann::json ids = nlohmann::json::array();
  for (const DatasetCase& c : manifest.cases) ids.push_back(c.id);
  sidecar["cases"] = std::move(ids);
  write_text_file(sidecar.dump(2) + "\n", out / "sidecar.json");

  std::cout << "preprocessed " << manifest.cases.size() << " cases, " << total_slices.load()
            << " slices -> " << opts.out << "\n";
}

}  // namespace tumorseg::cli
