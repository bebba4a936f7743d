#ifndef TUMORSEG_CLI_INTERNAL_HPP
#define TUMORSEG_CLI_INTERNAL_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tumorseg/dataset.hpp"
#include "tumorseg/grid.hpp"
#include "tumorseg/types.hpp"

namespace tumorseg::cli {

struct PreprocessOpts {
  std::string dataset;
  std::string out;
  std::string method = "combined";
  std::string modality = "t1gd";  // used by method=repeated
  double clip_low = 0.5;
  double clip_high = 99.5;
  int size = 1024;  // 0 keeps the native resolution
  std::string split;
  std::string subset = "all";
  unsigned threads = 0;
};
void run_preprocess(const PreprocessOpts& opts);

struct SplitOpts {
  std::string dataset;
  std::string out;
  double train_frac = 0.8;
  std::uint64_t seed = 0;
};
void run_split(const SplitOpts& opts);

struct AugmentPreviewOpts {
  std::string image;
  std::string mask;  // optional
  std::string out;
  int count = 4;
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;
  double rotation_max = 20.0;
  double p_rotate = 0.5;
  double p_elastic = 0.5;
  double alpha = 30.0;
  double sigma = 4.0;
};
void run_augment_preview(const AugmentPreviewOpts& opts);

struct EvaluateOpts {
  std::string dataset;
  std::string split;
  std::string out;
  std::vector<std::string> preds;  // TAG=DIR, repeatable
  std::string subset = "test";
  std::int64_t min_pixels = 250;
  std::string filter = "all_rois";
  double spacing_row = 1.0;
  double spacing_col = 1.0;
  unsigned threads = 0;
};
void run_evaluate(const EvaluateOpts& opts);

struct CompareOpts {
  std::string report_a;
  std::string report_b;
  std::string out;
  std::string model_a;  // optional when the report carries exactly one model
  std::string model_b;
};
void run_compare(const CompareOpts& opts);

struct RenderOpts {
  std::string dataset;
  std::string split;
  std::string slices;
  std::string out;
  std::vector<std::string> preds;
  std::string subset = "test";
  std::int64_t min_pixels = 250;
  std::string filter = "all_rois";
  std::string roi;  // optional: restrict to one ROI token
  double darken = 0.5;
  double alpha = 0.5;
  unsigned threads = 0;
};
void run_render(const RenderOpts& opts);

// ---- shared helpers (cli_common.cpp) ----

struct PredSource {
  std::string tag;
  std::filesystem::path dir;
};

// "TAG=DIR" -> PredSource; empty pieces and duplicate tags are errors.
std::vector<PredSource> parse_pred_specs(const std::vector<std::string>& specs);

// Cases selected by the split subset: "train", "test", or "all".
DatasetManifest cases_for_subset(const DatasetManifest& manifest, const std::string& split_path,
                                 const std::string& subset);

// Reads one prediction mask for (case, z, roi) from a prediction directory:
// PNG `{case}_z{z:03}_{roi}.png` first (>=128 reads true), else slice z of a
// per-ROI uint8 NIfTI `{case}_{roi}.nii[.gz]` (nonzero reads true).
class PredictionReader {
 public:
  explicit PredictionReader(std::filesystem::path dir) : dir_(std::move(dir)) {}

  bool available(const CaseId& case_id, int z, Roi roi) const;
  std::optional<BinaryMask> read(const CaseId& case_id, int z, Roi roi) const;

 private:
  std::filesystem::path png_path(const CaseId& case_id, int z, Roi roi) const;
  std::filesystem::path nifti_path(const CaseId& case_id, Roi roi) const;

  std::filesystem::path dir_;
};

}  // namespace tumorseg::cli

#endif
