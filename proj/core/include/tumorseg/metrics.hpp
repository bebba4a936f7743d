#ifndef TUMORSEG_METRICS_HPP
#define TUMORSEG_METRICS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "tumorseg/types.hpp"

namespace tumorseg {

// Per-slice metric results. hd/hd95 are in pixel units unless a non-unit
// spacing was supplied. defined_hd is false when either mask is empty.
struct MetricResult {
  double dice = 0.0;
  double hd = 0.0;
  double hd95 = 0.0;
  std::int64_t gt_pixels = 0;
  std::int64_t pred_pixels = 0;
  bool defined_hd = false;
};

// Slice admission rule. AllRois is the literal reading of the protocol:
// a slice is kept only when every one of the three single ROIs meets the
// pixel threshold. TargetRoi checks only the ROI under evaluation.
enum class FilterMode : int { AllRois = 0, TargetRoi = 1 };

struct FilterPolicy {
  std::int64_t min_pixels = 250;
  FilterMode mode = FilterMode::AllRois;
};

const char* filter_mode_token(FilterMode mode);  // "all_rois", "target_roi"
std::optional<FilterMode> filter_mode_from_token(const std::string& token);

// Linear-interpolation percentile: sort ascending, rank r = (n-1)*q/100,
// interpolate between the bracketing order statistics. Throws on empty input.
double percentile(std::vector<double> values, double q);
// Same rule over an already ascending-sorted range.
double percentile_sorted(const std::vector<double>& sorted, double q);

// True pixels with at least one false 4-neighbor; out-of-image counts as
// false, so edge-touching true pixels are boundary pixels.
BinaryMask boundary_mask(const BinaryMask& mask);
std::vector<std::pair<int, int>> boundary_points(const BinaryMask& mask);

// Exact Euclidean distance to the nearest true pixel, for every pixel.
// Anisotropic spacing is applied per axis. Throws on an empty mask.
Grid2<double> distance_transform(const BinaryMask& mask, Spacing2 spacing = {});

// Dice Similarity Coefficient over pixel sets, in [0, 1].
// Both masks empty -> 1.0; exactly one empty -> 0.0.
double dice(const BinaryMask& gt, const BinaryMask& pred);

// Hausdorff distance between mask boundaries and its q-th percentile
// (default 95) over the union of both directed distance sets.
// Throws ValidationError when either mask is empty.
std::pair<double, double> hausdorff(const BinaryMask& gt, const BinaryMask& pred,
                                    Spacing2 spacing = {}, double q = 95.0);

MetricResult evaluate_masks(const BinaryMask& gt, const BinaryMask& pred, Spacing2 spacing = {});

// Keep/discard decision for one (slice, roi) under the given policy.
bool filter_slice(const LabelVolume& labels, int z, Roi roi, const FilterPolicy& policy);

// One scored slice. gt_pixels doubles as the tumor-size axis of the
// size-vs-Dice scatter export.
struct SliceRecord {
  CaseId case_id;
  int z = 0;
  Roi roi = Roi::WholeTumor;
  std::string model_tag;
  double dice = 0.0;
  double hd = 0.0;
  double hd95 = 0.0;
  bool defined_hd = false;
  std::int64_t gt_pixels = 0;
  std::int64_t pred_pixels = 0;
  int rows = 0, cols = 0;  // resolution the slice was scored at
};

// Supplies the predicted mask for (z, roi), or nullopt when absent.
using PredictionLookup = std::function<std::optional<BinaryMask>(int z, Roi roi)>;

// Scores every slice of one case for one ROI. Slices failing the filter are
// skipped, not scored. A missing prediction for a kept slice is a
// ValidationError naming (case, z, roi). When prediction dims differ from
// the native label dims, the ground-truth mask is nearest-resized to match.
std::vector<SliceRecord> evaluate_case(const LabelVolume& labels, const CaseId& case_id, Roi roi,
                                       const FilterPolicy& policy, Spacing2 spacing,
                                       const PredictionLookup& predictions,
                                       const std::string& model_tag);

}  // namespace tumorseg

#endif
