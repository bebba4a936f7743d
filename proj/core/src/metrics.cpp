#include "tumorseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tumorseg/error.hpp"
#include "tumorseg/mask_ops.hpp"
#include "tumorseg/preprocess.hpp"

namespace tumorseg {
namespace {

// Sentinel for "no source pixel yet" in squared-distance space. Kept finite
// so envelope intersections never hit inf-inf.
constexpr double kFar = 1e30;

// 1D lower-envelope distance transform over squared distances
// (Felzenszwalb & Huttenlocher), generalized to sample positions i*s.
// f: input squared distances, d: output, v/z: scratch of size n and n+1.
// Envelope boundaries are true infinities; f values use the finite kFar
// sentinel so the intersection formula never evaluates inf - inf.
void dt1d(const double* f, double* d, int n, double s, int* v, double* z) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  int k = 0;
  v[0] = 0;
  z[0] = -inf;
  z[1] = inf;
  for (int q = 1; q < n; ++q) {
    const double pq = q * s;
    double cut = 0.0;
    for (;;) {
      const double pp = v[k] * s;
      cut = ((f[q] + pq * pq) - (f[v[k]] + pp * pp)) / (2.0 * (pq - pp));
      if (cut <= z[k]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = cut;
    z[k + 1] = inf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    const double pq = q * s;
    while (z[k + 1] < pq) ++k;
    const double dx = pq - v[k] * s;
    d[q] = dx * dx + f[v[k]];
  }
}

}  // namespace

const char* filter_mode_token(FilterMode mode) {
  return mode == FilterMode::AllRois ? "all_rois" : "target_roi";
}

std::optional<FilterMode> filter_mode_from_token(const std::string& token) {
  if (token == "all_rois" || token == "all") return FilterMode::AllRois;
  if (token == "target_roi" || token == "target") return FilterMode::TargetRoi;
  return std::nullopt;
}

double percentile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw ValidationError("percentile: empty input");
  if (q < 0.0 || q > 100.0)
    throw ValidationError("percentile: q must be in [0, 100], got " + std::to_string(q));
  const std::size_t n = sorted.size();
  const double rank = static_cast<double>(n - 1) * q / 100.0;
  const std::size_t lo = static_cast<std::size_t>(rank);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac;
}

double percentile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  return percentile_sorted(values, q);
}

BinaryMask boundary_mask(const BinaryMask& mask) {
  BinaryMask out(mask.rows(), mask.cols(), 0);
  for (int r = 0; r < mask.rows(); ++r) {
    for (int c = 0; c < mask.cols(); ++c) {
      if (!mask(r, c)) continue;
      const bool interior = r > 0 && mask(r - 1, c) && r + 1 < mask.rows() && mask(r + 1, c) &&
                            c > 0 && mask(r, c - 1) && c + 1 < mask.cols() && mask(r, c + 1);
      out(r, c) = interior ? 0 : 1;
    }
  }
  return out;
}

std::vector<std::pair<int, int>> boundary_points(const BinaryMask& mask) {
  const BinaryMask b = boundary_mask(mask);
  std::vector<std::pair<int, int>> pts;
  for (int r = 0; r < b.rows(); ++r)
    for (int c = 0; c < b.cols(); ++c)
      if (b(r, c)) pts.emplace_back(r, c);
  return pts;
}

Grid2<double> distance_transform(const BinaryMask& mask, Spacing2 spacing) {
  if (count_pixels(mask) == 0) throw ValidationError("distance_transform: empty mask");
  const int rows = mask.rows(), cols = mask.cols();

  Grid2<double> sq(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) sq(r, c) = mask(r, c) ? 0.0 : kFar;

  const int n = std::max(rows, cols);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);

  // Pass 1 along columns within each row.
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) f[c] = sq(r, c);
    dt1d(f.data(), d.data(), cols, spacing.col, v.data(), z.data());
    for (int c = 0; c < cols; ++c) sq(r, c) = d[c];
  }
  // Pass 2 along rows within each column.
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) f[r] = sq(r, c);
    dt1d(f.data(), d.data(), rows, spacing.row, v.data(), z.data());
    for (int r = 0; r < rows; ++r) sq(r, c) = d[r];
  }

  Grid2<double> out(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out(r, c) = std::sqrt(sq(r, c));
  return out;
}

double dice(const BinaryMask& gt, const BinaryMask& pred) {
  if (!gt.same_dims(pred)) throw ValidationError("dice: dimension mismatch");
  std::int64_t nx = 0, ny = 0, inter = 0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const bool a = gt.data()[i] != 0, b = pred.data()[i] != 0;
    nx += a;
    ny += b;
    inter += a && b;
  }
  if (nx + ny == 0) return 1.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(nx + ny);
}

std::pair<double, double> hausdorff(const BinaryMask& gt, const BinaryMask& pred,
                                    Spacing2 spacing, double q) {
  if (!gt.same_dims(pred)) throw ValidationError("hausdorff: dimension mismatch");
  if (count_pixels(gt) == 0 || count_pixels(pred) == 0)
    throw ValidationError("hausdorff: undefined for empty masks");

  const BinaryMask bg = boundary_mask(gt);
  const BinaryMask bp = boundary_mask(pred);
  const Grid2<double> dt_to_pred = distance_transform(bp, spacing);
  const Grid2<double> dt_to_gt = distance_transform(bg, spacing);

  std::vector<double> dists;
  for (int r = 0; r < bg.rows(); ++r)
    for (int c = 0; c < bg.cols(); ++c)
      if (bg(r, c)) dists.push_back(dt_to_pred(r, c));
  for (int r = 0; r < bp.rows(); ++r)
    for (int c = 0; c < bp.cols(); ++c)
      if (bp(r, c)) dists.push_back(dt_to_gt(r, c));

  std::sort(dists.begin(), dists.end());
  return {dists.back(), percentile_sorted(dists, q)};
}

MetricResult evaluate_masks(const BinaryMask& gt, const BinaryMask& pred, Spacing2 spacing) {
  MetricResult res;
  res.gt_pixels = count_pixels(gt);
  res.pred_pixels = count_pixels(pred);
  res.dice = dice(gt, pred);
  if (res.gt_pixels > 0 && res.pred_pixels > 0) {
    auto [hd, hd95] = hausdorff(gt, pred, spacing);
    res.hd = hd;
    res.hd95 = hd95;
    res.defined_hd = true;
  }
  return res;
}

bool filter_slice(const LabelVolume& labels, int z, Roi roi, const FilterPolicy& policy) {
  if (z < 0 || z >= labels.nz())
    throw ValidationError("filter_slice: slice index out of range: " + std::to_string(z));
  if (policy.mode == FilterMode::TargetRoi)
    return count_pixels(extract_roi_mask(labels, z, roi)) >= policy.min_pixels;
  for (Roi single : {Roi::Edema, Roi::NonEnhancing, Roi::Enhancing}) {
    if (count_pixels(extract_roi_mask(labels, z, single)) < policy.min_pixels) return false;
  }
  return true;
}

std::vector<SliceRecord> evaluate_case(const LabelVolume& labels, const CaseId& case_id, Roi roi,
                                       const FilterPolicy& policy, Spacing2 spacing,
                                       const PredictionLookup& predictions,
                                       const std::string& model_tag) {
  std::vector<SliceRecord> out;
  for (int z = 0; z < labels.nz(); ++z) {
    if (!filter_slice(labels, z, roi, policy)) continue;
    std::optional<BinaryMask> pred = predictions(z, roi);
    if (!pred)
      throw ValidationError("missing prediction for case " + case_id + " z " + std::to_string(z) +
                            " roi " + roi_token(roi));
    BinaryMask gt = extract_roi_mask(labels, z, roi);
    if (!gt.same_dims(*pred)) gt = resize_nearest(gt, pred->rows(), pred->cols());

    const MetricResult m = evaluate_masks(gt, *pred, spacing);
    SliceRecord rec;
    rec.case_id = case_id;
    rec.z = z;
    rec.roi = roi;
    rec.model_tag = model_tag;
    rec.dice = m.dice;
    rec.hd = m.hd;
    rec.hd95 = m.hd95;
    rec.defined_hd = m.defined_hd;
    rec.gt_pixels = m.gt_pixels;
    rec.pred_pixels = m.pred_pixels;
    rec.rows = pred->rows();
    rec.cols = pred->cols();
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace tumorseg
