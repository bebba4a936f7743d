#include "mini_dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tumorseg/mask_ops.hpp"
#include "tumorseg/naming.hpp"
#include "tumorseg/nifti.hpp"
#include "tumorseg/png_io.hpp"
#include "tumorseg/preprocess.hpp"

namespace mini {

using namespace tumorseg;

std::vector<CaseId> case_ids() {
  std::vector<CaseId> ids;
  for (int i = 0; i < 4; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "case_%03d", i);
    ids.emplace_back(buf);
  }
  return ids;
}

LabelVolume make_labels(int case_index) {
  LabelVolume labels(kNz, kNy, kNx);
  const int cy = 8 + (case_index % 2);
  const int cx = 8 - (case_index / 2);
  for (int z = 0; z < kNz - 1; ++z) {
    const int r3 = (z == 0) ? 0 : 1 + ((z + case_index) % 2);
    const int r2 = r3 + 1;
    const int r1 = r2 + 2;
    for (int y = 0; y < kNy; ++y) {
      for (int x = 0; x < kNx; ++x) {
        const int cheb = std::max(std::abs(y - cy), std::abs(x - cx));
        std::uint8_t code = kLabelBackground;
        if (cheb <= r3)
          code = kLabelEnhancing;
        else if (cheb <= r2)
          code = kLabelNonEnhancing;
        else if (cheb <= r1)
          code = kLabelEdema;
        labels.at(z, y, x) = code;
      }
    }
  }
  return labels;  // last slice stays background
}

MultimodalVolume make_image(int case_index) {
  const LabelVolume labels = make_labels(case_index);
  MultimodalVolume vol(kNz, kNy, kNx);
  for (int m = 0; m < 4; ++m) {
    for (int z = 0; z < kNz; ++z) {
      for (int y = 0; y < kNy; ++y) {
        for (int x = 0; x < kNx; ++x) {
          const int code = labels.at(z, y, x);
          const double v = 10.0 * (m + 1) + 1.0 * z + 0.5 * y + 0.25 * x +
                           code * (5.0 + 3.0 * m);
          vol.at(m, z, y, x) = static_cast<float>(v);
        }
      }
    }
  }
  return vol;
}

void write_dataset(const std::filesystem::path& root) {
  std::filesystem::create_directories(root / "imagesTr");
  std::filesystem::create_directories(root / "labelsTr");
  const auto ids = case_ids();
  for (int i = 0; i < static_cast<int>(ids.size()); ++i) {
    write_nifti(from_multimodal(make_image(i)), root / "imagesTr" / (ids[i] + ".nii.gz"));
    write_nifti(from_labels(make_labels(i)), root / "labelsTr" / (ids[i] + ".nii.gz"));
  }
}

BinaryMask dilate1(const BinaryMask& m) {
  BinaryMask out(m.rows(), m.cols(), 0);
  static const int dr[5] = {0, -1, 1, 0, 0};
  static const int dc[5] = {0, 0, 0, -1, 1};
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      if (!m(r, c)) continue;
      for (int k = 0; k < 5; ++k) {
        const int nr = r + dr[k], nc = c + dc[k];
        if (m.in_bounds(nr, nc)) out(nr, nc) = 1;
      }
    }
  return out;
}

BinaryMask shift(const BinaryMask& m, int dr, int dc) {
  BinaryMask out(m.rows(), m.cols(), 0);
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      const int sr = r - dr, sc = c - dc;
      if (m.in_bounds(sr, sc) && m(sr, sc)) out(r, c) = 1;
    }
  return out;
}

void write_predictions(const std::filesystem::path& dilated_dir,
                       const std::filesystem::path& shifted_dir, int size) {
  std::filesystem::create_directories(dilated_dir);
  std::filesystem::create_directories(shifted_dir);
  const auto ids = case_ids();
  for (int i = 0; i < static_cast<int>(ids.size()); ++i) {
    const LabelVolume labels = make_labels(i);
    for (int z = 0; z < labels.nz(); ++z) {
      for (Roi roi : kAllRois) {
        BinaryMask gt = extract_roi_mask(labels, z, roi);
        if (count_pixels(gt) == 0) continue;
        if (gt.rows() != size || gt.cols() != size) gt = resize_nearest(gt, size, size);
        write_mask_png(dilated_dir / mask_png_name(ids[i], z, roi), dilate1(gt));
        write_mask_png(shifted_dir / mask_png_name(ids[i], z, roi), shift(gt, 2, 1));
      }
    }
  }
}

std::vector<SliceRecord> table_fixture() {
  struct Cell {
    Roi roi;
    double d0, d1;
  };
  static const Cell cells[] = {
      {Roi::Enhancing, 0.70, 0.80},     // mean 0.75
      {Roi::NonEnhancing, 0.50, 0.58},  // mean 0.54
      {Roi::Edema, 0.66, 0.68},         // mean 0.67
      {Roi::WholeTumor, 0.86, 0.90},    // mean 0.88
  };
  std::vector<SliceRecord> records;
  int z = 0;
  for (const Cell& cell : cells) {
    for (double d : {cell.d0, cell.d1}) {
      SliceRecord rec;
      rec.case_id = "case_fixture";
      rec.z = z++;
      rec.roi = cell.roi;
      rec.model_tag = "sam";
      rec.dice = d;
      rec.hd = 6.0;
      rec.hd95 = 3.0;
      rec.defined_hd = true;
      rec.gt_pixels = 300 + 10 * z;
      rec.pred_pixels = 280 + 10 * z;
      rec.rows = 32;
      rec.cols = 32;
      records.push_back(rec);
    }
  }
  return records;
}

}  // namespace mini
