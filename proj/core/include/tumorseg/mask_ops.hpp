#ifndef TUMORSEG_MASK_OPS_HPP
#define TUMORSEG_MASK_OPS_HPP

#include <cstdint>
#include <vector>

#include "tumorseg/types.hpp"

namespace tumorseg {

// Binary mask of one ROI in the axial plane z of a label volume.
// For WholeTumor a pixel is true iff its code is nonzero.
BinaryMask extract_roi_mask(const LabelVolume& labels, int z, Roi roi);

// Number of true pixels.
std::int64_t count_pixels(const BinaryMask& mask);

// Tight axis-aligned box over all true pixels, zero margin, inclusive sides.
// Throws ValidationError on an empty mask (no prompt is defined).
BoundingBox bounding_box_prompt(const BinaryMask& mask);

BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b);

// One exported box-prompt record; coordinates use the inclusive
// (row, col) convention of BoundingBox.
struct PromptRecord {
  CaseId case_id;
  int z = 0;
  Roi roi = Roi::WholeTumor;
  BoundingBox box;

  friend bool operator==(const PromptRecord&, const PromptRecord&) = default;
};

// JSON document: array of {case_id, z, roi, box:[row_min,col_min,row_max,col_max]}.
std::string prompts_to_json(const std::vector<PromptRecord>& records);
std::vector<PromptRecord> prompts_from_json(const std::string& text);

}  // namespace tumorseg

#endif
