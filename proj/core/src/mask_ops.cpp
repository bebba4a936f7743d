#include "tumorseg/mask_ops.hpp"

#include <json.hpp>

#include "tumorseg/error.hpp"

namespace tumorseg {

BinaryMask extract_roi_mask(const LabelVolume& labels, int z, Roi roi) {
  if (z < 0 || z >= labels.nz())
    throw ValidationError("extract_roi_mask: slice index " + std::to_string(z) +
                          " out of range [0, " + std::to_string(labels.nz()) + ")");
  BinaryMask mask(labels.ny(), labels.nx(), 0);
  for (int y = 0; y < labels.ny(); ++y) {
    for (int x = 0; x < labels.nx(); ++x) {
      const std::uint8_t code = labels.at(z, y, x);
      bool hit = false;
      switch (roi) {
        case Roi::Edema: hit = code == kLabelEdema; break;
        case Roi::NonEnhancing: hit = code == kLabelNonEnhancing; break;
        case Roi::Enhancing: hit = code == kLabelEnhancing; break;
        case Roi::WholeTumor: hit = code > 0; break;
      }
      mask(y, x) = hit ? 1 : 0;
    }
  }
  return mask;
}

std::int64_t count_pixels(const BinaryMask& mask) {
  std::int64_t n = 0;
  for (std::uint8_t v : mask) n += v ? 1 : 0;
  return n;
}

BoundingBox bounding_box_prompt(const BinaryMask& mask) {
  BoundingBox box{mask.rows(), mask.cols(), -1, -1};
  for (int r = 0; r < mask.rows(); ++r) {
    for (int c = 0; c < mask.cols(); ++c) {
      if (!mask(r, c)) continue;
      if (r < box.row_min) box.row_min = r;
      if (r > box.row_max) box.row_max = r;
      if (c < box.col_min) box.col_min = c;
      if (c > box.col_max) box.col_max = c;
    }
  }
  if (box.row_max < 0) throw ValidationError("bounding_box_prompt: empty mask");
  return box;
}

BinaryMask mask_or(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_dims(b)) throw ValidationError("mask_or: dimension mismatch");
  BinaryMask out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = (a.data()[i] || b.data()[i]) ? 1 : 0;
  return out;
}

BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_dims(b)) throw ValidationError("mask_and: dimension mismatch");
  BinaryMask out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = (a.data()[i] && b.data()[i]) ? 1 : 0;
  return out;
}

std::string prompts_to_json(const std::vector<PromptRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const PromptRecord& rec : records) {
    arr.push_back({{"case_id", rec.case_id},
                   {"z", rec.z},
                   {"roi", roi_token(rec.roi)},
                   {"box", {rec.box.row_min, rec.box.col_min, rec.box.row_max, rec.box.col_max}}});
  }
  return arr.dump(2) + "\n";
}

std::vector<PromptRecord> prompts_from_json(const std::string& text) {
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("prompt JSON: ") + e.what());
  }
  if (!arr.is_array()) throw ParseError("prompt JSON: top-level value must be an array");
  std::vector<PromptRecord> out;
  for (const auto& item : arr) {
    PromptRecord rec;
    try {
      rec.case_id = item.at("case_id").get<std::string>();
      rec.z = item.at("z").get<int>();
      auto roi = roi_from_token(item.at("roi").get<std::string>());
      if (!roi) throw ParseError("prompt JSON: unknown roi token");
      rec.roi = *roi;
      const auto& b = item.at("box");
      if (!b.is_array() || b.size() != 4) throw ParseError("prompt JSON: box must have 4 entries");
      rec.box = {b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()};
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("prompt JSON record: ") + e.what());
    }
    out.push_back(rec);
  }
  return out;
}

}  // namespace tumorseg
