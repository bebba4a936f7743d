#include "tumorseg/naming.hpp"

#include <cstdio>

namespace tumorseg {
namespace {

std::string z_token(int z) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "z%03d", z);
  return buf;
}

}  // namespace

std::string slice_png_name(const CaseId& case_id, int z) {
  return case_id + "_" + z_token(z) + ".png";
}

std::string mask_png_name(const CaseId& case_id, int z, Roi roi) {
  return case_id + "_" + z_token(z) + "_" + roi_token(roi) + ".png";
}

std::string overlay_png_name(const CaseId& case_id, int z, Roi roi, const std::string& model_tag) {
  return case_id + "_" + z_token(z) + "_" + roi_token(roi) + "_" + model_tag + ".png";
}

}  // namespace tumorseg
