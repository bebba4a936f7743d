#include <algorithm>
#include <set>

#include "cli_internal.hpp"
#include "tumorseg/error.hpp"
#include "tumorseg/naming.hpp"
#include "tumorseg/nifti.hpp"
#include "tumorseg/png_io.hpp"

namespace tumorseg::cli {

std::vector<PredSource> parse_pred_specs(const std::vector<std::string>& specs) {
  if (specs.empty()) throw ValidationError("at least one --pred TAG=DIR is required");
  std::vector<PredSource> sources;
  std::set<std::string> tags;
  for (const std::string& spec : specs) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
      throw ValidationError("--pred expects TAG=DIR, got '" + spec + "'");
    PredSource src{spec.substr(0, eq), spec.substr(eq + 1)};
    if (!tags.insert(src.tag).second)
      throw ValidationError("duplicate prediction tag '" + src.tag + "'");
    if (!std::filesystem::is_directory(src.dir))
      throw IoError("prediction directory missing: " + src.dir.string());
    sources.push_back(std::move(src));
  }
  return sources;
}

DatasetManifest cases_for_subset(const DatasetManifest& manifest, const std::string& split_path,
                                 const std::string& subset) {
  if (subset != "train" && subset != "test" && subset != "all")
    throw ValidationError("--subset must be train, test, or all, got '" + subset + "'");
  if (split_path.empty()) {
    if (subset != "all") throw ValidationError("--subset " + subset + " requires --split");
    return manifest;
  }
  const DatasetSplit split = read_split_json(split_path);
  std::vector<CaseId> ids;
  if (subset == "train" || subset == "all")
    ids.insert(ids.end(), split.train.begin(), split.train.end());
  if (subset == "test" || subset == "all")
    ids.insert(ids.end(), split.test.begin(), split.test.end());
  std::sort(ids.begin(), ids.end());
  return select_cases(manifest, ids);
}

std::filesystem::path PredictionReader::png_path(const CaseId& case_id, int z, Roi roi) const {
  return dir_ / mask_png_name(case_id, z, roi);
}

std::filesystem::path PredictionReader::nifti_path(const CaseId& case_id, Roi roi) const {
  const std::filesystem::path gz = dir_ / (case_id + "_" + roi_token(roi) + ".nii.gz");
  if (std::filesystem::exists(gz)) return gz;
  const std::filesystem::path plain = dir_ / (case_id + "_" + roi_token(roi) + ".nii");
  if (std::filesystem::exists(plain)) return plain;
  return {};
}

bool PredictionReader::available(const CaseId& case_id, int z, Roi roi) const {
  if (std::filesystem::exists(png_path(case_id, z, roi))) return true;
  return !nifti_path(case_id, roi).empty();
}

std::optional<BinaryMask> PredictionReader::read(const CaseId& case_id, int z, Roi roi) const {
  const std::filesystem::path png = png_path(case_id, z, roi);
  if (std::filesystem::exists(png)) return read_mask_png(png);

  const std::filesystem::path nii = nifti_path(case_id, roi);
  if (nii.empty()) return std::nullopt;
  const RawNifti raw = read_nifti(nii);
  if (raw.header.ndim != 3)
    throw ParseError("prediction volume must be 3D: " + nii.string());
  if (!std::holds_alternative<std::vector<std::uint8_t>>(raw.data))
    throw ParseError("prediction volume must be uint8: " + nii.string());
  const int nx = raw.header.dim[0], ny = raw.header.dim[1], nz = raw.header.dim[2];
  if (z < 0 || z >= nz) return std::nullopt;
  const auto& data = std::get<std::vector<std::uint8_t>>(raw.data);
  BinaryMask mask(ny, nx);
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x)
      mask(y, x) =
          data[static_cast<std::size_t>(x) +
               static_cast<std::size_t>(nx) * (y + static_cast<std::size_t>(ny) * z)] != 0;
  return mask;
}

}  // namespace tumorseg::cli
