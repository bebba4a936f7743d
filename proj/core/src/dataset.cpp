#include "tumorseg/dataset.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>
#include <json.hpp>
#include <sstream>

#include "tumorseg/error.hpp"
#include "tumorseg/rng.hpp"

namespace tumorseg {

const DatasetCase* DatasetManifest::find(const CaseId& id) const {
  auto it = std::find_if(cases.begin(), cases.end(),
                         [&](const DatasetCase& c) { return c.id == id; });
  return it != cases.end() ? &*it : nullptr;
}

std::string nifti_stem(const std::filesystem::path& file) {
  std::string name = file.filename().string();
  for (const char* ext : {".nii.gz", ".nii"}) {
    const std::size_t n = std::strlen(ext);
    if (name.size() > n && name.compare(name.size() - n, n, ext) == 0)
      return name.substr(0, name.size() - n);
  }
  return {};
}

namespace {

std::map<std::string, std::filesystem::path> list_nifti(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw IoError("dataset directory missing: " + dir.string());
  std::map<std::string, std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (!name.empty() && name[0] == '.') continue;  // .DS_Store, ._* resource forks
    const std::string stem = nifti_stem(entry.path());
    if (!stem.empty()) out.emplace(stem, entry.path());
  }
  return out;
}

}  // namespace

DatasetManifest scan_dataset(const std::filesystem::path& root) {
  const auto images = list_nifti(root / "imagesTr");
  const auto labels = list_nifti(root / "labelsTr");

  std::vector<std::string> unpaired;
  for (const auto& [stem, path] : images)
    if (!labels.count(stem)) unpaired.push_back(stem + " (image without label)");
  for (const auto& [stem, path] : labels)
    if (!images.count(stem)) unpaired.push_back(stem + " (label without image)");
  if (!unpaired.empty()) {
    std::ostringstream msg;
    msg << "unpaired cases under " << root.string() << ":";
    for (const std::string& s : unpaired) msg << " " << s << ";";
    throw ValidationError(msg.str());
  }

  DatasetManifest manifest;
  manifest.cases.reserve(images.size());
  for (const auto& [stem, path] : images)  // std::map iterates sorted
    manifest.cases.push_back({stem, path, labels.at(stem)});
  return manifest;
}

DatasetSplit split_dataset(const DatasetManifest& manifest, double train_frac,
                           std::uint64_t seed) {
  if (!(train_frac > 0.0 && train_frac < 1.0))
    throw ValidationError("split_dataset: train_frac must be in (0,1), got " +
                          std::to_string(train_frac));
  const std::size_t n = manifest.cases.size();
  if (n < 2)
    throw ValidationError("split_dataset: need at least 2 cases, got " + std::to_string(n));

  std::vector<CaseId> ids;
  ids.reserve(n);
  for (const DatasetCase& c : manifest.cases) ids.push_back(c.id);

  DetRng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i)
    std::swap(ids[i], ids[rng.bounded(static_cast<std::uint64_t>(i + 1))]);

  const std::size_t n_train = static_cast<std::size_t>(train_frac * static_cast<double>(n));
  DatasetSplit split;
  split.seed = seed;
  split.train.assign(ids.begin(), ids.begin() + n_train);
  split.test.assign(ids.begin() + n_train, ids.end());
  return split;
}

void write_split_json(const DatasetSplit& split, const std::filesystem::path& path) {
  nlohmann::json j;
  j["seed"] = split.seed;
  j["train"] = split.train;
  j["test"] = split.test;
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + tmp.string());
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed for " + path.string() + ": " + ec.message());
}

DatasetSplit read_split_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open split file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("split file " + path.string() + ": " + e.what());
  }
  DatasetSplit split;
  try {
    split.seed = j.at("seed").get<std::uint64_t>();
    split.train = j.at("train").get<std::vector<CaseId>>();
    split.test = j.at("test").get<std::vector<CaseId>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("split file " + path.string() + ": " + e.what());
  }
  return split;
}

DatasetManifest select_cases(const DatasetManifest& manifest, const std::vector<CaseId>& ids) {
  DatasetManifest out;
  std::vector<CaseId> unknown;
  for (const CaseId& id : ids) {
    const DatasetCase* c = manifest.find(id);
    if (c)
      out.cases.push_back(*c);
    else
      unknown.push_back(id);
  }
  if (!unknown.empty()) {
    std::ostringstream msg;
    msg << "split names cases absent from the dataset:";
    for (const CaseId& id : unknown) msg << " " << id;
    throw ValidationError(msg.str());
  }
  return out;
}

}  // namespace tumorseg
