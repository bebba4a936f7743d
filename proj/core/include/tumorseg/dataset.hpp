#ifndef TUMORSEG_DATASET_HPP
#define TUMORSEG_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <vector>

#include "tumorseg/types.hpp"

namespace tumorseg {

struct DatasetCase {
  CaseId id;
  std::filesystem::path image;
  std::filesystem::path label;

  friend bool operator==(const DatasetCase&, const DatasetCase&) = default;
};

struct DatasetManifest {
  std::vector<DatasetCase> cases;  // sorted by id

  const DatasetCase* find(const CaseId& id) const;
};

struct DatasetSplit {
  std::uint64_t seed = 0;
  std::vector<CaseId> train;
  std::vector<CaseId> test;
};

// "BRATS_001.nii.gz" -> "BRATS_001"; non-NIfTI names return empty.
std::string nifti_stem(const std::filesystem::path& file);

// Pairs imagesTr/ and labelsTr/ entries by filename stem. Dotfiles are
// ignored; any stem present on only one side is an error listing the stems.
DatasetManifest scan_dataset(const std::filesystem::path& root);

// Fisher-Yates shuffle of the case ids under a seeded generator; the first
// floor(train_frac * N) shuffled ids form the train set. The emitted JSON
// file, not this shuffle, is the durable contract between implementations.
DatasetSplit split_dataset(const DatasetManifest& manifest, double train_frac,
                           std::uint64_t seed);

void write_split_json(const DatasetSplit& split, const std::filesystem::path& path);
DatasetSplit read_split_json(const std::filesystem::path& path);

// Manifest restricted to the given ids, in the ids' order. Unknown ids are
// an error naming each one.
DatasetManifest select_cases(const DatasetManifest& manifest, const std::vector<CaseId>& ids);

}  // namespace tumorseg

#endif
