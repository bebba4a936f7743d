#include <iostream>

#include "cli_internal.hpp"
#include "tumorseg/error.hpp"

namespace tumorseg::cli {

void run_split(const SplitOpts& opts) {
  if (opts.dataset.empty()) throw ValidationError("split: --dataset is required");
  if (opts.out.empty()) throw ValidationError("split: --out is required");

  const DatasetManifest manifest = scan_dataset(opts.dataset);
  const DatasetSplit split = split_dataset(manifest, opts.train_frac, opts.seed);
  write_split_json(split, opts.out);
  std::cout << "split " << manifest.cases.size() << " cases: " << split.train.size()
            << " train, " << split.test.size() << " test (seed " << split.seed << ") -> "
            << opts.out << "\n";
}

}  // namespace tumorseg::cli
