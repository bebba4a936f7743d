#include <iostream>
#include <sstream>

#include "cli_internal.hpp"
#include "tumorseg/error.hpp"
#include "tumorseg/mask_ops.hpp"
#include "tumorseg/nifti.hpp"
#include "tumorseg/parallel.hpp"
#include "tumorseg/report.hpp"

namespace tumorseg::cli {

void run_evaluate(const EvaluateOpts& opts) {
  if (opts.dataset.empty()) throw ValidationError("evaluate: --dataset is required");
  if (opts.split.empty()) throw ValidationError("evaluate: --split is required");
  if (opts.out.empty()) throw ValidationError("evaluate: --out is required");
  const auto mode = filter_mode_from_token(opts.filter);
  if (!mode)
    throw ValidationError("evaluate: unknown filter '" + opts.filter +
                          "' (all_rois|target_roi)");
  if (opts.min_pixels < 0) throw ValidationError("evaluate: --min-pixels must be >= 0");
  if (!(opts.spacing_row > 0.0) || !(opts.spacing_col > 0.0))
    throw ValidationError("evaluate: spacing must be positive");

  const std::vector<PredSource> sources = parse_pred_specs(opts.preds);
  const DatasetManifest manifest =
      cases_for_subset(scan_dataset(opts.dataset), opts.split, opts.subset);
  const FilterPolicy policy{opts.min_pixels, *mode};
  const Spacing2 spacing{opts.spacing_row, opts.spacing_col};

  // One pass per case: load labels, list every missing prediction for kept
  // slices, and score only fully-covered cases. Results land in per-case
  // slots so worker scheduling cannot affect the output.
  struct CaseOutcome {
    std::vector<SliceRecord> records;
    std::vector<std::string> missing;
  };
  std::vector<CaseOutcome> outcomes(manifest.cases.size());

  parallel_for(
      manifest.cases.size(),
      [&](std::size_t ci) {
        const DatasetCase& item = manifest.cases[ci];
        CaseOutcome& slot = outcomes[ci];
        LabelVolume labels;
        try {
          labels = to_labels(read_nifti(item.label));
        } catch (const ParseError& e) {
          throw ParseError("case " + item.id + ": " + e.what());
        }

        std::vector<PredictionReader> readers;
        readers.reserve(sources.size());
        for (const PredSource& src : sources) readers.emplace_back(src.dir);

        for (int z = 0; z < labels.nz(); ++z)
          for (Roi roi : kAllRois) {
            if (!filter_slice(labels, z, roi, policy)) continue;
            for (std::size_t m = 0; m < sources.size(); ++m)
              if (!readers[m].available(item.id, z, roi))
                slot.missing.push_back("model '" + sources[m].tag + "': " + item.id + " z" +
                                       std::to_string(z) + " " + roi_token(roi));
          }
        if (!slot.missing.empty()) return;

        for (std::size_t m = 0; m < sources.size(); ++m)
          for (Roi roi : kAllRois) {
            const PredictionReader& reader = readers[m];
            auto lookup = [&](int z, Roi r) { return reader.read(item.id, z, r); };
            auto records = evaluate_case(labels, item.id, roi, policy, spacing, lookup,
                                         sources[m].tag);
            slot.records.insert(slot.records.end(), records.begin(), records.end());
          }
      },
      opts.threads);

  std::vector<std::string> missing;
  for (const CaseOutcome& slot : outcomes)
    missing.insert(missing.end(), slot.missing.begin(), slot.missing.end());
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "evaluate: " << missing.size() << " predictions missing:";
    for (const std::string& m : missing) msg << "\n  " << m;
    throw ValidationError(msg.str());
  }

  EvalReport report;
  report.policy = policy;
  report.spacing = spacing;
  for (const PredSource& src : sources) report.models.push_back(src.tag);
  for (CaseOutcome& slot : outcomes)
    report.records.insert(report.records.end(), slot.records.begin(), slot.records.end());
  report.resolutions = collect_resolutions(report.records);

  if (report.records.empty())
    throw ValidationError("evaluate: no slice passed the filter (min_pixels " +
                          std::to_string(policy.min_pixels) + ", mode " +
                          filter_mode_token(policy.mode) + ")");

  const std::filesystem::path out(opts.out);
  std::filesystem::create_directories(out);
  write_report(report, out / "report.json");

  std::vector<Roi> rows;  // only ROIs the filter let through at all
  for (Roi roi : kTableRoiOrder)
    for (const SliceRecord& r : report.records)
      if (r.roi == roi) {
        rows.push_back(roi);
        break;
      }
  const MeanTable table = aggregate_table(report.records, rows, report.models);
  write_text_file(table_to_text(table), out / "table.txt");
  write_text_file(table_to_csv(table), out / "table.csv");
  write_text_file(scatter_csv(report.records), out / "scatter.csv");

  std::cout << table_to_text(table) << "scored " << report.records.size() << " slice records -> "
            << opts.out << "\n";
}

}  // namespace tumorseg::cli
