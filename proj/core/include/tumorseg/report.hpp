#ifndef TUMORSEG_REPORT_HPP
#define TUMORSEG_REPORT_HPP

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "tumorseg/metrics.hpp"
#include "tumorseg/stats.hpp"

namespace tumorseg {

// Everything a metrics run produced; summaries and tables are derived from
// the records on serialization rather than stored redundantly in memory.
struct EvalReport {
  FilterPolicy policy;
  Spacing2 spacing;
  std::vector<std::array<int, 2>> resolutions;  // distinct (rows, cols) seen
  std::vector<std::string> models;
  std::vector<SliceRecord> records;
};

// Distinct (rows, cols) over records, sorted.
std::vector<std::array<int, 2>> collect_resolutions(const std::vector<SliceRecord>& records);

// Full report document as JSON text: policy, spacing, resolution, records,
// per (roi, model) box summaries of dice and hd95, and the mean-dice table.
// Records serialize sorted by (case_id, z, roi, model) so the bytes do not
// depend on evaluation order.
std::string report_to_json_text(const EvalReport& report);
EvalReport report_from_json_text(const std::string& text);

void write_report(const EvalReport& report, const std::filesystem::path& path);
EvalReport read_report(const std::filesystem::path& path);

// Atomic write: "<path>.tmp" then rename.
void write_text_file(const std::string& text, const std::filesystem::path& path);

}  // namespace tumorseg

#endif
