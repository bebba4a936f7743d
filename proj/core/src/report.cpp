#include "tumorseg/report.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>

#include "tumorseg/error.hpp"

namespace tumorseg {
namespace {

nlohmann::json box_to_json(const BoxSummary& box) {
  nlohmann::json j;
  j["median"] = box.median;
  j["q1"] = box.q1;
  j["q3"] = box.q3;
  j["whisker_low"] = box.whisker_low;
  j["whisker_high"] = box.whisker_high;
  j["outliers"] = box.outliers;
  j["n"] = box.n;
  return j;
}

Roi roi_from_json_field(const nlohmann::json& j, const std::string& context) {
  const std::string token = j.get<std::string>();
  const auto roi = roi_from_token(token);
  if (!roi) throw ParseError(context + ": unknown roi '" + token + "'");
  return *roi;
}

void sort_records(std::vector<SliceRecord>& records) {
  std::sort(records.begin(), records.end(), [](const SliceRecord& a, const SliceRecord& b) {
    if (a.case_id != b.case_id) return a.case_id < b.case_id;
    if (a.z != b.z) return a.z < b.z;
    if (a.roi != b.roi) return static_cast<int>(a.roi) < static_cast<int>(b.roi);
    return a.model_tag < b.model_tag;
  });
}

nlohmann::json record_to_json(const SliceRecord& record) {
  nlohmann::json j;
  j["case_id"] = record.case_id;
  j["z"] = record.z;
  j["roi"] = roi_token(record.roi);
  j["model"] = record.model_tag;
  j["dice"] = record.dice;
  j["defined_hd"] = record.defined_hd;
  if (record.defined_hd) {
    j["hd"] = record.hd;
    j["hd95"] = record.hd95;
  } else {
    j["hd"] = nullptr;
    j["hd95"] = nullptr;
  }
  j["gt_pixels"] = record.gt_pixels;
  j["pred_pixels"] = record.pred_pixels;
  j["rows"] = record.rows;
  j["cols"] = record.cols;
  return j;
}

SliceRecord record_from_json(const nlohmann::json& j) {
  SliceRecord r;
  r.case_id = j.at("case_id").get<std::string>();
  r.z = j.at("z").get<int>();
  r.roi = roi_from_json_field(j.at("roi"), "record");
  r.model_tag = j.at("model").get<std::string>();
  r.dice = j.at("dice").get<double>();
  r.defined_hd = j.at("defined_hd").get<bool>();
  if (r.defined_hd) {
    r.hd = j.at("hd").get<double>();
    r.hd95 = j.at("hd95").get<double>();
  }
  r.gt_pixels = j.at("gt_pixels").get<std::int64_t>();
  r.pred_pixels = j.at("pred_pixels").get<std::int64_t>();
  r.rows = j.at("rows").get<int>();
  r.cols = j.at("cols").get<int>();
  return r;
}

EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport report;
  const auto& policy = j.at("policy");
  report.policy.min_pixels = policy.at("min_pixels").get<std::int64_t>();
  const std::string mode = policy.at("mode").get<std::string>();
  const auto parsed = filter_mode_from_token(mode);
  if (!parsed) throw ParseError("report: unknown filter mode '" + mode + "'");
  report.policy.mode = *parsed;
  report.spacing.row = j.at("spacing").at("row").get<double>();
  report.spacing.col = j.at("spacing").at("col").get<double>();
  report.models = j.at("models").get<std::vector<std::string>>();
  for (const auto& rec : j.at("records")) report.records.push_back(record_from_json(rec));
  report.resolutions = collect_resolutions(report.records);
  return report;
}

}  // namespace

std::vector<std::array<int, 2>> collect_resolutions(const std::vector<SliceRecord>& records) {
  std::set<std::array<int, 2>> seen;
  for (const SliceRecord& r : records) seen.insert({r.rows, r.cols});
  return {seen.begin(), seen.end()};
}

std::string report_to_json_text(const EvalReport& report) {
  nlohmann::json j;
  j["policy"] = {{"min_pixels", report.policy.min_pixels},
                 {"mode", filter_mode_token(report.policy.mode)}};
  j["spacing"] = {{"row", report.spacing.row}, {"col", report.spacing.col}};

  std::vector<SliceRecord> records = report.records;
  sort_records(records);

  j["resolution"] = nlohmann::json::array();
  for (const auto& res : collect_resolutions(records))
    j["resolution"].push_back({res[0], res[1]});
  j["models"] = report.models;

  j["records"] = nlohmann::json::array();
  for (const SliceRecord& r : records) j["records"].push_back(record_to_json(r));

  nlohmann::json summaries = nlohmann::json::object();
  for (Roi roi : kAllRois) {
    for (const std::string& model : report.models) {
      std::vector<double> dices, hds;
      for (const SliceRecord& r : records) {
        if (r.roi != roi || r.model_tag != model) continue;
        dices.push_back(r.dice);
        if (r.defined_hd) hds.push_back(r.hd95);
      }
      if (dices.empty()) continue;
      nlohmann::json cell;
      cell["dice"] = box_to_json(box_summary(dices));
      if (!hds.empty()) cell["hd95"] = box_to_json(box_summary(hds));
      summaries[std::string(roi_token(roi)) + "/" + model] = std::move(cell);
    }
  }
  j["summaries"] = std::move(summaries);

  // Mean-dice table over the ROIs that were evaluated at all; an ROI
  // covered for one model but not another is a genuine missing cell and
  // aggregate_table raises on it.
  std::vector<Roi> rows;
  for (Roi roi : kTableRoiOrder) {
    const bool any = std::any_of(records.begin(), records.end(),
                                 [&](const SliceRecord& r) { return r.roi == roi; });
    if (any) rows.push_back(roi);
  }
  if (!rows.empty() && !report.models.empty()) {
    const MeanTable table = aggregate_table(records, rows, report.models);
    nlohmann::json jt;
    jt["rois"] = nlohmann::json::array();
    for (Roi roi : table.rows) jt["rois"].push_back(roi_token(roi));
    jt["models"] = table.models;
    jt["mean"] = table.mean;
    jt["count"] = table.count;
    jt["text"] = table_to_text(table);
    jt["csv"] = table_to_csv(table);
    j["tables"] = {{"dice_mean", std::move(jt)}};
  } else {
    j["tables"] = nlohmann::json::object();
  }
  return j.dump(2) + "\n";
}

EvalReport report_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  try {
    return report_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
}

void write_text_file(const std::string& text, const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open file for writing: " + tmp.string());
    out << text;
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed for " + path.string() + ": " + ec.message());
}

void write_report(const EvalReport& report, const std::filesystem::path& path) {
  write_text_file(report_to_json_text(report), path);
}

EvalReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open report: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return report_from_json_text(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace tumorseg
