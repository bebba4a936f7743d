#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <tuple>

#include "cli_internal.hpp"
#include "tumorseg/error.hpp"
#include "tumorseg/report.hpp"

namespace tumorseg::cli {
namespace {

using PairKey = std::tuple<CaseId, int, int>;  // (case, z, roi)

std::string key_name(const PairKey& k) {
  return std::get<0>(k) + " z" + std::to_string(std::get<1>(k)) + " " +
         roi_token(static_cast<Roi>(std::get<2>(k)));
}

std::string pick_model(const EvalReport& report, const std::string& requested,
                       const char* which) {
  if (!requested.empty()) {
    for (const std::string& m : report.models)
      if (m == requested) return requested;
    throw ValidationError(std::string("compare: report ") + which + " has no model '" +
                          requested + "'");
  }
  if (report.models.size() != 1) {
    std::ostringstream msg;
    msg << "compare: report " << which << " carries " << report.models.size()
        << " models; pick one with --model-" << which;
    throw ValidationError(msg.str());
  }
  return report.models[0];
}

std::map<PairKey, double> dice_by_key(const EvalReport& report, const std::string& model,
                                      const char* which) {
  std::map<PairKey, double> out;
  for (const SliceRecord& r : report.records) {
    if (r.model_tag != model) continue;
    const PairKey key{r.case_id, r.z, static_cast<int>(r.roi)};
    if (!out.emplace(key, r.dice).second)
      throw ValidationError(std::string("compare: report ") + which + " has duplicate record " +
                            key_name(key));
  }
  return out;
}

nlohmann::json result_to_json(const PairedTestResult& t) {
  nlohmann::json j;
  j["w"] = t.statistic_w;
  j["w_plus"] = t.w_plus;
  j["w_minus"] = t.w_minus;
  j["n_effective"] = t.n_effective;
  j["p_value"] = t.p_value;
  j["method"] = test_method_token(t.method);
  return j;
}

}  // namespace

void run_compare(const CompareOpts& opts) {
  if (opts.report_a.empty() || opts.report_b.empty())
    throw ValidationError("compare: two report paths are required");
  if (opts.out.empty()) throw ValidationError("compare: --out is required");

  const EvalReport ra = read_report(opts.report_a);
  const EvalReport rb = read_report(opts.report_b);
  const std::string model_a = pick_model(ra, opts.model_a, "a");
  const std::string model_b = pick_model(rb, opts.model_b, "b");

  const auto da = dice_by_key(ra, model_a, "a");
  const auto db = dice_by_key(rb, model_b, "b");

  std::vector<std::string> only_a, only_b;
  for (const auto& [key, v] : da)
    if (!db.count(key)) only_a.push_back(key_name(key));
  for (const auto& [key, v] : db)
    if (!da.count(key)) only_b.push_back(key_name(key));
  if (!only_a.empty() || !only_b.empty()) {
    std::ostringstream msg;
    msg << "compare: reports cover different (case, z, roi) keys";
    if (!only_a.empty()) {
      msg << "\n  only in A:";
      for (const std::string& k : only_a) msg << "\n    " << k;
    }
    if (!only_b.empty()) {
      msg << "\n  only in B:";
      for (const std::string& k : only_b) msg << "\n    " << k;
    }
    throw ValidationError(msg.str());
  }
  if (da.empty()) throw ValidationError("compare: no paired records");

  // Pairing is by key; map order keeps it independent of record order.
  std::vector<double> all_a, all_b;
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> per_roi;
  for (const auto& [key, va] : da) {
    const double vb = db.at(key);
    all_a.push_back(va);
    all_b.push_back(vb);
    auto& [ras_, rbs_] = per_roi[std::get<2>(key)];
    ras_.push_back(va);
    rbs_.push_back(vb);
  }

  bool any_defined = false;
  auto run_test = [&](const std::vector<double>& a, const std::vector<double>& b) {
    nlohmann::json j;
    try {
      j = result_to_json(wilcoxon_signed_rank(a, b));
      any_defined = true;
    } catch (const ValidationError&) {
      j = {{"degenerate", true}, {"n_pairs", a.size()}};
    }
    return j;
  };

  nlohmann::json doc;
  doc["report_a"] = opts.report_a;
  doc["report_b"] = opts.report_b;
  doc["model_a"] = model_a;
  doc["model_b"] = model_b;
  doc["n_pairs"] = da.size();
  doc["overall"] = run_test(all_a, all_b);
  nlohmann::json roi_results = nlohmann::json::object();
  for (const auto& [roi_code, values] : per_roi)
    roi_results[roi_token(static_cast<Roi>(roi_code))] =
        run_test(values.first, values.second);
  doc["per_roi"] = std::move(roi_results);

  if (!any_defined)
    throw ValidationError(
        "compare: degenerate test, the paired dice values are identical everywhere");

  write_text_file(doc.dump(2) + "\n", opts.out);
  std::cout << "compared " << da.size() << " pairs (" << model_a << " vs " << model_b
            << "), overall p = " << doc["overall"]["p_value"].dump() << " -> " << opts.out
            << "\n";
}

}  // namespace tumorseg::cli
