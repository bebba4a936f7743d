#include "tumorseg/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <sstream>

#include "tumorseg/error.hpp"

namespace tumorseg {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

BoxSummary box_summary(std::vector<double> values) {
  if (values.empty()) throw ValidationError("box_summary: empty input");
  std::sort(values.begin(), values.end());

  BoxSummary box;
  box.n = values.size();
  box.q1 = percentile_sorted(values, 25.0);
  box.median = percentile_sorted(values, 50.0);
  box.q3 = percentile_sorted(values, 75.0);
  const double iqr = box.q3 - box.q1;
  const double lo_fence = box.q1 - 1.5 * iqr;
  const double hi_fence = box.q3 + 1.5 * iqr;

  box.whisker_low = values.back();
  box.whisker_high = values.front();
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      box.outliers.push_back(v);
    } else {
      box.whisker_low = std::min(box.whisker_low, v);
      box.whisker_high = std::max(box.whisker_high, v);
    }
  }
  if (box.outliers.size() == values.size()) {
    // Degenerate fences cannot occur: iqr >= 0 keeps the quartiles inside,
    // so at least one point always sits within the fences.
    box.whisker_low = box.q1;
    box.whisker_high = box.q3;
  }
  return box;
}

const char* test_method_token(TestMethod m) {
  return m == TestMethod::Exact ? "exact" : "normal-approx";
}

PairedTestResult wilcoxon_signed_rank(const std::vector<double>& a,
                                      const std::vector<double>& b) {
  if (a.size() != b.size())
    throw ValidationError("wilcoxon_signed_rank: paired inputs differ in length (" +
                          std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  if (a.empty()) throw ValidationError("wilcoxon_signed_rank: empty input");

  struct Diff {
    double abs;
    int sign;
  };
  std::vector<Diff> diffs;
  diffs.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) diffs.push_back({std::fabs(d), d > 0.0 ? 1 : -1});
  }
  const std::size_t n = diffs.size();
  if (n == 0)
    throw ValidationError("wilcoxon_signed_rank: degenerate test, all differences are zero");

  std::sort(diffs.begin(), diffs.end(),
            [](const Diff& x, const Diff& y) { return x.abs < y.abs; });

  // Doubled ranks keep tied (averaged) ranks integral: a tie group spanning
  // 1-based positions i..j gets doubled rank i+j for every member.
  std::vector<long long> rank2(n);
  std::vector<std::size_t> tie_sizes;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && diffs[j + 1].abs == diffs[i].abs) ++j;
    const long long doubled = static_cast<long long>(i + 1) + static_cast<long long>(j + 1);
    for (std::size_t k = i; k <= j; ++k) rank2[k] = doubled;
    tie_sizes.push_back(j - i + 1);
    i = j + 1;
  }

  long long w_plus2 = 0, w_minus2 = 0;
  for (std::size_t i = 0; i < n; ++i)
    (diffs[i].sign > 0 ? w_plus2 : w_minus2) += rank2[i];
  const long long w2 = std::min(w_plus2, w_minus2);

  PairedTestResult result;
  result.w_plus = static_cast<double>(w_plus2) / 2.0;
  result.w_minus = static_cast<double>(w_minus2) / 2.0;
  result.statistic_w = static_cast<double>(w2) / 2.0;
  result.n_effective = n;

  if (n <= 25) {
    result.method = TestMethod::Exact;
    // Subset-sum count over doubled ranks: dp[s] = number of sign
    // assignments whose positive part sums (doubled) to s.
    const long long total = static_cast<long long>(n) * (n + 1);  // doubled n(n+1)/2
    std::vector<unsigned long long> dp(total + 1, 0);
    dp[0] = 1;
    for (std::size_t i = 0; i < n; ++i)
      for (long long s = total; s >= rank2[i]; --s) dp[s] += dp[s - rank2[i]];
    unsigned long long at_most = 0;
    for (long long s = 0; s <= w2; ++s) at_most += dp[s];
    const double p = 2.0 * static_cast<double>(at_most) / std::ldexp(1.0, static_cast<int>(n));
    result.p_value = std::min(1.0, p);
  } else {
    result.method = TestMethod::NormalApprox;
    const double nd = static_cast<double>(n);
    const double mean = nd * (nd + 1.0) / 4.0;
    double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0;
    for (std::size_t t : tie_sizes) {
      const double td = static_cast<double>(t);
      var -= (td * td * td - td) / 48.0;
    }
    const double w = static_cast<double>(w2) / 2.0;
    const double z = (w - mean + 0.5) / std::sqrt(var);  // continuity correction
    const double p = 2.0 * 0.5 * std::erfc(-z / std::sqrt(2.0));
    result.p_value = std::min(1.0, std::max(0.0, p));
  }
  return result;
}

MeanTable aggregate_table(const std::vector<SliceRecord>& records,
                          const std::vector<Roi>& rois,
                          const std::vector<std::string>& models) {
  MeanTable table;
  table.rows = rois;
  table.models = models;
  table.mean.assign(rois.size(), std::vector<double>(models.size(), 0.0));
  table.count.assign(rois.size(), std::vector<std::size_t>(models.size(), 0));

  std::map<std::string, std::size_t> model_index;
  for (std::size_t j = 0; j < models.size(); ++j) model_index.emplace(models[j], j);
  std::map<int, std::size_t> roi_index;
  for (std::size_t i = 0; i < rois.size(); ++i) roi_index.emplace(static_cast<int>(rois[i]), i);

  std::vector<std::vector<double>> sums(rois.size(), std::vector<double>(models.size(), 0.0));
  for (const SliceRecord& r : records) {
    auto mi = model_index.find(r.model_tag);
    auto ri = roi_index.find(static_cast<int>(r.roi));
    if (mi == model_index.end() || ri == roi_index.end()) continue;
    sums[ri->second][mi->second] += r.dice;
    ++table.count[ri->second][mi->second];
  }
  for (std::size_t i = 0; i < rois.size(); ++i)
    for (std::size_t j = 0; j < models.size(); ++j) {
      if (table.count[i][j] == 0)
        throw ValidationError(std::string("aggregate_table: no records for roi '") +
                              roi_display(rois[i]) + "' model '" + models[j] + "'");
      table.mean[i][j] = sums[i][j] / static_cast<double>(table.count[i][j]);
    }
  return table;
}

std::string table_to_text(const MeanTable& table) {
  std::size_t roi_width = 3;  // "ROI"
  for (Roi roi : table.rows) roi_width = std::max(roi_width, std::strlen(roi_display(roi)));
  std::vector<std::size_t> widths;
  for (const std::string& m : table.models) widths.push_back(std::max<std::size_t>(4, m.size()));

  std::ostringstream out;
  out << std::string(roi_width - 3, ' ') << "ROI";
  for (std::size_t j = 0; j < table.models.size(); ++j)
    out << "  " << std::string(widths[j] - table.models[j].size(), ' ') << table.models[j];
  out << "\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const std::string name = roi_display(table.rows[i]);
    out << std::string(roi_width - name.size(), ' ') << name;
    for (std::size_t j = 0; j < table.models.size(); ++j) {
      char cell[32];
      std::snprintf(cell, sizeof(cell), "%.2f", table.mean[i][j]);
      const std::size_t len = std::strlen(cell);
      out << "  " << std::string(widths[j] > len ? widths[j] - len : 0, ' ') << cell;
    }
    out << "\n";
  }
  return out.str();
}

std::string table_to_csv(const MeanTable& table) {
  std::ostringstream out;
  out << "roi";
  for (const std::string& m : table.models) out << "," << m;
  out << "\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    out << roi_display(table.rows[i]);
    for (std::size_t j = 0; j < table.models.size(); ++j)
      out << "," << format_double(table.mean[i][j]);
    out << "\n";
  }
  return out.str();
}

std::string scatter_csv(std::vector<SliceRecord> records) {
  std::sort(records.begin(), records.end(), [](const SliceRecord& a, const SliceRecord& b) {
    if (a.gt_pixels != b.gt_pixels) return a.gt_pixels < b.gt_pixels;
    if (a.case_id != b.case_id) return a.case_id < b.case_id;
    if (a.z != b.z) return a.z < b.z;
    return static_cast<int>(a.roi) < static_cast<int>(b.roi);
  });
  std::ostringstream out;
  out << "case_id,z,roi,gt_pixels,dice\n";
  for (const SliceRecord& r : records)
    out << r.case_id << "," << r.z << "," << roi_token(r.roi) << "," << r.gt_pixels << ","
        << format_double(r.dice) << "\n";
  return out.str();
}

}  // namespace tumorseg
