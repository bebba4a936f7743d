#ifndef TUMORSEG_STATS_HPP
#define TUMORSEG_STATS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "tumorseg/metrics.hpp"
#include "tumorseg/types.hpp"

namespace tumorseg {

// Tukey five-number summary: quartiles by linear-interpolation percentile,
// whiskers at the most extreme points within 1.5*IQR of the quartiles.
struct BoxSummary {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;  // sorted ascending
  std::size_t n = 0;
};

BoxSummary box_summary(std::vector<double> values);  // n >= 1

enum class TestMethod { Exact, NormalApprox };

const char* test_method_token(TestMethod m);  // "exact", "normal-approx"

struct PairedTestResult {
  double statistic_w = 0.0;  // min(W+, W-); half-integral under ties
  double w_plus = 0.0;
  double w_minus = 0.0;
  std::size_t n_effective = 0;
  double p_value = 1.0;  // two-sided
  TestMethod method = TestMethod::Exact;
};

// Paired signed-rank test on d = a - b. Zero differences are dropped;
// |d| ranked with average ranks for ties. Exact p by DP over sign
// assignments for n_effective <= 25, else normal approximation with tie
// and continuity corrections. All differences zero is an error.
PairedTestResult wilcoxon_signed_rank(const std::vector<double>& a,
                                      const std::vector<double>& b);

// Mean dice per (roi, model) cell.
struct MeanTable {
  std::vector<Roi> rows;
  std::vector<std::string> models;
  std::vector<std::vector<double>> mean;         // [row][model], full precision
  std::vector<std::vector<std::size_t>> count;   // records per cell
};

// Every (roi, model) cell must be covered by at least one record.
MeanTable aggregate_table(const std::vector<SliceRecord>& records,
                          const std::vector<Roi>& rois,
                          const std::vector<std::string>& models);

std::string table_to_text(const MeanTable& table);  // aligned, 2 decimals
std::string table_to_csv(const MeanTable& table);   // full precision

// CSV of (case_id, z, roi, gt_pixels, dice), sorted by gt_pixels with
// (case_id, z, roi) as tiebreakers so equal sizes order deterministically.
std::string scatter_csv(std::vector<SliceRecord> records);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace tumorseg

#endif
