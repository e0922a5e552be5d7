#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "despeckle/metrics.hpp"

namespace despeckle {

inline constexpr std::array<std::string_view, 6> kMetricNames = {
    "nel", "line_pres", "edge_grad", "edge_var", "q_index", "beta_rho"};

double metric_value(const MetricsRecord& record, std::string_view metric);

struct SummaryRow {
  double looks = 0.0;
  std::string filter_name;
  std::string metric;
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
  /// Non-finite values (degenerate or failed replicates) left out.
  std::size_t excluded = 0;
  /// Fewer than two finite values; sd is reported as 0.
  bool degenerate = false;
};

/// Per (looks, filter, metric): mean, sd (n - 1) and five-number summary
/// with linearly interpolated quartiles. Groups come out sorted by looks,
/// then filter name, then metric in kMetricNames order, so the result does
/// not depend on record order. Groups without finite values are skipped and
/// reported in `warnings` when provided.
std::vector<SummaryRow> summarize(const std::vector<MetricsRecord>& records,
                                  std::vector<std::string>* warnings = nullptr);

/// Linear-interpolation quantile of sorted data, p in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double p);

std::string format_summary_csv(const std::vector<SummaryRow>& rows);

/// One row per (looks, filter) with the group means of the four SAR
/// measures and mean / sd of Q and β_ρ:
///   looks,filter,nel,line_pres,edge_grad,edge_var,q_mean,q_sd,beta_mean,beta_sd
std::string format_table(const std::vector<SummaryRow>& rows);

/// Axis code of a group, e.g. "KL 4-l" or "L 1-l".
std::string group_code(const std::string& filter_name, double looks);

/// Self-contained SVG with one panel per metric and one box per
/// (filter, looks) group. Boxes span the quartiles, whiskers reach the most
/// extreme value within 1.5 IQR, remaining values are drawn as points.
std::string render_boxplots_svg(const std::vector<MetricsRecord>& records);

}  // namespace despeckle
