#include "despeckle/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

#include "despeckle/errors.hpp"
#include "despeckle/montecarlo.hpp"

namespace despeckle {

namespace {

using GroupKey = std::tuple<double, std::string>;

std::map<GroupKey, std::vector<const MetricsRecord*>> group_records(const std::vector<MetricsRecord>& records) {
  std::map<GroupKey, std::vector<const MetricsRecord*>> groups;
  for (const auto& r : records) groups[{r.looks, r.filter_name}].push_back(&r);
  return groups;
}

std::vector<double> finite_sorted(const std::vector<const MetricsRecord*>& group, std::string_view metric,
                                  std::size_t* excluded) {
  std::vector<double> values;
  std::size_t skipped = 0;
  for (const auto* r : group) {
    const double v = metric_value(*r, metric);
    if (std::isfinite(v)) {
      values.push_back(v);
    } else {
      ++skipped;
    }
  }
  std::sort(values.begin(), values.end());
  if (excluded) *excluded = skipped;
  return values;
}

std::string fmt(const char* pattern, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace

double metric_value(const MetricsRecord& record, std::string_view metric) {
  if (metric == "nel") return record.nel;
  if (metric == "line_pres") return record.line_pres;
  if (metric == "edge_grad") return record.edge_grad;
  if (metric == "edge_var") return record.edge_var;
  if (metric == "q_index") return record.q_index;
  if (metric == "beta_rho") return record.beta_rho;
  throw DomainError("unknown metric '" + std::string(metric) + "'");
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile_sorted: empty data");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<SummaryRow> summarize(const std::vector<MetricsRecord>& records, std::vector<std::string>* warnings) {
  std::vector<SummaryRow> rows;
  for (const auto& [key, group] : group_records(records)) {
    for (const auto metric : kMetricNames) {
      SummaryRow row;
      row.looks = std::get<0>(key);
      row.filter_name = std::get<1>(key);
      row.metric = std::string(metric);
      const std::vector<double> values = finite_sorted(group, metric, &row.excluded);
      if (values.empty()) {
        if (warnings) {
          warnings->push_back("no finite " + row.metric + " values for " + group_code(row.filter_name, row.looks));
        }
        continue;
      }
      row.count = values.size();
      double sum = 0.0;
      for (double v : values) sum += v;
      row.mean = sum / static_cast<double>(values.size());
      if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - row.mean) * (v - row.mean);
        row.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
      } else {
        row.degenerate = true;
      }
      row.min = values.front();
      row.max = values.back();
      row.q1 = quantile_sorted(values, 0.25);
      row.median = quantile_sorted(values, 0.5);
      row.q3 = quantile_sorted(values, 0.75);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string format_summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "looks,filter,metric,count,mean,sd,median,q1,q3,min,max,excluded,flags\n";
  for (const auto& r : rows) {
    out += format_real(r.looks) + ',' + r.filter_name + ',' + r.metric + ',' + std::to_string(r.count);
    for (double v : {r.mean, r.sd, r.median, r.q1, r.q3, r.min, r.max}) out += ',' + format_real(v);
    out += ',' + std::to_string(r.excluded) + ',' + (r.degenerate ? "single_value" : "") + '\n';
  }
  return out;
}

std::string format_table(const std::vector<SummaryRow>& rows) {
  std::map<GroupKey, std::map<std::string, const SummaryRow*>> by_group;
  for (const auto& r : rows) by_group[{r.looks, r.filter_name}][r.metric] = &r;
  std::string out = "looks,filter,nel,line_pres,edge_grad,edge_var,q_mean,q_sd,beta_mean,beta_sd\n";
  const double nan = std::nan("");
  for (const auto& [key, metrics] : by_group) {
    auto mean_of = [&](const char* m) { return metrics.count(m) ? metrics.at(m)->mean : nan; };
    auto sd_of = [&](const char* m) { return metrics.count(m) ? metrics.at(m)->sd : nan; };
    out += format_real(std::get<0>(key)) + ',' + std::get<1>(key);
    for (double v : {mean_of("nel"), mean_of("line_pres"), mean_of("edge_grad"), mean_of("edge_var"),
                     mean_of("q_index"), sd_of("q_index"), mean_of("beta_rho"), sd_of("beta_rho")}) {
      out += ',' + format_real(v);
    }
    out += '\n';
  }
  return out;
}

std::string group_code(const std::string& filter_name, double looks) {
  std::string code;
  if (filter_name == "kl") {
    code = "KL";
  } else if (filter_name == "lee") {
    code = "L";
  } else {
    code = filter_name;
    std::transform(code.begin(), code.end(), code.begin(), [](unsigned char c) { return std::toupper(c); });
  }
  return code + ' ' + fmt("%g", looks) + "-l";
}

std::string render_boxplots_svg(const std::vector<MetricsRecord>& records) {
  constexpr double kPanelW = 360.0;
  constexpr double kPanelH = 280.0;
  constexpr int kColumns = 3;
  constexpr double kLeft = 64.0;
  constexpr double kRight = 16.0;
  constexpr double kTop = 36.0;
  constexpr double kBottom = 40.0;
  constexpr const char* kTitles[] = {"Equivalent number of looks", "Line preservation", "Edge gradient",
                                     "Edge variance", "Q index", "beta_rho"};

  const auto groups = group_records(records);
  const int rows_of_panels = (static_cast<int>(kMetricNames.size()) + kColumns - 1) / kColumns;
  const double width = kPanelW * kColumns;
  const double height = kPanelH * rows_of_panels;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", width) + "\" height=\"" +
         fmt("%.0f", height) + "\" viewBox=\"0 0 " + fmt("%.0f", width) + ' ' + fmt("%.0f", height) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t mi = 0; mi < kMetricNames.size(); ++mi) {
    const auto metric = kMetricNames[mi];
    const double ox = kPanelW * static_cast<double>(mi % kColumns);
    const double oy = kPanelH * static_cast<double>(mi / kColumns);
    const double plot_x0 = ox + kLeft;
    const double plot_x1 = ox + kPanelW - kRight;
    const double plot_y0 = oy + kTop;
    const double plot_y1 = oy + kPanelH - kBottom;

    std::vector<std::pair<std::string, std::vector<double>>> data;
    double lo = INFINITY;
    double hi = -INFINITY;
    for (const auto& [key, group] : groups) {
      auto values = finite_sorted(group, metric, nullptr);
      if (values.empty()) continue;
      lo = std::min(lo, values.front());
      hi = std::max(hi, values.back());
      data.emplace_back(group_code(std::get<1>(key), std::get<0>(key)), std::move(values));
    }
    if (data.empty()) {
      lo = 0.0;
      hi = 1.0;
    }
    if (!(hi > lo)) {
      const double pad = std::abs(lo) > 0.0 ? 0.05 * std::abs(lo) : 1.0;
      lo -= pad;
      hi += pad;
    }
    const double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
    auto y_of = [&](double v) { return plot_y1 - (v - lo) / (hi - lo) * (plot_y1 - plot_y0); };

    svg += "<g class=\"panel\" id=\"panel-" + std::string(metric) + "\">\n";
    svg += "<text x=\"" + fmt("%.2f", ox + kPanelW / 2) + "\" y=\"" + fmt("%.2f", oy + 20) +
           "\" text-anchor=\"middle\" font-size=\"13\">" + kTitles[mi] + "</text>\n";
    svg += "<rect x=\"" + fmt("%.2f", plot_x0) + "\" y=\"" + fmt("%.2f", plot_y0) + "\" width=\"" +
           fmt("%.2f", plot_x1 - plot_x0) + "\" height=\"" + fmt("%.2f", plot_y1 - plot_y0) +
           "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int t = 0; t <= 4; ++t) {
      const double v = lo + (hi - lo) * t / 4.0;
      const double y = y_of(v);
      svg += "<line x1=\"" + fmt("%.2f", plot_x0 - 4) + "\" y1=\"" + fmt("%.2f", y) + "\" x2=\"" +
             fmt("%.2f", plot_x0) + "\" y2=\"" + fmt("%.2f", y) + "\" stroke=\"#444\"/>\n";
      svg += "<text x=\"" + fmt("%.2f", plot_x0 - 6) + "\" y=\"" + fmt("%.2f", y + 4) +
             "\" text-anchor=\"end\">" + fmt("%.4g", v) + "</text>\n";
    }

    const double slot = (plot_x1 - plot_x0) / static_cast<double>(std::max<std::size_t>(data.size(), 1));
    for (std::size_t gi = 0; gi < data.size(); ++gi) {
      const auto& [code, values] = data[gi];
      const double cx = plot_x0 + slot * (static_cast<double>(gi) + 0.5);
      const double half = std::min(24.0, slot * 0.3);
      const double q1 = quantile_sorted(values, 0.25);
      const double med = quantile_sorted(values, 0.5);
      const double q3 = quantile_sorted(values, 0.75);
      const double iqr = q3 - q1;
      double wlo = q1;
      double whi = q3;
      for (double v : values) {
        if (v >= q1 - 1.5 * iqr) {
          wlo = std::min(wlo, v);
          break;
        }
      }
      for (auto it = values.rbegin(); it != values.rend(); ++it) {
        if (*it <= q3 + 1.5 * iqr) {
          whi = std::max(whi, *it);
          break;
        }
      }
      auto line = [&](double x1, double y1, double x2, double y2) {
        svg += "<line x1=\"" + fmt("%.2f", x1) + "\" y1=\"" + fmt("%.2f", y1) + "\" x2=\"" + fmt("%.2f", x2) +
               "\" y2=\"" + fmt("%.2f", y2) + "\" stroke=\"black\"/>\n";
      };
      line(cx, y_of(whi), cx, y_of(q3));
      line(cx, y_of(q1), cx, y_of(wlo));
      line(cx - half / 2, y_of(whi), cx + half / 2, y_of(whi));
      line(cx - half / 2, y_of(wlo), cx + half / 2, y_of(wlo));
      svg += "<rect x=\"" + fmt("%.2f", cx - half) + "\" y=\"" + fmt("%.2f", y_of(q3)) + "\" width=\"" +
             fmt("%.2f", 2 * half) + "\" height=\"" + fmt("%.2f", y_of(q1) - y_of(q3)) +
             "\" fill=\"#cfe0f3\" stroke=\"black\"/>\n";
      svg += "<line x1=\"" + fmt("%.2f", cx - half) + "\" y1=\"" + fmt("%.2f", y_of(med)) + "\" x2=\"" +
             fmt("%.2f", cx + half) + "\" y2=\"" + fmt("%.2f", y_of(med)) +
             "\" stroke=\"black\" stroke-width=\"2\"/>\n";
      for (double v : values) {
        if (v < wlo || v > whi) {
          svg += "<circle cx=\"" + fmt("%.2f", cx) + "\" cy=\"" + fmt("%.2f", y_of(v)) +
                 "\" r=\"2\" fill=\"none\" stroke=\"black\"/>\n";
        }
      }
      svg += "<text x=\"" + fmt("%.2f", cx) + "\" y=\"" + fmt("%.2f", plot_y1 + 16) +
             "\" text-anchor=\"middle\">" + code + "</text>\n";
    }
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace despeckle
