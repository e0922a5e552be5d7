#include "despeckle/montecarlo.hpp"

#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string_view>

#include "despeckle/errors.hpp"
#include "despeckle/parallel.hpp"

namespace despeckle {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

double parse_real(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0' || errno == ERANGE) throw DomainError("invalid real for " + what + ": '" + text + "'");
  return v;
}

long long parse_integer(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || *end != '\0' || errno == ERANGE) throw DomainError("invalid integer for " + what + ": '" + text + "'");
  return v;
}

std::string join_reals(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_real(values[i]);
  }
  return out;
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

void RunConfig::validate() const {
  if (replicates < 1) throw DomainError("RunConfig: replicates must be >= 1");
  if (looks_list.empty()) throw DomainError("RunConfig: looks list is empty");
  for (double l : looks_list) {
    if (!(l >= 1.0) || !std::isfinite(l)) throw DomainError("RunConfig: looks must be >= 1");
  }
  if (filters.empty()) throw DomainError("RunConfig: filter list is empty");
  if (!(significance > 0.0 && significance < 1.0)) throw DomainError("RunConfig: significance must lie in (0, 1)");
  phantom.validate();
  filter_config(filters.front(), looks_list.front()).validate();
}

FilterConfig RunConfig::filter_config(FilterMethod method, double looks) const {
  FilterConfig fc;
  fc.method = method;
  fc.significance = significance;
  fc.looks_mode = looks_mode;
  fc.nominal_looks = looks;
  fc.degrees_of_freedom = degrees_of_freedom;
  fc.region_union = region_union;
  fc.window_side = method == FilterMethod::mean ? 3 : lee_window;
  fc.threads = 1;
  return fc;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_real(item, "list"));
  if (out.empty()) throw DomainError("empty list");
  return out;
}

std::vector<FilterMethod> parse_filter_list(const std::string& text) {
  std::vector<FilterMethod> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_filter_method(item));
  if (out.empty()) throw DomainError("empty filter list");
  return out;
}

LooksMode parse_looks_mode(const std::string& text) {
  if (text == "pooled" || text == "pooled-mle") return LooksMode::pooled_mle;
  if (text == "fixed") return LooksMode::fixed;
  throw DomainError("unknown looks mode '" + text + "' (expected pooled or fixed)");
}

RegionUnion parse_region_union(const std::string& text) {
  if (text == "multiset") return RegionUnion::multiset;
  if (text == "distinct") return RegionUnion::distinct;
  throw DomainError("unknown region union '" + text + "' (expected multiset or distinct)");
}

void apply_ini(RunConfig& config, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';' || t[0] == '[') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw DomainError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key == "replicates") {
      config.replicates = static_cast<int>(parse_integer(value, key));
    } else if (key == "looks") {
      config.looks_list = parse_real_list(value);
    } else if (key == "filters") {
      config.filters = parse_filter_list(value);
    } else if (key == "significance") {
      config.significance = parse_real(value, key);
    } else if (key == "seed") {
      config.base_seed = static_cast<std::uint64_t>(parse_integer(value, key));
    } else if (key == "side") {
      config.phantom.side = static_cast<std::size_t>(parse_integer(value, key));
    } else if (key == "background_mean") {
      config.phantom.background_mean = parse_real(value, key);
    } else if (key == "line_mean") {
      config.phantom.line_mean = parse_real(value, key);
    } else if (key == "geometry") {
      config.phantom.geometry = value;
    } else if (key == "looks_mode") {
      config.looks_mode = parse_looks_mode(value);
    } else if (key == "region_union") {
      config.region_union = parse_region_union(value);
    } else if (key == "degrees_of_freedom") {
      config.degrees_of_freedom = static_cast<int>(parse_integer(value, key));
    } else if (key == "lee_window") {
      config.lee_window = static_cast<int>(parse_integer(value, key));
    } else if (key == "threads") {
      config.threads = static_cast<unsigned>(parse_integer(value, key));
    } else {
      throw DomainError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
}

std::string format_manifest(const RunConfig& config) {
  std::string filters;
  for (std::size_t i = 0; i < config.filters.size(); ++i) {
    if (i) filters += ',';
    filters += to_string(config.filters[i]);
  }
  std::ostringstream out;
  out << "# effective run configuration; seed of replicate r is seed + r\n"
      << "replicates = " << config.replicates << '\n'
      << "looks = " << join_reals(config.looks_list) << '\n'
      << "filters = " << filters << '\n'
      << "significance = " << format_real(config.significance) << '\n'
      << "seed = " << config.base_seed << '\n'
      << "side = " << config.phantom.side << '\n'
      << "background_mean = " << format_real(config.phantom.background_mean) << '\n'
      << "line_mean = " << format_real(config.phantom.line_mean) << '\n'
      << "geometry = " << config.phantom.geometry << '\n'
      << "looks_mode = " << (config.looks_mode == LooksMode::fixed ? "fixed" : "pooled") << '\n'
      << "region_union = " << (config.region_union == RegionUnion::distinct ? "distinct" : "multiset") << '\n'
      << "degrees_of_freedom = " << config.degrees_of_freedom << '\n'
      << "lee_window = " << config.lee_window << '\n';
  return out.str();
}

ProtocolResult run_protocol(const RunConfig& config) {
  config.validate();
  const Phantom phantom = generate_phantom(config.phantom);
  const std::size_t n_looks = config.looks_list.size();
  const std::size_t n_filters = config.filters.size();
  const auto n_reps = static_cast<std::size_t>(config.replicates);

  ProtocolResult result;
  result.records.resize(n_looks * n_filters * n_reps);
  auto slot = [&](std::size_t li, std::size_t fi, std::size_t r) -> MetricsRecord& {
    return result.records[(li * n_filters + fi) * n_reps + r];
  };
  std::atomic<int> failed{0};

  parallel_for_chunks(n_looks * n_reps, config.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t task = begin; task < end; ++task) {
      const std::size_t li = task / n_reps;
      const std::size_t r = task % n_reps;
      const double looks = config.looks_list[li];
      IntensityRaster noisy;
      bool corrupted = true;
      try {
        noisy = corrupt(phantom.truth, looks, config.base_seed + r);
      } catch (const std::exception&) {
        corrupted = false;
      }
      for (std::size_t fi = 0; fi < n_filters; ++fi) {
        MetricsRecord& rec = slot(li, fi, r);
        try {
          if (!corrupted) throw NumericalError("corruption failed");
          const IntensityRaster filtered = filter_image(noisy, config.filter_config(config.filters[fi], looks));
          rec = compute_metrics(filtered, phantom, config.phantom);
        } catch (const std::exception&) {
          const double nan = std::numeric_limits<double>::quiet_NaN();
          rec = MetricsRecord{};
          rec.nel = rec.line_pres = rec.edge_grad = rec.edge_var = rec.q_index = rec.beta_rho = nan;
          rec.flags = kFlagFailed;
          failed.fetch_add(1, std::memory_order_relaxed);
        }
        rec.replicate = static_cast<int>(r);
        rec.looks = looks;
        rec.filter_name = std::string(to_string(config.filters[fi]));
      }
    }
  });
  result.failed = failed.load();
  return result;
}

std::string format_records_csv(const std::vector<MetricsRecord>& records) {
  std::string out = kRecordsHeader;
  out += '\n';
  for (const auto& r : records) {
    out += std::to_string(r.replicate);
    for (const double v : {r.looks}) out += ',' + format_real(v);
    out += ',' + r.filter_name;
    for (const double v : {r.nel, r.line_pres, r.edge_grad, r.edge_var, r.q_index, r.beta_rho}) {
      out += ',' + format_real(v);
    }
    out += ',' + format_flags(r.flags);
    out += '\n';
  }
  return out;
}

std::vector<MetricsRecord> parse_records_csv(const std::string& text) {
  std::vector<MetricsRecord> records;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t line_offset = pos;
    pos = eol + 1;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kRecordsHeader) throw ParseError("unexpected CSV header", line_offset);
      header_seen = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 10) throw ParseError("expected 10 fields, got " + std::to_string(fields.size()), line_offset);
    try {
      MetricsRecord r;
      r.replicate = static_cast<int>(parse_integer(fields[0], "replicate"));
      r.looks = parse_real(fields[1], "looks");
      r.filter_name = fields[2];
      r.nel = parse_real(fields[3], "nel");
      r.line_pres = parse_real(fields[4], "line_pres");
      r.edge_grad = parse_real(fields[5], "edge_grad");
      r.edge_var = parse_real(fields[6], "edge_var");
      r.q_index = parse_real(fields[7], "q_index");
      r.beta_rho = parse_real(fields[8], "beta_rho");
      r.flags = parse_flags(fields[9]);
      records.push_back(std::move(r));
    } catch (const DomainError& e) {
      throw ParseError(e.what(), line_offset);
    }
  }
  if (!header_seen) throw ParseError("missing CSV header", 0);
  return records;
}

}  // namespace despeckle
