#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "despeckle/filters.hpp"
#include "despeckle/metrics.hpp"
#include "despeckle/phantom.hpp"

namespace despeckle {

struct RunConfig {
  int replicates = 100;
  std::vector<double> looks_list{1.0, 4.0};
  std::vector<FilterMethod> filters{FilterMethod::kl, FilterMethod::lee};
  double significance = 0.05;
  std::uint64_t base_seed = 1;
  PhantomSpec phantom{};
  LooksMode looks_mode = LooksMode::pooled_mle;
  RegionUnion region_union = RegionUnion::multiset;
  int degrees_of_freedom = 1;
  int lee_window = 5;
  /// Replicates processed concurrently; 0 selects the hardware concurrency.
  unsigned threads = 1;

  void validate() const;

  /// Filter settings used for `method` on images with `looks` looks.
  FilterConfig filter_config(FilterMethod method, double looks) const;
};

/// Applies "key = value" lines onto `config`. Blank lines, lines starting
/// with '#' or ';', and "[section]" headers are ignored. Throws DomainError
/// on unknown keys or unparsable values.
void apply_ini(RunConfig& config, const std::string& text);

/// The effective configuration as "key = value" lines, in apply_ini syntax.
std::string format_manifest(const RunConfig& config);

std::vector<double> parse_real_list(const std::string& text);
std::vector<FilterMethod> parse_filter_list(const std::string& text);
LooksMode parse_looks_mode(const std::string& text);
RegionUnion parse_region_union(const std::string& text);

struct ProtocolResult {
  /// Ordered by (looks, filter, replicate) following the config lists.
  std::vector<MetricsRecord> records;
  int failed = 0;
};

/// Replicate r at every looks level is corrupted with seed base_seed + r;
/// every filter sees the same corrupted image.
ProtocolResult run_protocol(const RunConfig& config);

/// Metrics CSV. Header:
///   replicate,looks,filter,nel,line_pres,edge_grad,edge_var,q_index,beta_rho,flags
/// Reals are printed with 9 significant digits ("%.9g"); inf/nan literal.
std::string format_records_csv(const std::vector<MetricsRecord>& records);
/// Throws ParseError naming the byte offset of the offending line.
std::vector<MetricsRecord> parse_records_csv(const std::string& text);

inline constexpr const char* kRecordsHeader =
    "replicate,looks,filter,nel,line_pres,edge_grad,edge_var,q_index,beta_rho,flags";

/// "%.9g" with "inf", "-inf" and "nan" spelled out.
std::string format_real(double value);

}  // namespace despeckle
