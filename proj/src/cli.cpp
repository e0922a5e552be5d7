#include "despeckle/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>

#include "despeckle/errors.hpp"
#include "despeckle/filters.hpp"
#include "despeckle/metrics.hpp"
#include "despeckle/montecarlo.hpp"
#include "despeckle/phantom.hpp"
#include "despeckle/raster_io.hpp"
#include "despeckle/report.hpp"

namespace despeckle::cli {

namespace {

// Bad flag values found after CLI11 parsing; mapped to the usage exit code.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

template <typename Fn>
auto as_usage(Fn&& fn) {
  try {
    return fn();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  } catch (const GeometryError& e) {
    throw UsageError(e.what());
  }
}

struct PhantomArgs {
  std::size_t side = 256;
  double background = 30.0;
  double line = 120.0;
  std::string out;
  std::string labels;
  std::string pgm;
};

struct CorruptArgs {
  std::string in;
  std::string out;
  double looks = 1.0;
  std::uint64_t seed = 1;
  std::string pgm;
};

struct FilterArgs {
  std::string method = "kl";
  std::string in;
  std::string out;
  double significance = 0.05;
  std::string looks_mode = "pooled";
  double looks = 1.0;
  int window = 5;
  int df = 1;
  std::string region_union = "multiset";
  unsigned threads = 1;
  std::string pgm;
};

struct MetricsArgs {
  std::string filtered;
  std::string truth;
  std::string labels;
  std::string out;
};

struct MonteCarloArgs {
  std::string config;
  int replicates = 100;
  std::string looks = "1,4";
  std::string filters = "kl,lee";
  double significance = 0.05;
  std::uint64_t seed = 1;
  std::size_t side = 256;
  std::string looks_mode = "pooled";
  std::string region_union = "multiset";
  int df = 1;
  int lee_window = 5;
  unsigned threads = 1;
  std::string out;
  std::string manifest;
  std::string summary;
  std::string svg;
};

struct ReportArgs {
  std::string in;
  std::string out;
  std::string svg;
  std::string table;
};

int run_phantom(const PhantomArgs& a, std::ostream& out) {
  PhantomSpec spec;
  spec.side = a.side;
  spec.background_mean = a.background;
  spec.line_mean = a.line;
  const Phantom ph = as_usage([&] { return generate_phantom(spec); });
  io::write_raster(ph.truth, a.out);
  io::write_labels(ph.labels, a.labels);
  if (!a.pgm.empty()) io::export_pgm(ph.truth, a.pgm);
  out << "wrote " << a.out << " and " << a.labels << '\n';
  return kExitOk;
}

int run_corrupt(const CorruptArgs& a, std::ostream& out) {
  if (!(a.looks > 0.0)) throw UsageError("--looks must be positive");
  const IntensityRaster truth = io::read_raster(a.in);
  const IntensityRaster noisy = corrupt(truth, a.looks, a.seed);
  io::write_raster(noisy, a.out);
  if (!a.pgm.empty()) io::export_pgm(noisy, a.pgm);
  out << "wrote " << a.out << '\n';
  return kExitOk;
}

int run_filter(const FilterArgs& a, std::ostream& out) {
  FilterConfig config = as_usage([&] {
    FilterConfig c;
    c.method = parse_filter_method(a.method);
    c.significance = a.significance;
    c.looks_mode = parse_looks_mode(a.looks_mode);
    c.nominal_looks = a.looks;
    c.window_side = a.window;
    c.degrees_of_freedom = a.df;
    c.region_union = parse_region_union(a.region_union);
    c.threads = a.threads;
    c.validate();
    return c;
  });
  const IntensityRaster image = io::read_raster(a.in);
  const IntensityRaster filtered = filter_image(image, config);
  io::write_raster(filtered, a.out);
  if (!a.pgm.empty()) io::export_pgm(filtered, a.pgm);
  out << "wrote " << a.out << '\n';
  return kExitOk;
}

int run_metrics(const MetricsArgs& a, std::ostream& out) {
  const IntensityRaster filtered = io::read_raster(a.filtered);
  Phantom ph{io::read_raster(a.truth), io::read_labels(a.labels)};
  if (!filtered.same_shape(ph.truth) || !filtered.same_shape(ph.labels)) {
    throw UsageError("filtered, truth and label rasters must share dimensions");
  }
  if (filtered.width() != filtered.height()) throw UsageError("metrics expects a square phantom raster");
  PhantomSpec spec;
  spec.side = filtered.width();
  const MetricsRecord rec = compute_metrics(filtered, ph, spec);
  std::string csv = "nel,line_pres,edge_grad,edge_var,q_index,beta_rho,flags\n";
  for (double v : {rec.nel, rec.line_pres, rec.edge_grad, rec.edge_var, rec.q_index, rec.beta_rho}) {
    csv += format_real(v) + ',';
  }
  csv += format_flags(rec.flags) + '\n';
  if (a.out.empty()) {
    out << csv;
  } else {
    io::write_file(a.out, csv);
  }
  return kExitOk;
}

int run_montecarlo(const MonteCarloArgs& a, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  RunConfig config;
  as_usage([&] {
    if (!a.config.empty()) apply_ini(config, io::read_file(a.config));
    auto given = [&](const char* name) { return sub.get_option(name)->count() > 0; };
    if (given("--replicates")) config.replicates = a.replicates;
    if (given("--looks")) config.looks_list = parse_real_list(a.looks);
    if (given("--filters")) config.filters = parse_filter_list(a.filters);
    if (given("--significance")) config.significance = a.significance;
    if (given("--seed")) config.base_seed = a.seed;
    if (given("--side")) config.phantom.side = a.side;
    if (given("--looks-mode")) config.looks_mode = parse_looks_mode(a.looks_mode);
    if (given("--union")) config.region_union = parse_region_union(a.region_union);
    if (given("--df")) config.degrees_of_freedom = a.df;
    if (given("--lee-window")) config.lee_window = a.lee_window;
    if (given("--threads")) config.threads = a.threads;
    config.validate();
    return 0;
  });

  const ProtocolResult result = run_protocol(config);
  io::write_file(a.out, format_records_csv(result.records));
  const std::string manifest_path = a.manifest.empty() ? a.out + ".manifest" : a.manifest;
  std::string manifest = format_manifest(config);
  manifest += "# outputs\n# records = " + a.out + "\n";
  if (!a.summary.empty()) manifest += "# summary = " + a.summary + "\n";
  if (!a.svg.empty()) manifest += "# svg = " + a.svg + "\n";
  io::write_file(manifest_path, manifest);
  if (!a.summary.empty() || !a.svg.empty()) {
    std::vector<std::string> warnings;
    const auto rows = summarize(result.records, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << '\n';
    if (!a.summary.empty()) io::write_file(a.summary, format_summary_csv(rows));
    if (!a.svg.empty()) io::write_file(a.svg, render_boxplots_svg(result.records));
  }
  out << "wrote " << result.records.size() << " records to " << a.out << '\n';
  if (result.failed > 0) {
    err << "error: " << result.failed << " replicate/filter runs failed (flagged in " << a.out << ")\n";
    return kExitRuntimeError;
  }
  return kExitOk;
}

int run_report(const ReportArgs& a, std::ostream& out, std::ostream& err) {
  const auto records = parse_records_csv(io::read_file(a.in));
  std::vector<std::string> warnings;
  const auto rows = summarize(records, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  io::write_file(a.out, format_summary_csv(rows));
  const std::string table = format_table(rows);
  if (!a.table.empty()) io::write_file(a.table, table);
  if (!a.svg.empty()) io::write_file(a.svg, render_boxplots_svg(records));
  out << table;
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"SAR speckle filtering with stochastic-distance tests", "despeckle"};
  app.require_subcommand(1);

  PhantomArgs pa;
  auto* phantom = app.add_subcommand("phantom", "Write the ground-truth phantom and its labels");
  phantom->add_option("--side", pa.side, "Raster side in pixels")->capture_default_str();
  phantom->add_option("--background", pa.background, "Background mean intensity")->capture_default_str();
  phantom->add_option("--line", pa.line, "Line and block mean intensity")->capture_default_str();
  phantom->add_option("--out", pa.out, "Output raster (.ras)")->required();
  phantom->add_option("--labels", pa.labels, "Output label raster")->required();
  phantom->add_option("--pgm", pa.pgm, "Also export a 16-bit PGM preview");

  CorruptArgs ca;
  auto* corrupt_cmd = app.add_subcommand("corrupt", "Apply Gamma speckle to a truth raster");
  corrupt_cmd->add_option("--in", ca.in, "Truth raster")->required();
  corrupt_cmd->add_option("--out", ca.out, "Speckled raster")->required();
  corrupt_cmd->add_option("--looks", ca.looks, "Number of looks")->capture_default_str();
  corrupt_cmd->add_option("--seed", ca.seed, "Generator seed")->capture_default_str();
  corrupt_cmd->add_option("--pgm", ca.pgm, "Also export a 16-bit PGM preview");

  FilterArgs fa;
  auto* filter = app.add_subcommand("filter", "Filter one raster");
  filter->add_option("--method", fa.method, "kl, lee or mean")->capture_default_str();
  filter->add_option("--in", fa.in, "Input raster")->required();
  filter->add_option("--out", fa.out, "Output raster")->required();
  filter->add_option("--significance", fa.significance, "Test level")->capture_default_str();
  filter->add_option("--looks-mode", fa.looks_mode, "pooled or fixed")->capture_default_str();
  filter->add_option("--looks", fa.looks, "Nominal looks (Lee, fixed mode)")->capture_default_str();
  filter->add_option("--window", fa.window, "Lee / mean window side")->capture_default_str();
  filter->add_option("--df", fa.df, "Chi-square degrees of freedom")->capture_default_str();
  filter->add_option("--union", fa.region_union, "multiset or distinct")->capture_default_str();
  filter->add_option("--threads", fa.threads, "Worker threads (0 = all cores)")->capture_default_str();
  filter->add_option("--pgm", fa.pgm, "Also export a 16-bit PGM preview");

  MetricsArgs ma;
  auto* metrics = app.add_subcommand("metrics", "Quality measures of a filtered phantom replicate");
  metrics->add_option("--filtered", ma.filtered, "Filtered raster")->required();
  metrics->add_option("--truth", ma.truth, "Phantom truth raster")->required();
  metrics->add_option("--labels", ma.labels, "Phantom labels")->required();
  metrics->add_option("--out", ma.out, "CSV output (default stdout)");

  MonteCarloArgs mc;
  auto* montecarlo = app.add_subcommand("montecarlo", "Run the Monte Carlo protocol");
  montecarlo->add_option("--config", mc.config, "INI file with key = value defaults");
  montecarlo->add_option("--replicates", mc.replicates, "Replicates per looks level")->capture_default_str();
  montecarlo->add_option("--looks", mc.looks, "Comma-separated looks levels")->capture_default_str();
  montecarlo->add_option("--filters", mc.filters, "Comma-separated filters")->capture_default_str();
  montecarlo->add_option("--significance", mc.significance, "Test level")->capture_default_str();
  montecarlo->add_option("--seed", mc.seed, "Base seed; replicate r uses seed + r")->capture_default_str();
  montecarlo->add_option("--side", mc.side, "Phantom side")->capture_default_str();
  montecarlo->add_option("--looks-mode", mc.looks_mode, "pooled or fixed")->capture_default_str();
  montecarlo->add_option("--union", mc.region_union, "multiset or distinct")->capture_default_str();
  montecarlo->add_option("--df", mc.df, "Chi-square degrees of freedom")->capture_default_str();
  montecarlo->add_option("--lee-window", mc.lee_window, "Lee window side")->capture_default_str();
  montecarlo->add_option("--threads", mc.threads, "Concurrent replicates (0 = all cores)")->capture_default_str();
  montecarlo->add_option("--out", mc.out, "Records CSV")->required();
  montecarlo->add_option("--manifest", mc.manifest, "Run manifest (default <out>.manifest)");
  montecarlo->add_option("--summary", mc.summary, "Also write the summary CSV");
  montecarlo->add_option("--svg", mc.svg, "Also write the boxplot SVG");

  ReportArgs ra;
  auto* report = app.add_subcommand("report", "Summarize a records CSV");
  report->add_option("--in", ra.in, "Records CSV")->required();
  report->add_option("--out", ra.out, "Summary CSV")->required();
  report->add_option("--svg", ra.svg, "Boxplot SVG");
  report->add_option("--table", ra.table, "Per-filter table CSV (also printed)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  try {
    if (*phantom) return run_phantom(pa, out);
    if (*corrupt_cmd) return run_corrupt(ca, out);
    if (*filter) return run_filter(fa, out);
    if (*metrics) return run_metrics(ma, out);
    if (*montecarlo) return run_montecarlo(mc, *montecarlo, out, err);
    if (*report) return run_report(ra, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return kExitUsageError;
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, out, err);
}

}  // namespace despeckle::cli
