#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "despeckle/cli.hpp"
#include "despeckle/montecarlo.hpp"
#include "despeckle/raster_io.hpp"

using namespace despeckle;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "despeckle_cli_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == cli::kExitUsageError);
  CHECK(run({"sharpen"}).code == cli::kExitUsageError);
  CHECK(run({"phantom", "--out", scratch("a.ras")}).code == cli::kExitUsageError);
  CHECK(run({"phantom", "--out", scratch("a.ras"), "--labels", scratch("a.lbl"), "--colour", "red"}).code ==
        cli::kExitUsageError);
  CHECK(run({"phantom", "--out", scratch("a.ras"), "--labels", scratch("a.lbl"), "--side", "10"}).code ==
        cli::kExitUsageError);
  CHECK(run({"filter", "--in", "x.ras", "--out", "y.ras", "--method", "median"}).code == cli::kExitUsageError);
  CHECK(run({"filter", "--in", "x.ras", "--out", "y.ras", "--significance", "2"}).code == cli::kExitUsageError);
}

TEST_CASE("help exits with 0") {
  const Invocation top = run({"--help"});
  CHECK(top.code == cli::kExitOk);
  CHECK(top.out.find("montecarlo") != std::string::npos);
  CHECK(run({"filter", "--help"}).code == cli::kExitOk);
}

TEST_CASE("runtime errors exit with 1") {
  const Invocation missing = run({"corrupt", "--in", scratch("nope.ras"), "--out", scratch("o.ras")});
  CHECK(missing.code == cli::kExitRuntimeError);
  CHECK(missing.err.find("error") != std::string::npos);
  io::write_file(scratch("garbage.ras"), "RASTER 2 2\nshort");
  const Invocation garbage = run({"filter", "--in", scratch("garbage.ras"), "--out", scratch("o.ras")});
  CHECK(garbage.code == cli::kExitRuntimeError);
  CHECK(garbage.err.find("byte offset") != std::string::npos);
}

TEST_CASE("single image pipeline") {
  const auto truth = scratch("truth.ras"), labels = scratch("truth.lbl"), noisy = scratch("noisy.ras");
  const auto kl = scratch("kl.ras"), lee = scratch("lee.ras"), met = scratch("met.csv");
  REQUIRE(run({"phantom", "--side", "64", "--out", truth, "--labels", labels, "--pgm", scratch("truth.pgm")}).code ==
          0);
  REQUIRE(run({"corrupt", "--in", truth, "--out", noisy, "--looks", "4", "--seed", "3"}).code == 0);
  REQUIRE(run({"filter", "--in", noisy, "--out", kl, "--method", "kl"}).code == 0);
  REQUIRE(run({"filter", "--in", noisy, "--out", lee, "--method", "lee", "--looks", "4"}).code == 0);
  CHECK(io::read_raster(kl).same_shape(io::read_raster(noisy)));
  CHECK_FALSE(io::read_raster(kl) == io::read_raster(lee));
  REQUIRE(run({"metrics", "--filtered", kl, "--truth", truth, "--labels", labels, "--out", met}).code == 0);
  const std::string csv = io::read_file(met);
  CHECK(csv.rfind("nel,line_pres,edge_grad,edge_var,q_index,beta_rho,flags\n", 0) == 0);
  const Invocation printed = run({"metrics", "--filtered", kl, "--truth", truth, "--labels", labels});
  CHECK(printed.out == csv);
  CHECK(run({"metrics", "--filtered", noisy, "--truth", truth, "--labels", scratch("garbage.ras")}).code ==
        cli::kExitRuntimeError);
}

TEST_CASE("montecarlo and report") {
  const auto ini = scratch("run.ini"), records = scratch("records.csv"), summary = scratch("summary.csv");
  io::write_file(ini, "replicates = 5\nlooks = 4\nside = 64\nfilters = kl, lee\n");
  const Invocation mc = run({"montecarlo", "--config", ini, "--replicates", "2", "--out", records});
  REQUIRE(mc.code == 0);
  const auto recs = parse_records_csv(io::read_file(records));
  CHECK(recs.size() == 4);
  const std::string manifest = io::read_file(records + ".manifest");
  CHECK(manifest.find("replicates = 2") != std::string::npos);
  CHECK(manifest.find("side = 64") != std::string::npos);

  const Invocation rep = run({"report", "--in", records, "--out", summary, "--svg", scratch("box.svg")});
  REQUIRE(rep.code == 0);
  CHECK(rep.out.rfind("looks,filter,", 0) == 0);
  CHECK(io::read_file(summary).rfind("looks,filter,metric,count,mean,sd,median,q1,q3,min,max,excluded,flags\n", 0) ==
        0);
  CHECK(io::read_file(scratch("box.svg")).find("</svg>") != std::string::npos);

  CHECK(run({"montecarlo", "--out", records, "--replicates", "0"}).code == cli::kExitUsageError);
  io::write_file(ini, "colour = red\n");
  CHECK(run({"montecarlo", "--config", ini, "--out", records}).code == cli::kExitUsageError);
}
