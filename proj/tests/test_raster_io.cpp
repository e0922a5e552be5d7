#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <limits>

#include "despeckle/errors.hpp"
#include "despeckle/raster_io.hpp"
#include "oracles.hpp"

using namespace despeckle;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "despeckle_io_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::size_t parse_error_offset(const std::string& bytes, bool labels = false) {
  try {
    if (labels)
      io::decode_labels(bytes);
    else
      io::decode_raster(bytes);
  } catch (const ParseError& e) {
    return e.offset();
  }
  FAIL("no ParseError");
  return 0;
}

}  // namespace

TEST_CASE("native raster byte layout") {
  const IntensityRaster r(2, 2, std::vector<double>{1.5, 2.5, 3.5, 4.5});
  const std::string bytes = io::encode_raster(r);
  const std::string header = "RASTER 2 2\n";
  REQUIRE(bytes.size() == header.size() + 32);
  CHECK(bytes.substr(0, header.size()) == header);
  // 1.5 = 0x3FF8000000000000, little-endian.
  const unsigned char first[8] = {0, 0, 0, 0, 0, 0, 0xF8, 0x3F};
  CHECK(std::memcmp(bytes.data() + header.size(), first, 8) == 0);
  const unsigned char last[8] = {0, 0, 0, 0, 0, 0, 0x12, 0x40};
  CHECK(std::memcmp(bytes.data() + header.size() + 24, last, 8) == 0);
  CHECK(io::decode_raster(bytes) == r);
}

TEST_CASE("native raster round trip is bit exact") {
  IntensityRaster r = oracle::random_raster(13, 7, 5, 1e-300, 1e300);
  r(0, 0) = std::numeric_limits<double>::denorm_min();
  r(6, 12) = 0.1;
  const auto path = scratch("rt.ras");
  io::write_raster(r, path);
  const IntensityRaster back = io::read_raster(path);
  CHECK(back == r);
  CHECK(io::encode_raster(back) == io::encode_raster(r));
}

TEST_CASE("native raster parse errors carry offsets") {
  const std::string good = io::encode_raster(IntensityRaster(3, 2, 1.0));
  CHECK(parse_error_offset("") == 0);
  CHECK(parse_error_offset("RASTR 3 2\n") == 0);
  CHECK(parse_error_offset("RASTER 3 x\n") == 9);
  CHECK(parse_error_offset("RASTER 0 2\n") == 7);
  CHECK(parse_error_offset(good.substr(0, good.size() - 3)) == good.size() - 3);
  CHECK(parse_error_offset(good + "z") == good.size());
  try {
    io::decode_raster(good + "z");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
  }
  CHECK_THROWS_AS(io::read_raster(scratch("missing.ras")), IoError);
}

TEST_CASE("label round trip and validation") {
  LabelRaster labels(4, 3, Label::background);
  labels(0, 1) = Label::line;
  labels(1, 2) = Label::block;
  labels(2, 3) = Label::edge_band;
  const std::string bytes = io::encode_labels(labels);
  CHECK(bytes.substr(0, 11) == "LABELS 4 3\n");
  CHECK(bytes[11 + 1] == 1);
  CHECK(bytes[11 + 6] == 2);
  CHECK(bytes[11 + 11] == 3);
  CHECK(io::decode_labels(bytes) == labels);
  std::string bad = bytes;
  bad[11 + 5] = 4;
  CHECK(parse_error_offset(bad, true) == 16);
  const auto path = scratch("rt.lbl");
  io::write_labels(labels, path);
  CHECK(io::read_labels(path) == labels);
}

TEST_CASE("pgm export") {
  const IntensityRaster r(3, 1, std::vector<double>{10.0, 20.0, 30.0});
  const std::string pgm = io::encode_pgm(r);
  const std::string header = "P5\n# linear min=10 max=30\n3 1\n65535\n";
  REQUIRE(pgm.size() == header.size() + 6);
  CHECK(pgm.substr(0, header.size()) == header);
  const auto* px = reinterpret_cast<const unsigned char*>(pgm.data() + header.size());
  CHECK(px[0] == 0);
  CHECK(px[1] == 0);
  CHECK((px[2] << 8 | px[3]) == 32768);
  CHECK(px[4] == 0xFF);
  CHECK(px[5] == 0xFF);
  const std::string flat = io::encode_pgm(IntensityRaster(2, 2, 5.0));
  CHECK(flat.substr(flat.size() - 8) == std::string(8, '\0'));
}
