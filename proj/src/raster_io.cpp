#include "despeckle/raster_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "despeckle/errors.hpp"

namespace despeckle::io {

namespace {

struct Header {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t payload_offset = 0;
};

std::size_t parse_dimension(const std::string& bytes, std::size_t& pos, char terminator) {
  const std::size_t start = pos;
  std::size_t value = 0;
  while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
    value = value * 10 + static_cast<std::size_t>(bytes[pos] - '0');
    if (value > (1u << 20)) throw ParseError("dimension too large", start);
    ++pos;
  }
  if (pos == start) throw ParseError("expected a decimal dimension", start);
  if (pos >= bytes.size() || bytes[pos] != terminator) throw ParseError("malformed header", pos);
  ++pos;
  return value;
}

Header parse_header(const std::string& bytes, const std::string& magic) {
  const std::string prefix = magic + " ";
  if (bytes.compare(0, prefix.size(), prefix) != 0) {
    throw ParseError("missing '" + magic + "' header", 0);
  }
  Header h;
  std::size_t pos = prefix.size();
  h.width = parse_dimension(bytes, pos, ' ');
  h.height = parse_dimension(bytes, pos, '\n');
  if (h.width == 0 || h.height == 0) throw ParseError("zero dimension", prefix.size());
  h.payload_offset = pos;
  return h;
}

void check_payload(const std::string& bytes, const Header& h, std::size_t bytes_per_pixel) {
  const std::size_t expected = h.payload_offset + h.width * h.height * bytes_per_pixel;
  if (bytes.size() < expected) throw ParseError("truncated payload", bytes.size());
  if (bytes.size() > expected) throw ParseError("trailing bytes after payload", expected);
}

std::string header_line(const std::string& magic, std::size_t width, std::size_t height) {
  return magic + " " + std::to_string(width) + " " + std::to_string(height) + "\n";
}

}  // namespace

std::string encode_raster(const IntensityRaster& raster) {
  std::string out = header_line("RASTER", raster.width(), raster.height());
  out.reserve(out.size() + raster.size() * 8);
  for (double v : raster.data()) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
  }
  return out;
}

IntensityRaster decode_raster(const std::string& bytes) {
  const Header h = parse_header(bytes, "RASTER");
  check_payload(bytes, h, 8);
  std::vector<double> values(h.width * h.height);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + h.payload_offset);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(p[8 * i + b]) << (8 * b);
    values[i] = std::bit_cast<double>(bits);
  }
  return IntensityRaster(h.width, h.height, std::move(values));
}

std::string encode_labels(const LabelRaster& labels) {
  std::string out = header_line("LABELS", labels.width(), labels.height());
  for (Label l : labels.data()) out.push_back(static_cast<char>(l));
  return out;
}

LabelRaster decode_labels(const std::string& bytes) {
  const Header h = parse_header(bytes, "LABELS");
  check_payload(bytes, h, 1);
  std::vector<Label> values(h.width * h.height);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto byte = static_cast<unsigned char>(bytes[h.payload_offset + i]);
    if (byte > 3) throw ParseError("invalid label value " + std::to_string(byte), h.payload_offset + i);
    values[i] = static_cast<Label>(byte);
  }
  return LabelRaster(h.width, h.height, std::move(values));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_raster(const IntensityRaster& raster, const std::filesystem::path& path) {
  write_file(path, encode_raster(raster));
}

IntensityRaster read_raster(const std::filesystem::path& path) { return decode_raster(read_file(path)); }

void write_labels(const LabelRaster& labels, const std::filesystem::path& path) {
  write_file(path, encode_labels(labels));
}

LabelRaster read_labels(const std::filesystem::path& path) { return decode_labels(read_file(path)); }

std::string encode_pgm(const IntensityRaster& raster) {
  const auto values = raster.data();
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = values.empty() ? 0.0 : *lo_it;
  const double hi = values.empty() ? 0.0 : *hi_it;
  char comment[96];
  std::snprintf(comment, sizeof comment, "# linear min=%.9g max=%.9g\n", lo, hi);
  std::string out = "P5\n";
  out += comment;
  out += std::to_string(raster.width()) + " " + std::to_string(raster.height()) + "\n65535\n";
  const double span = hi - lo;
  for (double v : values) {
    const double t = span > 0.0 ? (v - lo) / span : 0.0;
    const auto q = static_cast<std::uint16_t>(std::lround(std::clamp(t, 0.0, 1.0) * 65535.0));
    out.push_back(static_cast<char>(q >> 8));
    out.push_back(static_cast<char>(q & 0xffu));
  }
  return out;
}

void export_pgm(const IntensityRaster& raster, const std::filesystem::path& path) {
  write_file(path, encode_pgm(raster));
}

}  // namespace despeckle::io
