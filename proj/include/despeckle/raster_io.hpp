#pragma once

#include <filesystem>
#include <string>

#include "despeckle/raster.hpp"

namespace despeckle::io {

// Native intensity format:
//   ASCII header "RASTER <width> <height>\n" (single spaces, decimal),
//   then width * height IEEE-754 binary64 values, little-endian, row-major.
// Label format:
//   ASCII header "LABELS <width> <height>\n", then one byte per pixel
//   (0 background, 1 line, 2 block, 3 edge-band), row-major.

std::string encode_raster(const IntensityRaster& raster);
IntensityRaster decode_raster(const std::string& bytes);

std::string encode_labels(const LabelRaster& labels);
LabelRaster decode_labels(const std::string& bytes);

void write_raster(const IntensityRaster& raster, const std::filesystem::path& path);
IntensityRaster read_raster(const std::filesystem::path& path);

void write_labels(const LabelRaster& labels, const std::filesystem::path& path);
LabelRaster read_labels(const std::filesystem::path& path);

/// 16-bit binary PGM (P5, maxval 65535, big-endian samples) for viewing.
/// Values are mapped linearly so the raster minimum becomes 0 and the
/// maximum 65535; a constant raster maps to 0. The header carries the
/// mapping as a comment line "# linear min=<min> max=<max>".
void export_pgm(const IntensityRaster& raster, const std::filesystem::path& path);
std::string encode_pgm(const IntensityRaster& raster);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace despeckle::io
