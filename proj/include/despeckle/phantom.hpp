#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "despeckle/raster.hpp"

namespace despeckle {

/// Axis-aligned square [row, row + side) × [col, col + side).
struct PixelRect {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t side = 0;

  bool contains(std::size_t r, std::size_t c) const {
    return r >= row && r < row + side && c >= col && c < col + side;
  }
};

/// Phantom layout, geometry "lines-block-v1" for a side S:
///
///   - background at background_mean;
///   - a vertical line (column S/8) and a horizontal line (row S/8) spanning
///     the raster, and a diagonal line col = row + S/2 for rows [0, S/2),
///     all one pixel wide at line_mean;
///   - a square block of side S/4 centred in the raster at line_mean; pixels
///     within two pixels of its perimeter (both sides) are labeled edge-band;
///   - a background square of side S/4 at (11S/16, 11S/16) reserved for ENL.
struct PhantomSpec {
  std::size_t side = 256;
  double background_mean = 30.0;
  double line_mean = 120.0;
  std::string geometry = "lines-block-v1";

  void validate() const;

  std::size_t line_offset() const { return side / 8; }
  std::size_t diagonal_shift() const { return side / 2; }
  PixelRect block() const;
  PixelRect enl_patch() const;
  static constexpr std::size_t kEdgeHalfWidth = 2;
};

struct Phantom {
  IntensityRaster truth;
  LabelRaster labels;
};

/// Throws GeometryError when the structures collide at the requested side.
Phantom generate_phantom(const PhantomSpec& spec);

/// Each pixel drawn independently from Γ(looks, looks / truth(r, c)).
/// Pixels are drawn in row-major order from one generator seeded with `seed`.
IntensityRaster corrupt(const IntensityRaster& truth, double looks, std::uint64_t seed);

/// Pixels of `image` inside `rect`, row-major.
std::vector<double> extract_rect(const IntensityRaster& image, const PixelRect& rect);

}  // namespace despeckle
