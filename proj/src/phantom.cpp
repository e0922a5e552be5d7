#include "despeckle/phantom.hpp"

#include <cmath>
#include <string>

#include "despeckle/errors.hpp"
#include "despeckle/random.hpp"

namespace despeckle {

namespace {

constexpr const char* kGeometry = "lines-block-v1";

bool on_line(const PhantomSpec& spec, std::size_t r, std::size_t c) {
  const std::size_t off = spec.line_offset();
  if (r == off || c == off) return true;
  return r < spec.diagonal_shift() && c == r + spec.diagonal_shift();
}

}  // namespace

void PhantomSpec::validate() const {
  if (geometry != kGeometry) throw GeometryError("PhantomSpec: unknown geometry '" + geometry + "'");
  if (side < 64) throw GeometryError("PhantomSpec: side must be at least 64");
  if (!(background_mean > 0.0) || !(line_mean > 0.0)) {
    throw DomainError("PhantomSpec: means must be positive");
  }
  if (background_mean == line_mean) throw DomainError("PhantomSpec: line mean must differ from background");
}

PixelRect PhantomSpec::block() const {
  const std::size_t s = side / 4;
  return {(side - s) / 2, (side - s) / 2, s};
}

PixelRect PhantomSpec::enl_patch() const { return {side * 11 / 16, side * 11 / 16, side / 4}; }

Phantom generate_phantom(const PhantomSpec& spec) {
  spec.validate();
  const std::size_t n = spec.side;
  const PixelRect block = spec.block();
  const std::size_t h = PhantomSpec::kEdgeHalfWidth;
  const PixelRect outer{block.row - h, block.col - h, block.side + 2 * h};
  const PixelRect inner{block.row + h, block.col + h, block.side - 2 * h};
  const PixelRect patch = spec.enl_patch();
  if (patch.row + patch.side > n || patch.row < outer.row + outer.side + h) {
    throw GeometryError("generate_phantom: ENL patch does not fit beside the block");
  }

  Phantom ph{IntensityRaster(n, n, spec.background_mean), LabelRaster(n, n, Label::background)};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const bool line = on_line(spec, r, c);
      const bool in_band = outer.contains(r, c) && !inner.contains(r, c);
      if (line && (outer.contains(r, c) || patch.contains(r, c))) {
        throw GeometryError("generate_phantom: line crosses the block or the ENL patch at side " +
                            std::to_string(n));
      }
      if (line) {
        ph.truth(r, c) = spec.line_mean;
        ph.labels(r, c) = Label::line;
      } else if (block.contains(r, c)) {
        ph.truth(r, c) = spec.line_mean;
        ph.labels(r, c) = in_band ? Label::edge_band : Label::block;
      } else if (in_band) {
        ph.labels(r, c) = Label::edge_band;
      }
    }
  }
  return ph;
}

IntensityRaster corrupt(const IntensityRaster& truth, double looks, std::uint64_t seed) {
  if (!(looks > 0.0) || !std::isfinite(looks)) throw DomainError("corrupt: looks must be positive");
  Rng rng(seed);
  IntensityRaster out(truth.width(), truth.height());
  for (std::size_t r = 0; r < truth.height(); ++r) {
    for (std::size_t c = 0; c < truth.width(); ++c) {
      const double lambda = truth(r, c);
      if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("corrupt: truth pixel (" + std::to_string(r) + ", " + std::to_string(c) +
                          ") is not positive");
      }
      double z = 0.0;
      do {
        z = rng.gamma(looks, looks / lambda);
      } while (!(z > 0.0));
      out(r, c) = z;
    }
  }
  return out;
}

std::vector<double> extract_rect(const IntensityRaster& image, const PixelRect& rect) {
  if (rect.row + rect.side > image.height() || rect.col + rect.side > image.width()) {
    throw DomainError("extract_rect: rectangle outside the raster");
  }
  std::vector<double> out;
  out.reserve(rect.side * rect.side);
  for (std::size_t r = rect.row; r < rect.row + rect.side; ++r)
    for (std::size_t c = rect.col; c < rect.col + rect.side; ++c) out.push_back(image(r, c));
  return out;
}

}  // namespace despeckle
