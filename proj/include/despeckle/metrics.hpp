#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "despeckle/phantom.hpp"
#include "despeckle/raster.hpp"

namespace despeckle {

/// Flag bits carried by a MetricsRecord.
enum MetricFlag : std::uint32_t {
  kFlagNone = 0,
  kFlagEnlDegenerate = 1u << 0,  ///< zero variance in the ENL patch; nel = +inf
  kFlagQDegenerate = 1u << 1,
  kFlagBetaDegenerate = 1u << 2,
  kFlagFailed = 1u << 3,  ///< replicate threw; metrics are NaN
};

/// Pipe-separated flag names, empty when none are set.
std::string format_flags(std::uint32_t flags);
/// Inverse of format_flags; throws DomainError on unknown names.
std::uint32_t parse_flags(const std::string& text);

struct MetricsRecord {
  double nel = 0.0;
  double line_pres = 0.0;
  double edge_grad = 0.0;
  double edge_var = 0.0;
  double q_index = 0.0;
  double beta_rho = 0.0;
  int replicate = 0;
  double looks = 0.0;
  std::string filter_name;
  std::uint32_t flags = kFlagNone;
};

/// mean² / variance (n - 1). Throws DegenerateSampleError on zero variance.
double enl(std::span<const double> values);

/// Mean over line pixels of |filtered - truth| / truth.
double line_preservation(const IntensityRaster& filtered, const IntensityRaster& truth,
                         const LabelRaster& labels);

/// Mean central-difference gradient magnitude over edge-band pixels.
double edge_gradient(const IntensityRaster& filtered, const LabelRaster& labels);

/// Variance (n - 1) of filtered values over the edge-band pixels that lie
/// inside the block. The block is recovered from the labels as the bounding
/// box of block pixels grown by the band half-width.
double edge_variance(const IntensityRaster& filtered, const LabelRaster& labels);

/// Universal image quality index: correlation × luminance × contrast.
double q_index(const IntensityRaster& x, const IntensityRaster& y);

/// 4-neighbour discrete Laplacian with mirror reflection at the borders.
IntensityRaster laplacian(const IntensityRaster& image);

/// Pearson correlation of the two Laplacians.
double beta_rho(const IntensityRaster& x, const IntensityRaster& y);

/// Pearson correlation of two equal-length sequences (n - 1 convention).
/// Throws DegenerateSampleError when either has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// All six measures of `filtered` against the phantom; degenerate measures
/// are flagged instead of thrown.
MetricsRecord compute_metrics(const IntensityRaster& filtered, const Phantom& phantom,
                              const PhantomSpec& spec);

}  // namespace despeckle
