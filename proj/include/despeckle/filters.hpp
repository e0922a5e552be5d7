#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

#include "despeckle/divergence.hpp"
#include "despeckle/gamma_model.hpp"
#include "despeckle/raster.hpp"
#include "despeckle/window_masks.hpp"

namespace despeckle {

enum class FilterMethod { kl, lee, mean };

/// Source of the shared looks estimate in the KL statistic.
enum class LooksMode {
  pooled_mle,  ///< MLE on the union of the central and the compared region
  fixed,       ///< nominal acquisition looks (FilterConfig::nominal_looks)
};

/// How accepted regions are merged into the local mean.
enum class RegionUnion {
  multiset,  ///< each mask contributes all its pixels, overlaps counted per mask
  distinct,  ///< every window pixel counted at most once
};

enum class BorderPolicy { mirror };

struct FilterConfig {
  FilterMethod method = FilterMethod::kl;
  double significance = 0.05;
  LooksMode looks_mode = LooksMode::pooled_mle;
  /// Fixed looks for LooksMode::fixed and the noise level of the Lee filter.
  double nominal_looks = 1.0;
  int degrees_of_freedom = 1;
  RegionUnion region_union = RegionUnion::multiset;
  BorderPolicy border_policy = BorderPolicy::mirror;
  LooksRange looks_range{};
  /// Window side of the Lee and mean filters.
  int window_side = 5;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threads = 1;

  void validate() const;
};

std::string_view to_string(FilterMethod method);
/// Throws DomainError on unknown names ("kl", "lee", "mean").
FilterMethod parse_filter_method(std::string_view name);

/// Nine samples around (row, col): index 0 is the central 3×3, 1–8 the
/// directional regions, read with mirror reflection at the borders.
std::array<RegionSample, WindowMaskSet::kCount> extract_regions(
    const IntensityRaster& image, std::size_t row, std::size_t col,
    const WindowMaskSet& masks = WindowMaskSet::nagao_matsuyama());

struct KlPixelResult {
  double value = 0.0;
  /// Tests of regions 1–8 against the central sample.
  std::array<TestOutcome, WindowMaskSet::kCount - 1> outcomes{};
  std::array<double, WindowMaskSet::kCount - 1> shared_looks{};
  int accepted_count = 0;
};

KlPixelResult filter_pixel_kl_detailed(const IntensityRaster& image, std::size_t row, std::size_t col,
                                       const WindowMaskSet& masks, const FilterConfig& config);

/// Mean of the central sample pooled with every region whose KL test at
/// level config.significance accepts equality with it; the central 3×3 mean
/// when all eight are rejected.
double filter_pixel_kl(const IntensityRaster& image, std::size_t row, std::size_t col,
                       const WindowMaskSet& masks, const FilterConfig& config);

/// Applies config.method to every pixel. Reads only from `image`, so the
/// result does not depend on the number of threads. Throws DomainError
/// naming the first nonpositive pixel.
IntensityRaster filter_image(const IntensityRaster& image, const FilterConfig& config);

/// Local-statistics MMSE filter: z̄ + w (z - z̄), w = max(0, 1 - (1/L) / C_z²),
/// C_z² = (population variance) / z̄² over the window.
IntensityRaster lee_filter(const IntensityRaster& image, double nominal_looks, int window_side = 5,
                           unsigned threads = 1);

/// Boxcar mean over a window_side × window_side window.
IntensityRaster mean_filter(const IntensityRaster& image, int window_side = 3, unsigned threads = 1);

}  // namespace despeckle
