#include "despeckle/filters.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "despeckle/errors.hpp"
#include "despeckle/parallel.hpp"

namespace despeckle {

namespace {

constexpr int kSide = 2 * WindowMaskSet::kRadius + 1;
constexpr std::size_t kWindowPixels = kSide * kSide;

int window_index(const Offset& o) {
  return (o.row + WindowMaskSet::kRadius) * kSide + (o.col + WindowMaskSet::kRadius);
}

void require_positive(const IntensityRaster& image) {
  if (image.empty()) throw DomainError("filter: empty raster");
  for (std::size_t r = 0; r < image.height(); ++r) {
    for (std::size_t c = 0; c < image.width(); ++c) {
      const double v = image(r, c);
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError("filter: pixel (" + std::to_string(r) + ", " + std::to_string(c) +
                          ") is not a positive finite intensity");
      }
    }
  }
}

void check_window_side(int side) {
  if (side < 1 || side % 2 == 0) throw DomainError("filter: window side must be a positive odd integer");
}

double shared_looks_for(std::span<const double> pooled, const FilterConfig& config) {
  if (config.looks_mode == LooksMode::fixed) return config.nominal_looks;
  try {
    const MleFit fit = mle_estimate(pooled, config.looks_range);
    if (fit.converged) return fit.params.looks;
    return moments_estimate(RegionSample({pooled.begin(), pooled.end()}), config.looks_range).looks;
  } catch (const DegenerateSampleError&) {
    // Constant pooled data: both means are equal and S = 0 for any looks.
    return config.looks_range.max;
  }
}

}  // namespace

void FilterConfig::validate() const {
  if (!(significance > 0.0 && significance < 1.0)) {
    throw DomainError("FilterConfig: significance must lie in (0, 1)");
  }
  if (!(nominal_looks > 0.0)) throw DomainError("FilterConfig: nominal looks must be positive");
  if (degrees_of_freedom < 1) throw DomainError("FilterConfig: degrees of freedom must be >= 1");
  if (!(looks_range.min > 0.0 && looks_range.min <= looks_range.max)) {
    throw DomainError("FilterConfig: invalid looks clamp range");
  }
  check_window_side(window_side);
}

std::string_view to_string(FilterMethod method) {
  switch (method) {
    case FilterMethod::kl: return "kl";
    case FilterMethod::lee: return "lee";
    case FilterMethod::mean: return "mean";
  }
  return "unknown";
}

FilterMethod parse_filter_method(std::string_view name) {
  if (name == "kl") return FilterMethod::kl;
  if (name == "lee") return FilterMethod::lee;
  if (name == "mean") return FilterMethod::mean;
  throw DomainError("unknown filter method '" + std::string(name) + "'");
}

std::array<RegionSample, WindowMaskSet::kCount> extract_regions(const IntensityRaster& image,
                                                                std::size_t row, std::size_t col,
                                                                const WindowMaskSet& masks) {
  std::array<RegionSample, WindowMaskSet::kCount> out;
  const auto r0 = static_cast<std::ptrdiff_t>(row);
  const auto c0 = static_cast<std::ptrdiff_t>(col);
  for (std::size_t k = 0; k < masks.size(); ++k) {
    std::vector<double> values;
    values.reserve(masks.mask(k).size());
    for (const Offset& o : masks.mask(k)) values.push_back(image.mirrored(r0 + o.row, c0 + o.col));
    out[k] = RegionSample(std::move(values));
  }
  return out;
}

KlPixelResult filter_pixel_kl_detailed(const IntensityRaster& image, std::size_t row, std::size_t col,
                                       const WindowMaskSet& masks, const FilterConfig& config) {
  const auto r0 = static_cast<std::ptrdiff_t>(row);
  const auto c0 = static_cast<std::ptrdiff_t>(col);
  std::array<double, kWindowPixels> window{};
  for (int dr = -WindowMaskSet::kRadius; dr <= WindowMaskSet::kRadius; ++dr) {
    for (int dc = -WindowMaskSet::kRadius; dc <= WindowMaskSet::kRadius; ++dc) {
      window[window_index({dr, dc})] = image.mirrored(r0 + dr, c0 + dc);
    }
  }

  // Sums run over deviations from the centre value, which makes every mean
  // exact on constant windows.
  const double ref = window[window_index({0, 0})];
  const auto central = masks.mask(0);
  std::array<double, 32> pooled{};
  double central_dev = 0.0;
  for (std::size_t j = 0; j < central.size(); ++j) {
    pooled[j] = window[window_index(central[j])];
    central_dev += pooled[j] - ref;
  }
  const std::size_t m = central.size();
  const double central_mean = ref + central_dev / static_cast<double>(m);

  KlPixelResult result;
  double accepted_dev = central_dev;
  std::size_t accepted_values = m;
  std::uint32_t distinct = 0;
  for (const Offset& o : central) distinct |= 1u << window_index(o);

  for (std::size_t k = 1; k < masks.size(); ++k) {
    const auto region = masks.mask(k);
    const std::size_t n = region.size();
    double region_dev = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      pooled[m + j] = window[window_index(region[j])];
      region_dev += pooled[m + j] - ref;
    }
    const double region_mean = ref + region_dev / static_cast<double>(n);
    const double looks = shared_looks_for(std::span<const double>(pooled.data(), m + n), config);
    const double statistic = kl_statistic(m, n, looks, central_mean, region_mean);
    const TestOutcome outcome = decide(statistic, config.degrees_of_freedom, config.significance);
    result.outcomes[k - 1] = outcome;
    result.shared_looks[k - 1] = looks;
    if (!outcome.accepted) continue;
    ++result.accepted_count;
    accepted_dev += region_dev;
    accepted_values += n;
    for (const Offset& o : region) distinct |= 1u << window_index(o);
  }

  if (result.accepted_count == 0) {
    result.value = central_mean;
  } else if (config.region_union == RegionUnion::multiset) {
    result.value = ref + accepted_dev / static_cast<double>(accepted_values);
  } else {
    double dev = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < kWindowPixels; ++i) {
      if (distinct & (1u << i)) {
        dev += window[i] - ref;
        ++count;
      }
    }
    result.value = ref + dev / count;
  }
  return result;
}

double filter_pixel_kl(const IntensityRaster& image, std::size_t row, std::size_t col,
                       const WindowMaskSet& masks, const FilterConfig& config) {
  return filter_pixel_kl_detailed(image, row, col, masks, config).value;
}

IntensityRaster filter_image(const IntensityRaster& image, const FilterConfig& config) {
  config.validate();
  require_positive(image);
  switch (config.method) {
    case FilterMethod::lee:
      return lee_filter(image, config.nominal_looks, config.window_side, config.threads);
    case FilterMethod::mean:
      return mean_filter(image, config.window_side, config.threads);
    case FilterMethod::kl:
      break;
  }
  const WindowMaskSet& masks = WindowMaskSet::nagao_matsuyama();
  IntensityRaster out(image.width(), image.height());
  parallel_for_chunks(image.height(), config.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      for (std::size_t c = 0; c < image.width(); ++c) out(r, c) = filter_pixel_kl(image, r, c, masks, config);
    }
  });
  return out;
}

IntensityRaster lee_filter(const IntensityRaster& image, double nominal_looks, int window_side,
                           unsigned threads) {
  if (!(nominal_looks > 0.0)) throw DomainError("lee_filter: nominal looks must be positive");
  check_window_side(window_side);
  require_positive(image);
  const int radius = window_side / 2;
  const double noise_cv2 = 1.0 / nominal_looks;
  const double count = static_cast<double>(window_side) * window_side;
  IntensityRaster out(image.width(), image.height());
  parallel_for_chunks(image.height(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      for (std::size_t c = 0; c < image.width(); ++c) {
        const auto r0 = static_cast<std::ptrdiff_t>(r);
        const auto c0 = static_cast<std::ptrdiff_t>(c);
        const double ref = image(r, c);
        double dev = 0.0;
        double dev2 = 0.0;
        for (int dr = -radius; dr <= radius; ++dr) {
          for (int dc = -radius; dc <= radius; ++dc) {
            const double d = image.mirrored(r0 + dr, c0 + dc) - ref;
            dev += d;
            dev2 += d * d;
          }
        }
        const double shift = dev / count;
        const double local_mean = ref + shift;
        const double local_var = std::max(0.0, dev2 / count - shift * shift);
        double weight = 0.0;
        if (local_mean > 0.0 && local_var > 0.0) {
          const double signal_cv2 = local_var / (local_mean * local_mean);
          weight = std::max(0.0, 1.0 - noise_cv2 / signal_cv2);
        }
        out(r, c) = local_mean + weight * (image(r, c) - local_mean);
      }
    }
  });
  return out;
}

IntensityRaster mean_filter(const IntensityRaster& image, int window_side, unsigned threads) {
  check_window_side(window_side);
  if (image.empty()) throw DomainError("mean_filter: empty raster");
  const int radius = window_side / 2;
  const double count = static_cast<double>(window_side) * window_side;
  IntensityRaster out(image.width(), image.height());
  parallel_for_chunks(image.height(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      for (std::size_t c = 0; c < image.width(); ++c) {
        const double ref = image(r, c);
        double dev = 0.0;
        for (int dr = -radius; dr <= radius; ++dr)
          for (int dc = -radius; dc <= radius; ++dc)
            dev += image.mirrored(static_cast<std::ptrdiff_t>(r) + dr, static_cast<std::ptrdiff_t>(c) + dc) - ref;
        out(r, c) = ref + dev / count;
      }
    }
  });
  return out;
}

}  // namespace despeckle
