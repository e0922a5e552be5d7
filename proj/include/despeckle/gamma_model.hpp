#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "despeckle/random.hpp"

namespace despeckle {

/// Gamma law of an intensity Z = λ·Y with unit-mean speckle Y ~ Γ(L, L).
/// Shape `looks` (L), rate L/λ, so E[Z] = mean and Var[Z] = mean² / looks.
struct GammaParams {
  double looks = 1.0;
  double mean = 1.0;

  /// Throws DomainError unless looks ∈ [kMinLooks, kMaxLooks] and mean > 0.
  void validate() const;

  double rate() const { return looks / mean; }
};

inline constexpr double kMinLooks = 0.5;
inline constexpr double kMaxLooks = 1000.0;

/// Clamp range applied to estimated looks.
struct LooksRange {
  double min = kMinLooks;
  double max = kMaxLooks;
};

/// A flat list of positive intensities drawn from one window region.
class RegionSample {
public:
  RegionSample() = default;
  /// Throws DomainError on an empty list or any value that is not > 0.
  explicit RegionSample(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  double mean() const;
  /// Unbiased (n - 1) variance; 0 for a single value.
  double variance() const;

private:
  std::vector<double> values_;
};

double gamma_density(double z, const GammaParams& params);
double log_gamma_density(double z, const GammaParams& params);

double log_likelihood(const RegionSample& sample, const GammaParams& params);

struct MleFit {
  GammaParams params;
  int iterations = 0;
  /// False when the iteration cap was hit; params then hold the best iterate.
  bool converged = true;
  /// True when the root lies outside the clamp range and a bound was returned.
  bool clamped = false;
};

/// Maximum-likelihood fit. The mean estimate is the sample mean; looks solve
/// log L - ψ(L) = log(mean) - mean(log z) by bracketed Newton iteration
/// started at the moments estimate.
///
/// Throws DegenerateSampleError on zero variance, DomainError on fewer than
/// two values.
MleFit mle_estimate(const RegionSample& sample, LooksRange range = {});

/// Same fit on raw values; used by the filters to skip the RegionSample copy.
/// `values` must hold at least two positive entries.
MleFit mle_estimate(std::span<const double> values, LooksRange range = {});

/// mean = sample mean, looks = mean² / variance (unbiased), clamped.
GammaParams moments_estimate(const RegionSample& sample, LooksRange range = {});

/// `count` independent draws from Γ(looks, looks / mean).
RegionSample sample_gamma(const GammaParams& params, std::size_t count, Rng& rng);

}  // namespace despeckle
