#include "despeckle/gamma_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "despeckle/errors.hpp"
#include "despeckle/special_functions.hpp"

namespace despeckle {

namespace {

constexpr int kMaxNewtonIterations = 100;
constexpr double kRelativeTolerance = 1e-10;

double mean_of(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double variance_of(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

void check_estimable(std::span<const double> values) {
  if (values.size() < 2) throw DomainError("estimation needs at least two values");
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("estimation needs positive finite values");
  }
}

// log L - ψ(L) - s; strictly decreasing in L, from +inf to -s.
double profile_score(double looks, double s) {
  return std::log(looks) - special::digamma(looks) - s;
}

double profile_score_slope(double looks) { return 1.0 / looks - special::trigamma(looks); }

}  // namespace

void GammaParams::validate() const {
  if (!(looks >= kMinLooks && looks <= kMaxLooks)) {
    throw DomainError("GammaParams: looks " + std::to_string(looks) + " outside [0.5, 1000]");
  }
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw DomainError("GammaParams: mean must be positive and finite");
  }
}

RegionSample::RegionSample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("RegionSample: empty sample");
  for (double v : values_) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("RegionSample: values must be positive and finite");
  }
}

double RegionSample::mean() const { return mean_of(values_); }

double RegionSample::variance() const { return variance_of(values_, mean()); }

double log_gamma_density(double z, const GammaParams& params) {
  params.validate();
  if (!(z > 0.0)) throw DomainError("gamma_density: z must be positive");
  const double L = params.looks;
  return L * std::log(L / params.mean) - special::log_gamma(L) + (L - 1.0) * std::log(z) -
         L * z / params.mean;
}

double gamma_density(double z, const GammaParams& params) {
  return std::exp(log_gamma_density(z, params));
}

double log_likelihood(const RegionSample& sample, const GammaParams& params) {
  double sum = 0.0;
  for (double z : sample.values()) sum += log_gamma_density(z, params);
  return sum;
}

GammaParams moments_estimate(const RegionSample& sample, LooksRange range) {
  const auto values = sample.values();
  check_estimable(values);
  const double m = mean_of(values);
  const double var = variance_of(values, m);
  if (!(var > 0.0)) throw DegenerateSampleError("moments_estimate: zero sample variance");
  return {std::clamp(m * m / var, range.min, range.max), m};
}

MleFit mle_estimate(std::span<const double> values, LooksRange range) {
  check_estimable(values);
  const double m = mean_of(values);
  const double var = variance_of(values, m);
  if (!(var > 0.0)) throw DegenerateSampleError("mle_estimate: zero sample variance");

  // s = log(mean) - mean(log z) = -mean(log(z / mean)); the ratio form is
  // exactly invariant to rescaling the sample.
  double s = 0.0;
  for (double z : values) s -= std::log1p((z - m) / m);
  s /= static_cast<double>(values.size());

  MleFit fit;
  fit.params.mean = m;
  if (!(s > 0.0) || profile_score(range.max, s) >= 0.0) {
    fit.params.looks = range.max;
    fit.clamped = true;
    return fit;
  }
  if (profile_score(range.min, s) <= 0.0) {
    fit.params.looks = range.min;
    fit.clamped = true;
    return fit;
  }

  double lo = range.min;
  double hi = range.max;
  double x = std::clamp(m * m / var, range.min, range.max);
  double best = x;
  double best_abs = std::abs(profile_score(x, s));
  fit.converged = false;
  for (int it = 1; it <= kMaxNewtonIterations; ++it) {
    const double g = profile_score(x, s);
    if (std::abs(g) < best_abs) {
      best_abs = std::abs(g);
      best = x;
    }
    if (g == 0.0) {
      fit.iterations = it;
      fit.converged = true;
      best = x;
      break;
    }
    if (g > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x - g / profile_score_slope(x);
    if (!(next > lo && next < hi)) next = std::sqrt(lo * hi);
    const bool done = std::abs(next - x) < kRelativeTolerance * x;
    x = next;
    if (done) {
      fit.iterations = it;
      fit.converged = true;
      best = x;
      break;
    }
  }
  if (!fit.converged) fit.iterations = kMaxNewtonIterations;
  fit.params.looks = best;
  return fit;
}

MleFit mle_estimate(const RegionSample& sample, LooksRange range) {
  return mle_estimate(sample.values(), range);
}

RegionSample sample_gamma(const GammaParams& params, std::size_t count, Rng& rng) {
  params.validate();
  if (count == 0) throw DomainError("sample_gamma: count must be positive");
  std::vector<double> values(count);
  const double rate = params.rate();
  for (auto& v : values) {
    // Γ draws underflow to 0 for tiny shapes; resample to stay in (0, ∞).
    do {
      v = rng.gamma(params.looks, rate);
    } while (!(v > 0.0));
  }
  return RegionSample(std::move(values));
}

}  // namespace despeckle
