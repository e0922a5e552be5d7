#pragma once

// Test-only reference computations. Everything here is deliberately naive
// and shares no code path with the library routines it checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "despeckle/raster.hpp"

namespace oracle {

inline std::string fixture(const std::string& name) { return std::string(DESPECKLE_FIXTURE_DIR) + "/" + name; }

/// Gamma log-likelihood with mean fixed at the sample mean, straight from
/// the density formula with std::lgamma.
inline double profile_loglik(std::span<const double> xs, double looks) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ll = 0.0;
  for (double x : xs) {
    ll += looks * std::log(looks) - looks * std::log(mean) - std::lgamma(looks) + (looks - 1.0) * std::log(x) -
          looks * x / mean;
  }
  return ll;
}

/// Brute-force argmax of the profile likelihood on a uniform grid over
/// [lo, hi], refined once around the best coarse point.
inline double grid_search_looks(std::span<const double> xs, double lo = 0.5, double hi = 1000.0,
                                double step = 1e-3) {
  // Coarse logarithmic sweep to locate the basin, then the uniform grid.
  double best = lo;
  double best_ll = -INFINITY;
  for (double l = lo; l <= hi; l *= 1.01) {
    const double ll = profile_loglik(xs, l);
    if (ll > best_ll) {
      best_ll = ll;
      best = l;
    }
  }
  const double a = std::max(lo, best / 1.02);
  const double b = std::min(hi, best * 1.02);
  best_ll = -INFINITY;
  for (double l = a; l <= b + 0.5 * step; l += step) {
    const double ll = profile_loglik(xs, l);
    if (ll > best_ll) {
      best_ll = ll;
      best = l;
    }
  }
  return best;
}

/// Upper tail of χ²₁: Pr(χ²₁ > s) = erfc(√(s/2)).
inline double chi2_df1_tail(double s) { return std::erfc(std::sqrt(0.5 * s)); }

/// (1 - alpha) quantile of χ²₁ by bisection on the erfc tail.
inline double chi2_df1_quantile(double alpha) {
  double lo = 0.0;
  double hi = 100.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chi2_df1_tail(mid) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// One-sample Kolmogorov–Smirnov statistic D against a continuous CDF.
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Closed-form directed KL divergence between Γ(L, L/a) and Γ(L, L/b).
inline double kl_directed_equal_shape(double a, double b, double looks) {
  return looks * (a / b - 1.0 - std::log(a / b));
}

inline despeckle::IntensityRaster random_raster(std::size_t w, std::size_t h, unsigned seed, double lo = 1.0,
                                                double hi = 100.0) {
  despeckle::IntensityRaster r(w, h);
  unsigned long long state = seed * 0x9E3779B97F4A7C15ull + 1;
  for (auto& v : r.data()) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    const double u = static_cast<double>(state >> 11) / 9007199254740992.0;
    v = lo + (hi - lo) * u;
  }
  return r;
}

}  // namespace oracle
