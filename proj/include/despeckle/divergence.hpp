#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "despeckle/gamma_model.hpp"

namespace despeckle {

/// One member of the (h, φ)-divergence family, reduced to what the test
/// statistic needs: k = 1 / (h'(0) φ''(1)) and the χ² degrees of freedom.
struct DivergenceSpec {
  std::string name;
  double scale_constant = 1.0;
  int degrees_of_freedom = 1;

  void validate() const;

  /// Kullback–Leibler instance. The closed-form statistic compares means
  /// under a shared looks estimate, so the default null has one free
  /// parameter; pass 2 to test against the full (L, λ) dimension.
  static DivergenceSpec kullback_leibler(int degrees_of_freedom = 1) {
    return {"kl", 1.0, degrees_of_freedom};
  }
};

struct TestOutcome {
  double statistic = 0.0;
  double p_value = 1.0;
  bool accepted = true;
  int degrees_of_freedom = 1;
};

/// Symmetrized KL distance between Γ(L, L/mean1) and Γ(L, L/mean_i):
/// L · ((mean1² + mean_i²) / (2 mean1 mean_i) - 1).
double kl_distance_gamma(double mean1, double mean_i, double shared_looks);

/// Scales a symmetrized distance into a test statistic:
/// 2 m n k / (m + n) · distance.
double scaled_statistic(std::size_t m, std::size_t n, double distance, const DivergenceSpec& spec);

/// KL test statistic for samples of sizes m and n with estimated means.
double kl_statistic(std::size_t m, std::size_t n, double shared_looks, double mean1, double mean_i);

double kl_statistic(const RegionSample& sample1, const RegionSample& sample_i, double shared_looks,
                    double mean1, double mean_i);

using DensityFn = std::function<double(double)>;
using ConvexFn = std::function<double(double)>;
using IncreasingFn = std::function<double(double)>;

struct QuadratureOptions {
  double relative_tolerance = 1e-9;
  unsigned max_depth = 30;
  /// Integration runs over u = log(z / scale); pick scale near the bulk of
  /// both densities.
  double scale = 1.0;
};

/// h( ∫₀^∞ φ(f₁(x) / fᵢ(x)) fᵢ(x) dx ) by adaptive Gauss–Kronrod quadrature
/// after the substitution x = scale · e^u. Points where both densities
/// underflow contribute zero. Throws NumericalError when the error estimate
/// stays above the tolerance.
double hphi_divergence_numeric(const DensityFn& density1, const DensityFn& density_i,
                               const ConvexFn& phi, const IncreasingFn& h,
                               const QuadratureOptions& options = {});

/// Arithmetic mean of the two directed divergences.
inline double symmetrize(double d_forward, double d_backward) {
  return 0.5 * (d_forward + d_backward);
}

/// Pr(χ²_df > statistic).
double chi2_p_value(double statistic, int degrees_of_freedom);

/// Accept H0 iff p-value >= significance.
TestOutcome decide(double statistic, int degrees_of_freedom, double significance);

}  // namespace despeckle
