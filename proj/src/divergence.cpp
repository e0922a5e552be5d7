#include "despeckle/divergence.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <limits>

#include "despeckle/errors.hpp"
#include "despeckle/special_functions.hpp"

namespace despeckle {

void DivergenceSpec::validate() const {
  if (!(scale_constant > 0.0)) throw DomainError("DivergenceSpec: scale constant must be positive");
  if (degrees_of_freedom < 1) throw DomainError("DivergenceSpec: degrees of freedom must be >= 1");
}

double kl_distance_gamma(double mean1, double mean_i, double shared_looks) {
  if (!(mean1 > 0.0) || !(mean_i > 0.0) || !(shared_looks > 0.0)) {
    throw DomainError("kl_distance_gamma: means and looks must be positive");
  }
  if (mean1 == mean_i) return 0.0;
  // (a² + b²)/(2ab) - 1 = (a - b)² / (2ab); the right side has no cancellation.
  const double diff = mean1 - mean_i;
  return 0.5 * shared_looks * (diff * diff) / (mean1 * mean_i);
}

double scaled_statistic(std::size_t m, std::size_t n, double distance, const DivergenceSpec& spec) {
  spec.validate();
  if (m == 0 || n == 0) throw DomainError("scaled_statistic: sample sizes must be positive");
  const double dm = static_cast<double>(m);
  const double dn = static_cast<double>(n);
  return 2.0 * dm * dn * spec.scale_constant / (dm + dn) * distance;
}

double kl_statistic(std::size_t m, std::size_t n, double shared_looks, double mean1, double mean_i) {
  if (m < 2 || n < 2) throw DomainError("kl_statistic: sample sizes must be >= 2");
  return scaled_statistic(m, n, kl_distance_gamma(mean1, mean_i, shared_looks),
                          DivergenceSpec::kullback_leibler());
}

double kl_statistic(const RegionSample& sample1, const RegionSample& sample_i, double shared_looks,
                    double mean1, double mean_i) {
  return kl_statistic(sample1.size(), sample_i.size(), shared_looks, mean1, mean_i);
}

double hphi_divergence_numeric(const DensityFn& density1, const DensityFn& density_i,
                               const ConvexFn& phi, const IncreasingFn& h,
                               const QuadratureOptions& options) {
  if (!(options.scale > 0.0)) throw DomainError("hphi_divergence_numeric: scale must be positive");
  const double scale = options.scale;
  auto integrand = [&](double u) -> double {
    const double x = scale * std::exp(u);
    if (!(x > 0.0) || !std::isfinite(x)) return 0.0;
    const double fi = density_i(x);
    const double f1 = density1(x);
    if (!(fi > 0.0)) return 0.0;
    const double value = phi(f1 / fi) * fi * x;
    return std::isfinite(value) ? value : 0.0;
  };
  constexpr double inf = std::numeric_limits<double>::infinity();
  double error = 0.0;
  double l1 = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      integrand, -inf, inf, options.max_depth, options.relative_tolerance, &error, &l1);
  if (!std::isfinite(integral) || error > options.relative_tolerance * l1) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "hphi_divergence_numeric: quadrature did not converge (estimate %.12g, "
                  "error %.3g, L1 %.6g)",
                  integral, error, l1);
    throw NumericalError(msg);
  }
  return h(integral);
}

double chi2_p_value(double statistic, int degrees_of_freedom) {
  if (!(statistic >= 0.0)) throw DomainError("chi2_p_value: statistic must be nonnegative");
  if (degrees_of_freedom < 1) throw DomainError("chi2_p_value: degrees of freedom must be >= 1");
  return special::gamma_q(0.5 * degrees_of_freedom, 0.5 * statistic);
}

TestOutcome decide(double statistic, int degrees_of_freedom, double significance) {
  if (!(significance > 0.0 && significance < 1.0)) {
    throw DomainError("decide: significance must lie in (0, 1)");
  }
  TestOutcome out;
  out.statistic = statistic;
  out.degrees_of_freedom = degrees_of_freedom;
  out.p_value = chi2_p_value(statistic, degrees_of_freedom);
  out.accepted = out.p_value >= significance;
  return out;
}

}  // namespace despeckle
