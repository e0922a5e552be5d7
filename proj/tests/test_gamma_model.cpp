#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <vector>

#include "despeckle/errors.hpp"
#include "despeckle/gamma_model.hpp"
#include "oracles.hpp"

using namespace despeckle;

TEST_CASE("gamma_density reference values") {
  CHECK(gamma_density(1.0, {1.0, 1.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(gamma_density(30.0, {1.0, 30.0}) == doctest::Approx(0.0122626480390480773865).epsilon(1e-13));
  // Large shapes stay finite in log space.
  CHECK(std::isfinite(gamma_density(30.0, {1000.0, 30.0})));
  CHECK(gamma_density(30.0, {1000.0, 30.0}) > 0.0);
}

TEST_CASE("gamma_density integrates to one") {
  boost::math::quadrature::tanh_sinh<double> integrator;
  for (double looks : {1.0, 4.0, 8.0}) {
    for (double mean : {1.0, 30.0, 120.0}) {
      const GammaParams p{looks, mean};
      const double total = integrator.integrate([&](double z) { return z > 0 ? gamma_density(z, p) : 0.0; }, 0.0,
                                                INFINITY);
      INFO("L=" << looks << " mean=" << mean);
      CHECK(std::abs(total - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("gamma_density rejects invalid input") {
  CHECK_THROWS_AS(gamma_density(0.0, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(gamma_density(-2.0, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(gamma_density(1.0, {0.1, 1.0}), DomainError);
  CHECK_THROWS_AS(gamma_density(1.0, {2.0, 0.0}), DomainError);
}

TEST_CASE("log_likelihood") {
  CHECK(log_likelihood(RegionSample({1.0}), {1.0, 1.0}) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(log_likelihood(RegionSample({30.0}), {1.0, 30.0}) == doctest::Approx(-4.40119738166215537541).epsilon(1e-13));
  CHECK_THROWS_AS(RegionSample({1.0, 0.0}), DomainError);

  // For fixed looks the likelihood peaks at the sample mean.
  const RegionSample s({12.0, 40.0, 25.0, 31.0, 8.0});
  const double m = s.mean();
  const double at_mean = log_likelihood(s, {3.0, m});
  for (double f : {0.9, 0.99, 0.999, 1.001, 1.01, 1.1}) CHECK(log_likelihood(s, {3.0, m * f}) < at_mean);
}

TEST_CASE("moments_estimate") {
  // mean 30, unbiased variance 225 and 900
  const RegionSample a({15.0, 45.0, 15.0, 45.0, 30.0});
  CHECK(a.mean() == 30.0);
  CHECK(a.variance() == 225.0);
  CHECK(moments_estimate(a).looks == doctest::Approx(4.0));
  const double d = 15.0 * std::sqrt(2.0);
  const RegionSample c({30.0 - d, 30.0 + d});
  CHECK(c.variance() == doctest::Approx(900.0).epsilon(1e-12));
  CHECK(moments_estimate(c).looks == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(moments_estimate(RegionSample({5.0, 5.0, 5.0})), DegenerateSampleError);
}

TEST_CASE("mle_estimate basic contract") {
  CHECK_THROWS_AS(mle_estimate(RegionSample({5.0, 5.0, 5.0})), DegenerateSampleError);
  CHECK_THROWS_AS(mle_estimate(RegionSample({5.0})), DomainError);

  Rng rng(42);
  for (int t = 0; t < 50; ++t) {
    const RegionSample s = sample_gamma({2.5, 17.0}, 9, rng);
    const MleFit fit = mle_estimate(s);
    double sum = 0.0;
    for (double v : s.values()) sum += v;
    CHECK(fit.params.mean == sum / 9.0);
    CHECK(fit.converged);
    CHECK(fit.params.looks >= kMinLooks);
    CHECK(fit.params.looks <= kMaxLooks);
  }
}

TEST_CASE("mle_estimate looks scale invariance") {
  Rng rng(7);
  for (int t = 0; t < 40; ++t) {
    const RegionSample s = sample_gamma({4.0, 30.0}, 16, rng);
    const double base = mle_estimate(s).params.looks;
    for (double c : {0.1, 7.3, 1e4}) {
      std::vector<double> scaled;
      for (double v : s.values()) scaled.push_back(c * v);
      const double l = mle_estimate(RegionSample(scaled)).params.looks;
      CHECK(std::abs(l - base) <= 1e-9 * base);
    }
  }
}

TEST_CASE("mle_estimate matches brute-force grid search on size-9 samples") {
  Rng rng(2024);
  int compared = 0;
  for (int t = 0; t < 100; ++t) {
    const RegionSample s = sample_gamma({t % 2 ? 1.0 : 4.0, 30.0}, 9, rng);
    const MleFit fit = mle_estimate(s);
    const double grid = oracle::grid_search_looks(s.values());
    INFO("sample " << t << " mle " << fit.params.looks << " grid " << grid);
    CHECK(std::abs(fit.params.looks - grid) <= 2e-3);
    ++compared;
  }
  CHECK(compared == 100);
}

TEST_CASE("mle_estimate clamps unbounded estimates") {
  // Nearly constant data has a huge likelihood-optimal shape.
  const MleFit hi = mle_estimate(RegionSample({30.0, 30.0000001, 29.9999999, 30.0}));
  CHECK(hi.params.looks == kMaxLooks);
  CHECK(hi.clamped);
  // Extremely dispersed data pushes the shape under the lower bound.
  const MleFit lo = mle_estimate(RegionSample({1e-6, 1e6, 1e-5, 2e5}));
  CHECK(lo.params.looks == kMinLooks);
  CHECK(lo.clamped);
  const MleFit custom = mle_estimate(RegionSample({30.0, 30.0000001, 29.9999999, 30.0}), {0.5, 50.0});
  CHECK(custom.params.looks == 50.0);
}

TEST_CASE("sample_gamma moments and determinism") {
  Rng rng(99);
  const RegionSample s = sample_gamma({4.0, 30.0}, 1'000'000, rng);
  CHECK(std::abs(s.mean() - 30.0) < 0.1);
  CHECK(std::abs(s.variance() - 225.0) < 3.0);

  Rng a(5), b(5);
  const RegionSample x = sample_gamma({1.5, 12.0}, 1000, a);
  const RegionSample y = sample_gamma({1.5, 12.0}, 1000, b);
  CHECK(std::equal(x.values().begin(), x.values().end(), y.values().begin()));

  Rng c(6);
  const RegionSample z = sample_gamma({1.5, 12.0}, 1000, c);
  CHECK_FALSE(std::equal(x.values().begin(), x.values().end(), z.values().begin()));
}

TEST_CASE("sample_gamma with one look is exponential (KS at 1%)") {
  Rng rng(314);
  const RegionSample s = sample_gamma({1.0, 30.0}, 20000, rng);
  const std::vector<double> xs(s.values().begin(), s.values().end());
  const double d = oracle::ks_statistic(xs, [](double x) { return 1.0 - std::exp(-x / 30.0); });
  // Asymptotic 1% critical value 1.628 / sqrt(n).
  CHECK(d < 1.628 / std::sqrt(20000.0));
}

TEST_CASE("sub-unit shapes are sampled correctly") {
  Rng rng(8);
  const RegionSample s = sample_gamma({0.5, 10.0}, 400000, rng);
  CHECK(std::abs(s.mean() - 10.0) < 0.1);
  CHECK(std::abs(s.variance() - 200.0) / 200.0 < 0.03);
}

TEST_CASE("gamma draws are pinned to golden values") {
  // Frozen from this generator; a change here means every seeded run drifts.
  Rng rng(12345);
  const RegionSample s = sample_gamma({4.0, 30.0}, 4, rng);
  const std::vector<double> golden = {9.7038106307225203, 13.81052842910025, 32.853916649524216, 12.079298305484361};
  REQUIRE(golden.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(s.values()[i] == golden[i]);
}
