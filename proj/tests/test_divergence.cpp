#include <doctest.h>

#include <cmath>
#include <random>

#include "despeckle/divergence.hpp"
#include "despeckle/errors.hpp"
#include "oracles.hpp"

using namespace despeckle;

namespace {

double symmetrized_kl_numeric(double looks, double mean1, double mean_i) {
  const GammaParams p1{looks, mean1};
  const GammaParams pi{looks, mean_i};
  auto f1 = [&](double z) { return gamma_density(z, p1); };
  auto fi = [&](double z) { return gamma_density(z, pi); };
  auto phi = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  auto h = [](double y) { return y; };
  QuadratureOptions opt;
  opt.scale = std::sqrt(mean1 * mean_i);
  return symmetrize(hphi_divergence_numeric(f1, fi, phi, h, opt), hphi_divergence_numeric(fi, f1, phi, h, opt));
}

}  // namespace

TEST_CASE("kl_distance_gamma examples") {
  CHECK(kl_distance_gamma(30.0, 30.0, 4.0) == 0.0);
  CHECK(kl_distance_gamma(30.0, 120.0, 1.0) == doctest::Approx(1.125).epsilon(1e-15));
  CHECK(kl_distance_gamma(7.3 * 30.0, 7.3 * 120.0, 1.0) == doctest::Approx(kl_distance_gamma(30.0, 120.0, 1.0)).epsilon(1e-15));
  CHECK(kl_distance_gamma(120.0, 30.0, 2.0) == kl_distance_gamma(30.0, 120.0, 2.0));
  CHECK_THROWS_AS(kl_distance_gamma(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(kl_distance_gamma(1.0, 1.0, -1.0), DomainError);
}

TEST_CASE("closed form equals the symmetrized directed closed forms") {
  for (double r : {1.5, 2.0, 4.0}) {
    const double sym = symmetrize(oracle::kl_directed_equal_shape(30.0, 30.0 * r, 3.0),
                                  oracle::kl_directed_equal_shape(30.0 * r, 30.0, 3.0));
    CHECK(kl_distance_gamma(30.0, 30.0 * r, 3.0) == doctest::Approx(sym).epsilon(1e-14));
  }
}

TEST_CASE("hphi_divergence_numeric reproduces the KL closed form") {
  CHECK(symmetrized_kl_numeric(1.0, 30.0, 120.0) == doctest::Approx(1.125).epsilon(1e-8));
  for (double looks : {1.0, 4.0}) {
    for (double r : {1.5, 2.0, 4.0}) {
      const double closed = kl_distance_gamma(30.0, 30.0 * r, looks);
      const double numeric = symmetrized_kl_numeric(looks, 30.0, 30.0 * r);
      INFO("L=" << looks << " ratio=" << r);
      CHECK(std::abs(closed - numeric) / numeric <= 1e-8);
    }
  }
}

TEST_CASE("hphi_divergence_numeric on identical densities is zero") {
  const GammaParams p{4.0, 30.0};
  auto f = [&](double z) { return gamma_density(z, p); };
  auto phi = [](double x) { return x * std::log(x) - x + 1.0; };
  CHECK(std::abs(hphi_divergence_numeric(f, f, phi, [](double y) { return y; }, {1e-9, 30, 30.0})) < 1e-14);
}

TEST_CASE("hphi_divergence_numeric supports other family members") {
  // Hellinger: φ(x) = (√x - 1)² / 2, h = identity; closed form for equal
  // shapes is 1 - BC with BC = (2√(ab)/(a+b))^L.
  const double a = 30.0, b = 75.0, L = 4.0;
  auto f1 = [&](double z) { return gamma_density(z, {L, a}); };
  auto fi = [&](double z) { return gamma_density(z, {L, b}); };
  auto phi = [](double x) { return 0.5 * (std::sqrt(x) - 1.0) * (std::sqrt(x) - 1.0); };
  const double numeric = hphi_divergence_numeric(f1, fi, phi, [](double y) { return y; }, {1e-9, 30, 50.0});
  const double closed = 1.0 - std::pow(2.0 * std::sqrt(a * b) / (a + b), L);
  CHECK(numeric == doctest::Approx(closed).epsilon(1e-8));
}

TEST_CASE("hphi_divergence_numeric reports non-convergence") {
  // A density with an integrable x^-0.999 spike defeats a depth-2 search.
  auto spiky = [](double x) { return x < 1.0 ? 0.001 * std::pow(x, -0.999) : 0.0; };
  auto flat = [](double x) { return std::exp(-x); };
  auto phi = [](double x) { return x * std::log(x); };
  CHECK_THROWS_AS(hphi_divergence_numeric(spiky, flat, phi, [](double y) { return y; }, {1e-12, 2, 1.0}),
                  NumericalError);
}

TEST_CASE("symmetrize") {
  CHECK(symmetrize(0.0, 0.0) == 0.0);
  CHECK(symmetrize(1.0, 1.25) == 1.125);
  CHECK(symmetrize(0.3, 2.9) == symmetrize(2.9, 0.3));
}

TEST_CASE("kl_statistic examples") {
  CHECK(kl_statistic(9, 7, 2.0, 30.0, 30.0) == 0.0);
  CHECK(kl_statistic(9, 7, 1.0, 30.0, 120.0) == doctest::Approx(8.859375).epsilon(1e-15));
  CHECK(kl_statistic(9, 9, 1.0, 30.0, 60.0) == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(kl_statistic(RegionSample(std::vector<double>(9, 1.0)), RegionSample(std::vector<double>(7, 1.0)), 1.0,
                     30.0, 120.0) == doctest::Approx(8.859375).epsilon(1e-15));
  CHECK_THROWS_AS(kl_statistic(1, 7, 1.0, 30.0, 120.0), DomainError);
}

TEST_CASE("scaled_statistic uses the family constant") {
  DivergenceSpec spec{"custom", 0.5, 1};
  CHECK(scaled_statistic(9, 7, 1.125, spec) == doctest::Approx(0.5 * 8.859375));
  CHECK_THROWS_AS(scaled_statistic(9, 7, 1.0, DivergenceSpec{"bad", 0.0, 1}), DomainError);
  CHECK_THROWS_AS(scaled_statistic(9, 7, 1.0, DivergenceSpec{"bad", 1.0, 0}), DomainError);
  CHECK(DivergenceSpec::kullback_leibler().degrees_of_freedom == 1);
  CHECK(DivergenceSpec::kullback_leibler(2).degrees_of_freedom == 2);
}

TEST_CASE("divergence properties on random triples") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> mean(0.5, 500.0);
  std::uniform_real_distribution<double> looks(0.5, 50.0);
  std::uniform_int_distribution<int> size(2, 40);
  for (int t = 0; t < 1000; ++t) {
    const double a = mean(gen), b = mean(gen), L = looks(gen);
    const double d = kl_distance_gamma(a, b, L);
    CHECK(d > 0.0);
    CHECK(kl_distance_gamma(a, a, L) == 0.0);
    const auto m = static_cast<std::size_t>(size(gen));
    const auto n = static_cast<std::size_t>(size(gen));
    CHECK(kl_statistic(m, n, L, a, b) == kl_statistic(n, m, L, b, a));
  }
}

TEST_CASE("statistic grows with the log mean ratio") {
  double prev = -1.0;
  for (double lr = 0.0; lr < 3.0; lr += 0.05) {
    const double up = kl_statistic(9, 7, 2.0, 30.0, 30.0 * std::exp(lr));
    const double down = kl_statistic(9, 7, 2.0, 30.0, 30.0 * std::exp(-lr));
    CHECK(up > prev);
    CHECK(down == doctest::Approx(up).epsilon(1e-12));
    prev = up;
  }
}

TEST_CASE("chi2_p_value") {
  CHECK(chi2_p_value(0.0, 1) == 1.0);
  CHECK(chi2_p_value(3.841459, 1) == doctest::Approx(0.05).epsilon(1e-4));
  CHECK(std::abs(chi2_p_value(8.859375, 1) - 0.00291587395186944) < 1e-4);
  CHECK(chi2_p_value(8.859375, 1) == doctest::Approx(0.00291587395186944).epsilon(1e-10));
  for (double s : {0.01, 0.5, 2.0, 7.0, 20.0, 60.0}) {
    CHECK(chi2_p_value(s, 1) == doctest::Approx(oracle::chi2_df1_tail(s)).epsilon(1e-10));
    // χ²₂ tail is exp(-s/2).
    CHECK(chi2_p_value(s, 2) == doctest::Approx(std::exp(-0.5 * s)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(chi2_p_value(-1.0, 1), DomainError);

  double prev = 1.1;
  for (double s = 0.0; s < 40.0; s += 0.25) {
    const double p = chi2_p_value(s, 1);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("decide") {
  CHECK(decide(0.0, 1, 0.05).accepted);
  CHECK(decide(0.0, 3, 0.05).accepted);
  const TestOutcome rejected = decide(8.859375, 1, 0.05);
  CHECK_FALSE(rejected.accepted);
  CHECK(rejected.statistic == 8.859375);
  CHECK(rejected.degrees_of_freedom == 1);
  const TestOutcome close = decide(3.80, 1, 0.05);
  CHECK(close.accepted);
  CHECK(close.p_value == doctest::Approx(0.0512525828573695).epsilon(1e-9));
  CHECK_THROWS_AS(decide(1.0, 1, 0.0), DomainError);
  CHECK_THROWS_AS(decide(1.0, 1, 1.0), DomainError);
}
