#pragma once

#include <cstdint>
#include <random>

namespace despeckle {

/// Seeded generator with a pinned output stream.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the standard.
/// Uniform, normal and Gamma variates are derived here rather than through
/// the <random> distributions, whose algorithms are implementation-defined,
/// so draws are identical across compilers and library versions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  /// Standard normal via the Marsaglia polar method.
  double normal();

  /// Gamma(shape, rate) via Marsaglia–Tsang squeeze/rejection; shapes below
  /// one use the boost Gamma(shape + 1) · U^(1/shape).
  double gamma(double shape, double rate);

private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace despeckle
