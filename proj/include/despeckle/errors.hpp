#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace despeckle {

/// Input outside the mathematical domain of an operation (nonpositive
/// intensity, invalid parameters, negative statistic).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Sample carries no spread (zero variance); the caller picks the fallback.
class DegenerateSampleError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Quadrature or iteration failed to reach its tolerance.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Phantom layout cannot be realised for the requested size.
class GeometryError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed file content. `offset` is the byte offset where parsing failed.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

}  // namespace despeckle
