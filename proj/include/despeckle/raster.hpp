#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace despeckle {

/// Row-major 2-D grid.
template <typename T>
class Raster {
public:
  Raster() = default;
  Raster(std::size_t width, std::size_t height, T fill = T{})
      : width_(width), height_(height), data_(width * height, fill) {}
  Raster(std::size_t width, std::size_t height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != width_ * height_) throw std::invalid_argument("Raster: data size mismatch");
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t row, std::size_t col) { return data_[row * width_ + col]; }
  const T& operator()(std::size_t row, std::size_t col) const { return data_[row * width_ + col]; }

  /// Read with half-sample symmetric reflection at the borders
  /// (row -1 reads row 0, row -2 reads row 1, and so on).
  const T& mirrored(std::ptrdiff_t row, std::ptrdiff_t col) const {
    return (*this)(reflect(row, static_cast<std::ptrdiff_t>(height_)),
                   reflect(col, static_cast<std::ptrdiff_t>(width_)));
  }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  bool same_shape(const auto& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Raster&, const Raster&) = default;

  static std::size_t reflect(std::ptrdiff_t i, std::ptrdiff_t n) {
    const std::ptrdiff_t period = 2 * n;
    std::ptrdiff_t k = i % period;
    if (k < 0) k += period;
    return static_cast<std::size_t>(k < n ? k : period - 1 - k);
  }

private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> data_;
};

using IntensityRaster = Raster<double>;

enum class Label : std::uint8_t {
  background = 0,
  line = 1,
  block = 2,
  edge_band = 3,
};

using LabelRaster = Raster<Label>;

}  // namespace despeckle
