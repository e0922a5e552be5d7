#include "despeckle/window_masks.hpp"

#include <stdexcept>

namespace despeckle {

namespace {

constexpr std::array<Offset, 9> kCentral = {{
    {-1, -1}, {-1, 0}, {-1, 1},
    {0, -1},  {0, 0},  {0, 1},
    {1, -1},  {1, 0},  {1, 1},
}};

// clang-format off
constexpr std::array<std::array<Offset, 7>, 8> kRegions = {{
    // N
    {{{-2, -1}, {-2, 0}, {-2, 1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 0}}},
    // E
    {{{-1, 2}, {0, 2}, {1, 2}, {-1, 1}, {0, 1}, {1, 1}, {0, 0}}},
    // S
    {{{2, -1}, {2, 0}, {2, 1}, {1, -1}, {1, 0}, {1, 1}, {0, 0}}},
    // W
    {{{-1, -2}, {0, -2}, {1, -2}, {-1, -1}, {0, -1}, {1, -1}, {0, 0}}},
    // NE
    {{{-2, 1}, {-2, 2}, {-1, 0}, {-1, 1}, {-1, 2}, {0, 1}, {0, 0}}},
    // SE
    {{{2, 1}, {2, 2}, {1, 0}, {1, 1}, {1, 2}, {0, 1}, {0, 0}}},
    // SW
    {{{2, -2}, {2, -1}, {1, -2}, {1, -1}, {1, 0}, {0, -1}, {0, 0}}},
    // NW
    {{{-2, -2}, {-2, -1}, {-1, -2}, {-1, -1}, {-1, 0}, {0, -1}, {0, 0}}},
}};
// clang-format on

}  // namespace

const WindowMaskSet& WindowMaskSet::nagao_matsuyama() {
  static const WindowMaskSet instance;
  return instance;
}

std::span<const Offset> WindowMaskSet::mask(std::size_t k) const {
  if (k == 0) return kCentral;
  if (k < kCount) return kRegions[k - 1];
  throw std::out_of_range("WindowMaskSet::mask: index out of range");
}

}  // namespace despeckle
