#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace despeckle {

struct Offset {
  int row = 0;
  int col = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

/// Nagao–Matsuyama partition of a 5×5 window around the filtered pixel C.
///
/// Offsets are (row, col) with rows growing downward. Mask 0 is the central
/// 3×3; masks 1–4 are the axial regions N, E, S, W; masks 5–8 are the
/// diagonal regions NE, SE, SW, NW. Each directional region has 7 pixels and
/// contains C.
///
///       N (1)              NW (8)
///   . X X X .          X X . . .
///   . X X X .          X X X . .
///   . . C . .          . X C . .
///   . . . . .          . . . . .
///   . . . . .          . . . . .
///
/// A quarter turn clockwise, (r, c) -> (c, -r), maps N->E->S->W->N and
/// NE->SE->SW->NW->NE.
class WindowMaskSet {
public:
  static constexpr std::size_t kCount = 9;
  static constexpr std::size_t kCentralSize = 9;
  static constexpr std::size_t kRegionSize = 7;
  static constexpr int kRadius = 2;

  static const WindowMaskSet& nagao_matsuyama();

  std::span<const Offset> mask(std::size_t k) const;
  std::size_t size() const { return kCount; }

private:
  WindowMaskSet() = default;
};

}  // namespace despeckle
