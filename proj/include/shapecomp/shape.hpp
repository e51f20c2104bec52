/// @file shape.hpp
/// @brief Parametric shape masks of roughly n x n pixels for shape-generalization runs.
///
/// Square and Rectangle have area exactly n^2. The curved and slanted kinds
/// are rasterized by pixel-center inclusion in a scaled convex region whose
/// scale is picked so the pixel count is as close to n^2 as the lattice allows.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shapecomp/mask.hpp"

namespace shapecomp {

enum class ShapeKind { Square, Circle, Rectangle, Diamond, Triangle, Ellipse };

inline constexpr std::array<ShapeKind, 6> kAllShapeKinds = {
    ShapeKind::Square,  ShapeKind::Circle,   ShapeKind::Rectangle,
    ShapeKind::Diamond, ShapeKind::Triangle, ShapeKind::Ellipse};

[[nodiscard]] constexpr std::string_view to_string(ShapeKind k) noexcept {
  switch (k) {
    case ShapeKind::Square: return "square";
    case ShapeKind::Circle: return "circle";
    case ShapeKind::Rectangle: return "rectangle";
    case ShapeKind::Diamond: return "diamond";
    case ShapeKind::Triangle: return "triangle";
    case ShapeKind::Ellipse: return "ellipse";
  }
  return "unknown";
}

[[nodiscard]] inline std::optional<ShapeKind> parse_shape_kind(std::string_view name) {
  for (ShapeKind k : kAllShapeKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

/// The shape does not fit on the canvas at the requested anchor.
class PlacementError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Cropped shape footprint, independent of any canvas.
struct ShapeStencil {
  Extent extent;
  std::vector<std::uint8_t> bits;  // row-major, extent.rows x extent.cols

  [[nodiscard]] bool operator()(std::size_t r, std::size_t c) const noexcept {
    return bits[r * extent.cols + c] != 0;
  }
};

namespace detail {

/// Rows x cols with rows * cols == area and cols / rows closest to 2 on a log scale.
inline Extent two_to_one_factorization(std::size_t area) {
  Extent best{1, area};
  double best_err = std::abs(std::log(static_cast<double>(area)) - std::log(2.0));
  for (std::size_t r = 1; r * r <= area; ++r) {
    if (area % r != 0) continue;
    const std::size_t c = area / r;
    const double err = std::abs(std::log(static_cast<double>(c) / static_cast<double>(r)) -
                                std::log(2.0));
    // ties go to the wider rectangle (larger c / r), which is found first
    if (err < best_err) {
      best = {r, c};
      best_err = err;
    }
  }
  return best;
}

/// Coordinates are scaled by this factor so the region center can sit on a
/// sub-pixel grid; finer centers give finer popcount steps.
inline constexpr std::int64_t kSubpixel = 8;

/// Integer gauge of a convex region on scaled coordinates: the region scaled
/// by level L is {gauge <= L}. y grows downward.
inline std::int64_t gauge(ShapeKind kind, std::int64_t y, std::int64_t x) {
  switch (kind) {
    case ShapeKind::Circle: return x * x + y * y;
    case ShapeKind::Ellipse: return x * x + 4 * y * y;  // twice as wide as tall
    case ShapeKind::Diamond: return std::abs(x) + std::abs(y);
    case ShapeKind::Triangle: return std::max(y, 2 * std::abs(x) - y);  // apex up
    default: break;
  }
  throw std::logic_error("gauge: not a gauge-rasterized shape");
}

inline ShapeStencil gauge_stencil(ShapeKind kind, std::size_t n) {
  const std::size_t target = n * n;
  const std::int64_t half = static_cast<std::int64_t>(n) + 2;
  const std::size_t side = static_cast<std::size_t>(2 * half + 1);

  struct Choice {
    std::size_t error;
    std::int64_t offset_y;
    std::int64_t offset_x;
    std::int64_t level;
  };
  std::vector<std::int64_t> values(side * side);
  auto evaluate = [&](std::int64_t oy, std::int64_t ox) {
    std::size_t i = 0;
    for (std::int64_t dy = -half; dy <= half; ++dy) {
      for (std::int64_t dx = -half; dx <= half; ++dx) {
        values[i++] = gauge(kind, kSubpixel * dy + oy, kSubpixel * dx + ox);
      }
    }
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(target - 1), values.end());
    const std::int64_t hit = values[target - 1];
    std::size_t below = 0, upto = 0;
    std::optional<std::int64_t> under;
    for (std::int64_t v : values) {
      if (v < hit) {
        ++below;
        if (!under || v > *under) under = v;
      }
      if (v <= hit) ++upto;
    }
    Choice c{upto - target, oy, ox, hit};
    if (under && target - below < c.error) c = Choice{target - below, oy, ox, *under};
    return c;
  };
  auto search = [&](std::int64_t step) {
    std::optional<Choice> best;
    for (std::int64_t oy = 0; oy < kSubpixel; oy += step) {
      for (std::int64_t ox = 0; ox < kSubpixel; ox += step) {
        const Choice c = evaluate(oy, ox);
        if (!best || c.error < best->error) best = c;
        if (best->error == 0) return best;
      }
    }
    return best;
  };

  // Centers on a pixel or halfway between pixels keep the mirror symmetries;
  // finer centers are only used when those miss the area by more than 2%.
  std::optional<Choice> best = search(kSubpixel / 2);
  if (50 * best->error > target) best = search(1);

  // Crop the selected level set to its bounding box.
  std::size_t r0 = side, r1 = 0, c0 = side, c1 = 0;
  std::vector<std::uint8_t> scratch(side * side, 0);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      const std::int64_t dy = static_cast<std::int64_t>(r) - half;
      const std::int64_t dx = static_cast<std::int64_t>(c) - half;
      if (gauge(kind, kSubpixel * dy + best->offset_y, kSubpixel * dx + best->offset_x) <= best->level) {
        scratch[r * side + c] = 1;
        r0 = std::min(r0, r);
        r1 = std::max(r1, r);
        c0 = std::min(c0, c);
        c1 = std::max(c1, c);
      }
    }
  }
  ShapeStencil st{{r1 - r0 + 1, c1 - c0 + 1}, {}};
  st.bits.resize(st.extent.area());
  for (std::size_t r = r0; r <= r1; ++r) {
    for (std::size_t c = c0; c <= c1; ++c) {
      st.bits[(r - r0) * st.extent.cols + (c - c0)] = scratch[r * side + c];
    }
  }
  return st;
}

}  // namespace detail

/// Footprint of a shape of kind `kind` with nominal size n x n.
[[nodiscard]] inline ShapeStencil make_stencil(ShapeKind kind, std::size_t n) {
  if (n == 0) throw std::invalid_argument("make_stencil: n must be positive");
  switch (kind) {
    case ShapeKind::Square:
      return {{n, n}, std::vector<std::uint8_t>(n * n, 1)};
    case ShapeKind::Rectangle: {
      const Extent e = detail::two_to_one_factorization(n * n);
      return {e, std::vector<std::uint8_t>(e.area(), 1)};
    }
    default:
      return detail::gauge_stencil(kind, n);
  }
}

/// Places a stencil with its bounding box's top-left corner at `anchor`.
[[nodiscard]] inline BinaryMask place_stencil(const ShapeStencil& st, const Anchor& anchor,
                                              const Extent& canvas) {
  if (st.extent.rows > canvas.rows || st.extent.cols > canvas.cols ||
      anchor.row > canvas.rows - st.extent.rows || anchor.col > canvas.cols - st.extent.cols) {
    throw PlacementError("shape of extent " + to_string(st.extent) + " at (" +
                         std::to_string(anchor.row) + "," + std::to_string(anchor.col) +
                         ") exceeds canvas " + to_string(canvas));
  }
  BinaryMask m(canvas);
  for (std::size_t r = 0; r < st.extent.rows; ++r) {
    for (std::size_t c = 0; c < st.extent.cols; ++c) {
      if (st(r, c)) m.set(anchor.row + r, anchor.col + c, true);
    }
  }
  return m;
}

[[nodiscard]] inline BinaryMask generate_shape_mask(ShapeKind kind, std::size_t n,
                                                    const Anchor& anchor, const Extent& canvas) {
  return place_stencil(make_stencil(kind, n), anchor, canvas);
}

/// Anchor that centers the shape's bounding box on the canvas.
[[nodiscard]] inline Anchor centered_anchor(ShapeKind kind, std::size_t n, const Extent& canvas) {
  const Extent e = make_stencil(kind, n).extent;
  if (e.rows > canvas.rows || e.cols > canvas.cols) {
    throw PlacementError("shape of extent " + to_string(e) + " exceeds canvas " +
                         to_string(canvas));
  }
  return {(canvas.rows - e.rows) / 2, (canvas.cols - e.cols) / 2};
}

}  // namespace shapecomp
