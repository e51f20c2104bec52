/// @file mask.hpp
/// @brief Binary masks and the element-wise algebra used by shape completion.
///
/// A mask is a dense row-major H x W grid of {0,1}. Bit 1 marks a pixel
/// that belongs to an adversarial patch.

#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shapecomp {

/// Thrown when two masks that must share dimensions do not.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Extent {
  std::size_t rows = 0;
  std::size_t cols = 0;

  [[nodiscard]] constexpr std::size_t area() const noexcept { return rows * cols; }
  friend constexpr auto operator<=>(const Extent&, const Extent&) = default;
};

inline std::string to_string(const Extent& e) {
  return std::to_string(e.rows) + "x" + std::to_string(e.cols);
}

/// Top-left position of a placed object.
struct Anchor {
  std::size_t row = 0;
  std::size_t col = 0;
  friend constexpr auto operator<=>(const Anchor&, const Anchor&) = default;
};

/// An s x s square placement with top-left corner (row, col).
struct PatchCandidate {
  std::size_t size = 0;
  std::size_t row = 0;
  std::size_t col = 0;

  /// True when the whole window lies inside an image of extent `e`.
  [[nodiscard]] constexpr bool fits(const Extent& e) const noexcept {
    return size >= 1 && size <= e.rows && size <= e.cols && row <= e.rows - size &&
           col <= e.cols - size;
  }
  [[nodiscard]] constexpr bool covers(std::size_t r, std::size_t c) const noexcept {
    return r >= row && r < row + size && c >= col && c < col + size;
  }
  friend constexpr auto operator<=>(const PatchCandidate&, const PatchCandidate&) = default;
};

inline std::string to_string(const PatchCandidate& c) {
  return "s=" + std::to_string(c.size) + "@(" + std::to_string(c.row) + "," +
         std::to_string(c.col) + ")";
}

class BinaryMask {
 public:
  BinaryMask(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) {
      throw std::invalid_argument("BinaryMask: dimensions must be positive, got " +
                                  std::to_string(rows) + "x" + std::to_string(cols));
    }
    bits_.assign(rows * cols, 0);
  }
  explicit BinaryMask(const Extent& e) : BinaryMask(e.rows, e.cols) {}

  /// Builds a mask from text rows; '1', '#' and 'x' are set, '0', '.' and ' ' are clear.
  static BinaryMask from_rows(std::initializer_list<std::string_view> rows) {
    if (rows.size() == 0) throw std::invalid_argument("BinaryMask::from_rows: no rows");
    BinaryMask m(rows.size(), rows.begin()->size());
    std::size_t r = 0;
    for (std::string_view line : rows) {
      if (line.size() != m.cols()) {
        throw DimensionMismatch("BinaryMask::from_rows: ragged row " + std::to_string(r));
      }
      for (std::size_t c = 0; c < line.size(); ++c) {
        switch (line[c]) {
          case '1': case '#': case 'x': m.set(r, c, true); break;
          case '0': case '.': case ' ': break;
          default:
            throw std::invalid_argument(std::string("BinaryMask::from_rows: bad character '") +
                                        line[c] + "'");
        }
      }
      ++r;
    }
    return m;
  }

  /// Mask of a single square window on an otherwise empty canvas.
  static BinaryMask square(const Extent& canvas, const PatchCandidate& cand) {
    if (!cand.fits(canvas)) {
      throw std::out_of_range("BinaryMask::square: " + to_string(cand) + " does not fit " +
                              to_string(canvas));
    }
    BinaryMask m(canvas);
    for (std::size_t r = cand.row; r < cand.row + cand.size; ++r) {
      auto line = m.row(r);
      std::fill_n(line.begin() + static_cast<std::ptrdiff_t>(cand.col), cand.size, 1);
    }
    return m;
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] Extent extent() const noexcept { return {rows_, cols_}; }
  [[nodiscard]] std::size_t area() const noexcept { return bits_.size(); }

  [[nodiscard]] bool operator()(std::size_t r, std::size_t c) const noexcept {
    return bits_[r * cols_ + c] != 0;
  }
  [[nodiscard]] bool at(std::size_t r, std::size_t c) const {
    check(r, c);
    return (*this)(r, c);
  }
  void set(std::size_t r, std::size_t c, bool value) noexcept {
    bits_[r * cols_ + c] = value ? 1 : 0;
  }
  void flip(std::size_t r, std::size_t c) noexcept { bits_[r * cols_ + c] ^= 1; }

  [[nodiscard]] std::span<const std::uint8_t> row(std::size_t r) const noexcept {
    return {bits_.data() + r * cols_, cols_};
  }
  [[nodiscard]] std::span<std::uint8_t> row(std::size_t r) noexcept {
    return {bits_.data() + r * cols_, cols_};
  }
  /// Row-major storage; every element is 0 or 1.
  [[nodiscard]] std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  [[nodiscard]] bool any() const noexcept {
    return std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; });
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  void check(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) {
      throw std::out_of_range("BinaryMask: (" + std::to_string(r) + "," + std::to_string(c) +
                              ") outside " + to_string(extent()));
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint8_t> bits_;
};

/// Number of set pixels, the magnitude ||M||_H.
[[nodiscard]] inline std::size_t popcount(const BinaryMask& m) noexcept {
  std::size_t n = 0;
  for (std::uint8_t b : m.bits()) n += b;
  return n;
}

namespace detail {

inline void require_same_extent(const BinaryMask& a, const BinaryMask& b, const char* what) {
  if (a.extent() != b.extent()) {
    throw DimensionMismatch(std::string(what) + ": " + to_string(a.extent()) + " vs " +
                            to_string(b.extent()));
  }
}

template <typename Op>
BinaryMask combine(const BinaryMask& a, const BinaryMask& b, const char* what, Op op) {
  require_same_extent(a, b, what);
  BinaryMask out(a.extent());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto x = a.row(r);
    auto y = b.row(r);
    auto z = out.row(r);
    for (std::size_t c = 0; c < z.size(); ++c) z[c] = op(x[c], y[c]);
  }
  return out;
}

}  // namespace detail

/// Element-wise OR.
[[nodiscard]] inline BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b) {
  return detail::combine(a, b, "mask_union",
                         [](std::uint8_t x, std::uint8_t y) -> std::uint8_t { return x | y; });
}

[[nodiscard]] inline BinaryMask mask_intersection(const BinaryMask& a, const BinaryMask& b) {
  return detail::combine(a, b, "mask_intersection",
                         [](std::uint8_t x, std::uint8_t y) -> std::uint8_t { return x & y; });
}

/// a AND NOT b
[[nodiscard]] inline BinaryMask mask_difference(const BinaryMask& a, const BinaryMask& b) {
  return detail::combine(a, b, "mask_difference", [](std::uint8_t x, std::uint8_t y) -> std::uint8_t {
    return x & static_cast<std::uint8_t>(y ^ 1);
  });
}

/// Exact Hamming distance, the XOR popcount of two equal-size masks.
[[nodiscard]] inline std::size_t hamming_distance(const BinaryMask& a, const BinaryMask& b) {
  detail::require_same_extent(a, b, "hamming_distance");
  std::size_t d = 0;
  auto x = a.bits();
  auto y = b.bits();
  for (std::size_t k = 0; k < x.size(); ++k) d += static_cast<std::size_t>(x[k] ^ y[k]);
  return d;
}

/// True when every set pixel of `sub` is also set in `super`.
[[nodiscard]] inline bool is_subset(const BinaryMask& sub, const BinaryMask& super) {
  detail::require_same_extent(sub, super, "is_subset");
  auto x = sub.bits();
  auto y = super.bits();
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] > y[k]) return false;
  }
  return true;
}

[[nodiscard]] inline BinaryMask flip_horizontal(const BinaryMask& m) {
  BinaryMask out(m.extent());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto src = m.row(r);
    std::reverse_copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

[[nodiscard]] inline BinaryMask flip_vertical(const BinaryMask& m) {
  BinaryMask out(m.extent());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto src = m.row(r);
    std::copy(src.begin(), src.end(), out.row(m.rows() - 1 - r).begin());
  }
  return out;
}

[[nodiscard]] inline BinaryMask transpose(const BinaryMask& m) {
  BinaryMask out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out.set(c, r, m(r, c));
  }
  return out;
}

}  // namespace shapecomp
