/// @file integral_image.hpp
/// @brief Summed-area tables with constant-time window sums.
///
/// sums(i, j) holds the number of set cells in rows [0, i) and columns [0, j)
/// of the source grid, so row 0 and column 0 are zero and sums(H, W) is the
/// total. Any axis-aligned block sum is four lookups.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shapecomp/mask.hpp"

namespace shapecomp {

template <typename Count = std::uint32_t>
class SummedAreaTable {
 public:
  using value_type = Count;

  /// Empty table over a 0 x 0 grid; fill it with assign().
  SummedAreaTable() = default;

  /// Builds the table from any grid accessor `cell(r, c)` returning a
  /// nonnegative integer. One pass, row by row.
  template <typename CellFn>
  static SummedAreaTable build(const Extent& source, CellFn&& cell) {
    SummedAreaTable t;
    t.assign(source, std::forward<CellFn>(cell));
    return t;
  }

  /// Rebuilds in place; storage is reused when it is already large enough.
  template <typename CellFn>
  void assign(const Extent& source, CellFn&& cell) {
    if (source.rows == 0 || source.cols == 0) {
      throw std::invalid_argument("SummedAreaTable: empty source grid");
    }
    if (source.area() > static_cast<std::size_t>(std::numeric_limits<Count>::max())) {
      throw std::length_error("SummedAreaTable: grid too large for the count type");
    }
    source_ = source;
    const std::size_t stride = source.cols + 1;
    sums_.resize((source.rows + 1) * stride);
    std::fill(sums_.begin(), sums_.begin() + static_cast<std::ptrdiff_t>(stride), Count{0});
    for (std::size_t r = 0; r < source.rows; ++r) {
      const Count* above = sums_.data() + r * stride;
      Count* here = sums_.data() + (r + 1) * stride;
      here[0] = 0;
      Count row_total = 0;
      for (std::size_t c = 0; c < source.cols; ++c) {
        row_total += static_cast<Count>(cell(r, c));
        here[c + 1] = above[c + 1] + row_total;
      }
    }
  }

  /// Extent of the source grid (the table itself is one larger each way).
  [[nodiscard]] Extent source_extent() const noexcept { return source_; }

  [[nodiscard]] Count operator()(std::size_t i, std::size_t j) const noexcept {
    return sums_[i * (source_.cols + 1) + j];
  }
  [[nodiscard]] Count at(std::size_t i, std::size_t j) const {
    if (i > source_.rows || j > source_.cols) {
      throw std::out_of_range("SummedAreaTable: index (" + std::to_string(i) + "," +
                              std::to_string(j) + ") outside table");
    }
    return (*this)(i, j);
  }

  [[nodiscard]] Count total() const noexcept { return (*this)(source_.rows, source_.cols); }

  /// Sum over rows [r0, r1) and columns [c0, c1). No bounds checking.
  [[nodiscard]] Count block_sum(std::size_t r0, std::size_t c0, std::size_t r1,
                                std::size_t c1) const noexcept {
    return (*this)(r1, c1) - (*this)(r0, c1) - (*this)(r1, c0) + (*this)(r0, c0);
  }

 private:
  Extent source_;
  std::vector<Count> sums_ = std::vector<Count>(1, Count{0});
};

using IntegralImage = SummedAreaTable<std::uint32_t>;

[[nodiscard]] inline IntegralImage integral_image(const BinaryMask& mask) {
  auto bits = mask.bits();
  const std::size_t cols = mask.cols();
  return IntegralImage::build(mask.extent(),
                              [&](std::size_t r, std::size_t c) { return bits[r * cols + c]; });
}

/// Number of set pixels inside the candidate's s x s window.
[[nodiscard]] inline std::size_t window_sum(const IntegralImage& integral,
                                            const PatchCandidate& cand) {
  if (!cand.fits(integral.source_extent())) {
    throw std::out_of_range("window_sum: " + to_string(cand) + " outside " +
                            to_string(integral.source_extent()));
  }
  return integral.block_sum(cand.row, cand.col, cand.row + cand.size, cand.col + cand.size);
}

/// d_H(mask, M^{s,(i,j)}) = s^2 + ||mask||_H - 2 * (ones inside the window).
[[nodiscard]] inline std::size_t hamming_to_candidate(const IntegralImage& integral,
                                                      std::size_t total_ones,
                                                      const PatchCandidate& cand) {
  const std::size_t inside = window_sum(integral, cand);
  return cand.size * cand.size + total_ones - 2 * inside;
}

}  // namespace shapecomp
