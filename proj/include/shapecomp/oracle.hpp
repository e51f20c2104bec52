/// @file oracle.hpp
/// @brief Brute-force reference completion by direct candidate enumeration.
///
/// Used only to cross-check the summed-area construction. Nothing here may
/// use prefix sums; every distance is counted pixel by pixel.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "shapecomp/mask.hpp"

namespace shapecomp::oracle {

class NoCandidateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline void check_gamma(double gamma) {
  if (!(gamma >= 0.0) || gamma >= 1.0) {
    throw std::invalid_argument("oracle: gamma must lie in [0, 1)");
  }
}

/// Distance to the s x s indicator at (row, col): mismatches inside the
/// window plus every set pixel outside it.
[[nodiscard]] inline std::size_t window_distance(const BinaryMask& mask, std::size_t total_ones,
                                                 const PatchCandidate& cand) {
  std::size_t zeros_inside = 0;
  std::size_t ones_inside = 0;
  for (std::size_t r = cand.row; r < cand.row + cand.size; ++r) {
    for (std::size_t c = cand.col; c < cand.col + cand.size; ++c) {
      if (mask(r, c)) {
        ++ones_inside;
      } else {
        ++zeros_inside;
      }
    }
  }
  return zeros_inside + (total_ones - ones_inside);
}

/// Compares the whole image against the indicator, one pixel at a time.
[[nodiscard]] inline std::size_t rescan_distance(const BinaryMask& mask, const PatchCandidate& cand) {
  std::size_t d = 0;
  for (std::size_t r = 0; r < mask.rows(); ++r) {
    for (std::size_t c = 0; c < mask.cols(); ++c) {
      if (mask(r, c) != cand.covers(r, c)) ++d;
    }
  }
  return d;
}

[[nodiscard]] inline bool within(std::size_t distance, std::size_t s, double gamma) {
  return static_cast<double>(distance) / static_cast<double>(s * s) <= gamma;
}

[[nodiscard]] inline BinaryMask oracle_complete_single(const BinaryMask& mask, std::size_t s,
                                                       double gamma) {
  check_gamma(gamma);
  if (s == 0) throw std::invalid_argument("oracle: size must be >= 1");
  BinaryMask out(mask.extent());
  if (s > mask.rows() || s > mask.cols()) return out;

  std::size_t total = 0;
  for (std::size_t r = 0; r < mask.rows(); ++r) {
    for (std::size_t c = 0; c < mask.cols(); ++c) total += mask(r, c) ? 1 : 0;
  }
  for (std::size_t i = 0; i + s <= mask.rows(); ++i) {
    for (std::size_t j = 0; j + s <= mask.cols(); ++j) {
      const PatchCandidate cand{s, i, j};
      if (!within(window_distance(mask, total, cand), s, gamma)) continue;
      for (std::size_t r = i; r < i + s; ++r) {
        for (std::size_t c = j; c < j + s; ++c) out.set(r, c, true);
      }
    }
  }
  return out;
}

[[nodiscard]] inline BinaryMask oracle_complete_multi(const BinaryMask& mask,
                                                      const std::vector<std::size_t>& sizes,
                                                      double gamma) {
  check_gamma(gamma);
  BinaryMask out(mask.extent());
  for (std::size_t s : sizes) {
    const BinaryMask one = oracle_complete_single(mask, s, gamma);
    for (std::size_t r = 0; r < out.rows(); ++r) {
      for (std::size_t c = 0; c < out.cols(); ++c) {
        if (one(r, c)) out.set(r, c, true);
      }
    }
  }
  return out;
}

struct MinDistance {
  std::size_t distance = 0;
  PatchCandidate argmin;
};

/// Smallest candidate distance for size s; ties go to the first candidate in
/// row-major order of the top-left corner.
[[nodiscard]] inline MinDistance oracle_min_distance(const BinaryMask& mask, std::size_t s) {
  if (s == 0 || s > mask.rows() || s > mask.cols()) {
    throw NoCandidateError("oracle_min_distance: no " + std::to_string(s) + "x" +
                           std::to_string(s) + " placement fits " + to_string(mask.extent()));
  }
  std::size_t total = 0;
  for (std::uint8_t b : mask.bits()) total += b;
  MinDistance best{s * s + total + 1, {}};
  for (std::size_t i = 0; i + s <= mask.rows(); ++i) {
    for (std::size_t j = 0; j + s <= mask.cols(); ++j) {
      const PatchCandidate cand{s, i, j};
      const std::size_t d = window_distance(mask, total, cand);
      if (d < best.distance) best = {d, cand};
    }
  }
  return best;
}

}  // namespace shapecomp::oracle
