/// @file completion.hpp
/// @brief Minimal square-prior shape completion of a patch-segmentation mask.
///
/// Given an observed mask P and a patch size s, the completion sets pixel
/// (i, j) iff some fully contained s x s window W covering (i, j) satisfies
/// d_H(P, W) / s^2 <= gamma. Any true s x s patch within that relative
/// distortion of P is then covered pixel for pixel, and no smaller mask
/// guarantees this.
///
/// The construction runs in O(H * W) for any s:
///   1. summed-area table of P gives every window distance in O(1);
///   2. the accept matrix marks windows within the distance cutoff;
///   3. a second summed-area table over the accept matrix gives, per pixel,
///      the number of accepted windows covering it.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shapecomp/integral_image.hpp"
#include "shapecomp/mask.hpp"

namespace shapecomp {

/// gamma_t = 1 - alpha * beta^(t-1), t = 1..t_max.
///
/// alpha and beta are kept in extended precision so that decimal settings
/// such as alpha = 0.9 yield gamma_1 == 0.1 after the single final rounding.
struct GammaSchedule {
  long double alpha = 0.9L;
  long double beta = 0.7L;
  int t_max = 15;

  void validate() const {
    if (!(alpha > 0.0L && alpha < 1.0L)) throw std::invalid_argument("GammaSchedule: alpha must lie in (0,1)");
    if (!(beta > 0.0L && beta < 1.0L)) throw std::invalid_argument("GammaSchedule: beta must lie in (0,1)");
    if (t_max < 1) throw std::invalid_argument("GammaSchedule: t_max must be >= 1");
    // Late iterations can round to the previous gamma or to 1.0 in double.
    double prev = -1.0;
    for (int t = 1; t <= t_max; ++t) {
      const double g = gamma(t);
      if (!(g > prev && g < 1.0)) {
        throw std::invalid_argument("GammaSchedule: gamma_" + std::to_string(t) +
                                    " is not strictly increasing below 1 in double precision");
      }
      prev = g;
    }
  }

  /// gamma at 1-based iteration t.
  [[nodiscard]] double gamma(int t) const {
    if (t < 1 || t > t_max) throw std::out_of_range("GammaSchedule: iteration out of range");
    long double decay = 1.0L;
    for (int k = 1; k < t; ++k) decay *= beta;
    return static_cast<double>(1.0L - alpha * decay);
  }

  [[nodiscard]] std::vector<double> gammas() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(t_max));
    for (int t = 1; t <= t_max; ++t) out.push_back(gamma(t));
    return out;
  }
};

/// Strictly increasing set of candidate patch sizes.
class SizeSet {
 public:
  SizeSet() = default;
  SizeSet(std::initializer_list<std::size_t> sizes) : SizeSet(std::vector<std::size_t>(sizes)) {}
  explicit SizeSet(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    std::sort(sizes_.begin(), sizes_.end());
    if (!sizes_.empty() && sizes_.front() == 0) {
      throw std::invalid_argument("SizeSet: sizes must be >= 1");
    }
    if (std::adjacent_find(sizes_.begin(), sizes_.end()) != sizes_.end()) {
      throw std::invalid_argument("SizeSet: duplicate size");
    }
  }

  [[nodiscard]] const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
  [[nodiscard]] bool empty() const noexcept { return sizes_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return sizes_.size(); }
  [[nodiscard]] auto begin() const noexcept { return sizes_.begin(); }
  [[nodiscard]] auto end() const noexcept { return sizes_.end(); }

  [[nodiscard]] bool contains(std::size_t s) const {
    return std::binary_search(sizes_.begin(), sizes_.end(), s);
  }
  [[nodiscard]] bool is_subset_of(const SizeSet& other) const {
    return std::includes(other.sizes_.begin(), other.sizes_.end(), sizes_.begin(), sizes_.end());
  }

  friend bool operator==(const SizeSet&, const SizeSet&) = default;

 private:
  std::vector<std::size_t> sizes_;
};

inline void validate_gamma(double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  if (gamma >= 1.0) {
    throw std::invalid_argument("gamma >= 1 is not usable: it accepts every window even for an empty mask");
  }
}

/// Largest integer k with k <= gamma * s^2, from one double multiply.
/// A window is accepted iff its Hamming distance is <= k.
[[nodiscard]] inline std::size_t distance_cutoff(double gamma, std::size_t s) {
  validate_gamma(gamma);
  const double area = static_cast<double>(s) * static_cast<double>(s);
  return static_cast<std::size_t>(std::floor(gamma * area));
}

/// Per-size intermediate state of the construction.
struct CandidateField {
  std::size_t size = 0;
  Extent image;       // H x W
  Extent placements;  // (H - s + 1) x (W - s + 1)
  std::vector<std::uint8_t> accept;         // placements, row-major
  std::vector<std::uint32_t> cover_count;   // image, row-major
  std::size_t accepted = 0;

  [[nodiscard]] bool accepts(std::size_t row, std::size_t col) const noexcept {
    return accept[row * placements.cols + col] != 0;
  }
  [[nodiscard]] std::uint32_t cover(std::size_t r, std::size_t c) const noexcept {
    return cover_count[r * image.cols + c];
  }
  /// Pixels covered by at least one accepted window.
  [[nodiscard]] BinaryMask to_mask() const {
    BinaryMask m(image);
    for (std::size_t r = 0; r < image.rows; ++r) {
      auto out = m.row(r);
      const std::uint32_t* in = cover_count.data() + r * image.cols;
      for (std::size_t c = 0; c < image.cols; ++c) out[c] = in[c] != 0 ? 1 : 0;
    }
    return m;
  }
};

[[nodiscard]] constexpr bool size_fits(const Extent& e, std::size_t s) noexcept {
  return s >= 1 && s <= e.rows && s <= e.cols;
}

/// Accept matrix and cover counts for size s. Requires s to fit the image.
[[nodiscard]] inline CandidateField candidate_field(const IntegralImage& observed, std::size_t s,
                                                    double gamma) {
  const Extent image = observed.source_extent();
  if (!size_fits(image, s)) {
    throw std::out_of_range("candidate_field: size " + std::to_string(s) + " does not fit " +
                            to_string(image));
  }
  const std::size_t cutoff = distance_cutoff(gamma, s);
  const std::size_t area = s * s;
  const std::size_t total = observed.total();

  CandidateField f;
  f.size = s;
  f.image = image;
  f.placements = {image.rows - s + 1, image.cols - s + 1};
  f.accept.assign(f.placements.area(), 0);

  for (std::size_t i = 0; i < f.placements.rows; ++i) {
    std::uint8_t* out = f.accept.data() + i * f.placements.cols;
    for (std::size_t j = 0; j < f.placements.cols; ++j) {
      const std::size_t inside = observed.block_sum(i, j, i + s, j + s);
      const std::size_t distance = area + total - 2 * inside;
      const bool ok = distance <= cutoff;
      out[j] = ok ? 1 : 0;
      f.accepted += ok ? 1 : 0;
    }
  }

  const auto accepted_table = IntegralImage::build(
      f.placements, [&](std::size_t i, std::size_t j) { return f.accept[i * f.placements.cols + j]; });

  // Windows covering pixel r have top rows in [r - s + 1, r], clipped to the
  // placement range; likewise for columns.
  f.cover_count.assign(image.area(), 0);
  for (std::size_t r = 0; r < image.rows; ++r) {
    const std::size_t r0 = r + 1 >= s ? r + 1 - s : 0;
    const std::size_t r1 = std::min(r + 1, f.placements.rows);
    std::uint32_t* out = f.cover_count.data() + r * image.cols;
    for (std::size_t c = 0; c < image.cols; ++c) {
      const std::size_t c0 = c + 1 >= s ? c + 1 - s : 0;
      const std::size_t c1 = std::min(c + 1, f.placements.cols);
      out[c] = accepted_table.block_sum(r0, c0, r1, c1);
    }
  }
  return f;
}

[[nodiscard]] inline CandidateField candidate_field(const BinaryMask& observed, std::size_t s,
                                                    double gamma) {
  return candidate_field(integral_image(observed), s, gamma);
}

struct SizeCompletion {
  BinaryMask mask;
  std::size_t accepted = 0;
  /// The size exceeded an image dimension and contributed nothing.
  bool skipped = false;
};

[[nodiscard]] inline SizeCompletion complete_single_size(const IntegralImage& observed,
                                                         std::size_t s, double gamma) {
  validate_gamma(gamma);
  if (s == 0) throw std::invalid_argument("complete_single_size: size must be >= 1");
  if (!size_fits(observed.source_extent(), s)) {
    return {BinaryMask(observed.source_extent()), 0, true};
  }
  const CandidateField f = candidate_field(observed, s, gamma);
  return {f.to_mask(), f.accepted, false};
}

/// Buffers for repeated completions of same-sized observations, such as
/// consecutive video frames. Skips the intermediate accept and cover arrays.
class CompletionWorkspace {
 public:
  /// Writes the size-s completion of `observed` into `out` (resized to the
  /// observation if needed) and returns the number of accepted windows.
  std::size_t complete(const BinaryMask& observed, std::size_t s, double gamma, BinaryMask& out) {
    validate_gamma(gamma);
    if (s == 0) throw std::invalid_argument("complete_single_size: size must be >= 1");
    const Extent image = observed.extent();
    if (out.extent() != image) out = BinaryMask(image);
    if (!size_fits(image, s)) {
      for (std::size_t r = 0; r < image.rows; ++r) {
        auto row = out.row(r);
        std::fill(row.begin(), row.end(), std::uint8_t{0});
      }
      return 0;
    }

    const auto bits = observed.bits();
    image_.assign(image, [&](std::size_t r, std::size_t c) { return bits[r * image.cols + c]; });
    const std::size_t cutoff = distance_cutoff(gamma, s);
    const std::size_t area = s * s;
    const std::size_t total = image_.total();
    const Extent placements{image.rows - s + 1, image.cols - s + 1};
    std::size_t accepted = 0;
    accepted_.assign(placements, [&](std::size_t i, std::size_t j) -> std::uint32_t {
      const std::size_t inside = image_.block_sum(i, j, i + s, j + s);
      const bool ok = area + total - 2 * inside <= cutoff;
      accepted += ok ? 1 : 0;
      return ok ? 1 : 0;
    });

    for (std::size_t r = 0; r < image.rows; ++r) {
      const std::size_t r0 = r + 1 >= s ? r + 1 - s : 0;
      const std::size_t r1 = std::min(r + 1, placements.rows);
      auto row = out.row(r);
      for (std::size_t c = 0; c < image.cols; ++c) {
        const std::size_t c0 = c + 1 >= s ? c + 1 - s : 0;
        const std::size_t c1 = std::min(c + 1, placements.cols);
        row[c] = accepted_.block_sum(r0, c0, r1, c1) != 0 ? 1 : 0;
      }
    }
    return accepted;
  }

 private:
  IntegralImage image_;
  SummedAreaTable<std::uint32_t> accepted_;
};

[[nodiscard]] inline SizeCompletion complete_single_size(const BinaryMask& observed, std::size_t s,
                                                         double gamma) {
  validate_gamma(gamma);
  if (s == 0) throw std::invalid_argument("complete_single_size: size must be >= 1");
  SizeCompletion out{BinaryMask(observed.extent()), 0, !size_fits(observed.extent(), s)};
  if (out.skipped) return out;
  CompletionWorkspace ws;
  out.accepted = ws.complete(observed, s, gamma, out.mask);
  return out;
}

struct MultiSizeCompletion {
  BinaryMask mask;
  std::map<std::size_t, std::size_t> accepted;  // per fitting size
  std::vector<std::size_t> skipped;
};

[[nodiscard]] inline MultiSizeCompletion complete_multi_size(const IntegralImage& observed,
                                                             const SizeSet& sizes, double gamma) {
  validate_gamma(gamma);
  MultiSizeCompletion out{BinaryMask(observed.source_extent()), {}, {}};
  for (std::size_t s : sizes) {
    SizeCompletion one = complete_single_size(observed, s, gamma);
    if (one.skipped) {
      out.skipped.push_back(s);
      continue;
    }
    out.accepted[s] = one.accepted;
    if (one.accepted > 0) out.mask = mask_union(out.mask, one.mask);
  }
  return out;
}

[[nodiscard]] inline MultiSizeCompletion complete_multi_size(const BinaryMask& observed,
                                                             const SizeSet& sizes, double gamma) {
  return complete_multi_size(integral_image(observed), sizes, gamma);
}

struct CompletionReport {
  bool attack_found = false;
  std::optional<double> gamma_used;
  int iterations_run = 0;
  std::map<std::size_t, std::size_t> per_size_accepted;
  std::vector<std::size_t> skipped_sizes;
  std::size_t output_popcount = 0;

  friend bool operator==(const CompletionReport&, const CompletionReport&) = default;
};

struct SearchResult {
  BinaryMask mask;
  CompletionReport report;
};

/// Runs the multi-size completion at gamma_1 < gamma_2 < ... and returns the
/// first nonempty mask. An empty result after t_max iterations means no patch.
[[nodiscard]] inline SearchResult gamma_search(const BinaryMask& observed, const SizeSet& sizes,
                                               const GammaSchedule& schedule) {
  schedule.validate();
  const IntegralImage table = integral_image(observed);
  SearchResult result{BinaryMask(observed.extent()), {}};
  CompletionReport& rep = result.report;

  // An empty observation is at relative distance 1 from every window, and
  // every gamma_t < 1, so no iteration can accept anything.
  if (table.total() == 0) {
    for (std::size_t s : sizes) {
      if (size_fits(observed.extent(), s)) {
        rep.per_size_accepted[s] = 0;
      } else {
        rep.skipped_sizes.push_back(s);
      }
    }
    rep.iterations_run = schedule.t_max;
    return result;
  }

  for (int t = 1; t <= schedule.t_max; ++t) {
    const double gamma = schedule.gamma(t);
    MultiSizeCompletion step = complete_multi_size(table, sizes, gamma);
    rep.iterations_run = t;
    rep.per_size_accepted = std::move(step.accepted);
    rep.skipped_sizes = std::move(step.skipped);
    if (step.mask.any()) {
      rep.attack_found = true;
      rep.gamma_used = gamma;
      rep.output_popcount = popcount(step.mask);
      result.mask = std::move(step.mask);
      return result;
    }
  }
  return result;
}

/// Final defended mask: observation united with its completion.
[[nodiscard]] inline BinaryMask final_mask(const BinaryMask& observed, const BinaryMask& completed) {
  return mask_union(observed, completed);
}

/// Zeroes every pixel of `image` covered by `mask`.
[[nodiscard]] inline BinaryMask apply_mask(const BinaryMask& image, const BinaryMask& mask) {
  return mask_difference(image, mask);
}

}  // namespace shapecomp
