/// @file corruption.hpp
/// @brief Seeded corruptions of a ground-truth patch mask with a Hamming budget,
/// and trials of the coverage guarantee.
///
/// Every model changes at most `budget` pixels. The four models emulate
/// typical segmenter failures: scattered noise, missed patch borders,
/// bleeding into the background, and a missed patch center.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shapecomp/completion.hpp"
#include "shapecomp/mask.hpp"
#include "shapecomp/random.hpp"

namespace shapecomp {

enum class CorruptionKind { UniformFlip, ErodeBoundary, DilateOutside, SplitHole };

inline constexpr std::array<CorruptionKind, 4> kAllCorruptionKinds = {
    CorruptionKind::UniformFlip, CorruptionKind::ErodeBoundary, CorruptionKind::DilateOutside,
    CorruptionKind::SplitHole};

[[nodiscard]] constexpr std::string_view to_string(CorruptionKind k) noexcept {
  switch (k) {
    case CorruptionKind::UniformFlip: return "uniform-flip";
    case CorruptionKind::ErodeBoundary: return "erode-boundary";
    case CorruptionKind::DilateOutside: return "dilate-outside";
    case CorruptionKind::SplitHole: return "split-hole";
  }
  return "unknown";
}

[[nodiscard]] inline std::optional<CorruptionKind> parse_corruption_kind(std::string_view name) {
  for (CorruptionKind k : kAllCorruptionKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

struct CorruptionModel {
  CorruptionKind kind = CorruptionKind::UniformFlip;
  std::size_t budget = 0;
  std::uint64_t seed = kDefaultSeed;
};

struct CorruptionResult {
  BinaryMask mask;
  std::size_t distance = 0;        // exact d_H(output, input)
  std::size_t applied_budget = 0;  // budget after clamping
  bool clamped = false;            // requested budget exceeded the model's region
};

namespace detail {

using Pixel = std::pair<std::size_t, std::size_t>;

inline bool has_neighbor_with(const BinaryMask& m, std::size_t r, std::size_t c, bool value,
                              bool edge_counts) {
  const bool up = r > 0 ? m(r - 1, c) == value : edge_counts;
  const bool down = r + 1 < m.rows() ? m(r + 1, c) == value : edge_counts;
  const bool left = c > 0 ? m(r, c - 1) == value : edge_counts;
  const bool right = c + 1 < m.cols() ? m(r, c + 1) == value : edge_counts;
  return up || down || left || right;
}

/// Repeatedly toggles random pixels of the current frontier. For `grow`
/// the frontier is background next to the mask, otherwise it is mask pixels
/// next to background (the image border counts as background).
inline void peel(BinaryMask& m, std::size_t count, bool grow, Rng& rng) {
  std::vector<Pixel> frontier;
  while (count > 0) {
    frontier.clear();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (m(r, c) == grow) continue;
        if (has_neighbor_with(m, r, c, grow, !grow)) frontier.emplace_back(r, c);
      }
    }
    if (frontier.empty()) return;
    rng.shuffle(std::span<Pixel>(frontier));
    const std::size_t take = std::min(count, frontier.size());
    for (std::size_t k = 0; k < take; ++k) m.set(frontier[k].first, frontier[k].second, grow);
    count -= take;
  }
}

inline void uniform_flip(BinaryMask& m, std::size_t count, Rng& rng) {
  std::vector<std::size_t> order(m.area());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  // partial Fisher-Yates: the first `count` slots become a uniform sample
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t pick = k + static_cast<std::size_t>(rng.below(order.size() - k));
    std::swap(order[k], order[pick]);
    m.flip(order[k] / m.cols(), order[k] % m.cols());
  }
}

inline void split_hole(BinaryMask& m, std::size_t count, Rng& rng) {
  if (count == 0) return;
  std::size_t r0 = m.rows(), r1 = 0, c0 = m.cols(), c1 = 0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (!m(r, c)) continue;
      r0 = std::min(r0, r);
      r1 = std::max(r1, r);
      c0 = std::min(c0, c);
      c1 = std::max(c1, c);
    }
  }
  const std::size_t box_rows = r1 - r0 + 1;
  const std::size_t box_cols = c1 - c0 + 1;
  count = std::min(count, box_rows * box_cols);

  // Near-square hole of `count` cells: full rows of width w, the last row partial.
  std::size_t h = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::sqrt(static_cast<double>(count))), 1, box_rows);
  const std::size_t w = std::min(box_cols, (count + h - 1) / h);
  h = std::min(box_rows, (count + w - 1) / w);

  auto offset = [&rng](std::size_t box, std::size_t hole) -> std::size_t {
    // keep a one-pixel rim of patch around the hole when there is room
    if (box >= hole + 2) return static_cast<std::size_t>(rng.between(1, box - hole - 1));
    return static_cast<std::size_t>(rng.between(0, box - hole));
  };
  const std::size_t top = r0 + offset(box_rows, h);
  const std::size_t left = c0 + offset(box_cols, w);
  for (std::size_t k = 0; k < count; ++k) m.set(top + k / w, left + k % w, false);
}

}  // namespace detail

/// Corrupts `truth` according to `model`. The output differs from the input
/// in at most model.budget pixels and depends only on (truth, model).
[[nodiscard]] inline CorruptionResult corrupt(const BinaryMask& truth, const CorruptionModel& model) {
  const std::size_t ones = popcount(truth);
  if (model.kind != CorruptionKind::UniformFlip && ones == 0 && model.budget > 0) {
    throw std::invalid_argument(std::string("corrupt: ") + std::string(to_string(model.kind)) +
                                " needs a nonempty mask");
  }
  std::size_t region = 0;
  switch (model.kind) {
    case CorruptionKind::UniformFlip: region = truth.area(); break;
    case CorruptionKind::ErodeBoundary:
    case CorruptionKind::SplitHole: region = ones; break;
    case CorruptionKind::DilateOutside: region = truth.area() - ones; break;
  }
  CorruptionResult out{truth, 0, std::min(model.budget, region), model.budget > region};

  Rng rng(model.seed);
  switch (model.kind) {
    case CorruptionKind::UniformFlip: detail::uniform_flip(out.mask, out.applied_budget, rng); break;
    case CorruptionKind::ErodeBoundary: detail::peel(out.mask, out.applied_budget, false, rng); break;
    case CorruptionKind::DilateOutside: detail::peel(out.mask, out.applied_budget, true, rng); break;
    case CorruptionKind::SplitHole: detail::split_hole(out.mask, out.applied_budget, rng); break;
  }
  out.distance = hamming_distance(out.mask, truth);
  return out;
}

struct TrialRecord {
  std::uint64_t seed = 0;
  PatchCandidate truth;
  std::size_t budget = 0;
  std::size_t distance = 0;
  /// distance <= floor(gamma * s^2), so coverage is guaranteed.
  bool within_hypothesis = false;
  bool clamped = false;
  std::size_t completion_popcount = 0;
  /// Every ground-truth pixel is covered by the completion.
  bool pass = false;
};

/// Places a random s x s patch, corrupts it, completes it at the known size
/// and checks that the completion covers the patch. model.seed drives both
/// the placement and the corruption.
[[nodiscard]] inline TrialRecord guarantee_trial(std::size_t s, const Extent& canvas, double gamma,
                                                 const CorruptionModel& model) {
  if (!size_fits(canvas, s)) {
    throw std::invalid_argument("guarantee_trial: size " + std::to_string(s) +
                                " does not fit canvas " + to_string(canvas));
  }
  const Rng root(model.seed);
  Rng placement = root.split(1);
  const PatchCandidate truth{s, static_cast<std::size_t>(placement.below(canvas.rows - s + 1)),
                             static_cast<std::size_t>(placement.below(canvas.cols - s + 1))};
  const BinaryMask gt = BinaryMask::square(canvas, truth);

  CorruptionModel sub = model;
  sub.seed = root.split(2).seed();
  const CorruptionResult observed = corrupt(gt, sub);
  const SizeCompletion completed = complete_single_size(observed.mask, s, gamma);

  TrialRecord rec;
  rec.seed = model.seed;
  rec.truth = truth;
  rec.budget = model.budget;
  rec.distance = observed.distance;
  rec.within_hypothesis = observed.distance <= distance_cutoff(gamma, s);
  rec.clamped = observed.clamped;
  rec.completion_popcount = popcount(completed.mask);
  rec.pass = is_subset(gt, completed.mask);
  return rec;
}

inline constexpr std::size_t kKeptFailures = 16;

struct TrialSummary {
  std::size_t trials = 0;
  std::size_t passes = 0;
  std::size_t within_hypothesis = 0;
  /// Failures among trials inside the guarantee's hypothesis. Must be zero.
  std::size_t violations = 0;
  std::vector<TrialRecord> failures;  // first kKeptFailures only

  [[nodiscard]] double cover_rate() const noexcept {
    return trials == 0 ? 0.0 : static_cast<double>(passes) / static_cast<double>(trials);
  }
};

/// Runs `trials` guarantee trials with per-trial seeds split from base_seed.
[[nodiscard]] inline TrialSummary run_trials(std::size_t s, const Extent& canvas, double gamma,
                                             CorruptionKind kind, std::size_t budget,
                                             std::size_t trials, std::uint64_t base_seed) {
  TrialSummary sum;
  const Rng base(base_seed);
  for (std::size_t k = 0; k < trials; ++k) {
    const TrialRecord rec = guarantee_trial(s, canvas, gamma, {kind, budget, base.split(k).seed()});
    ++sum.trials;
    if (rec.pass) ++sum.passes;
    if (rec.within_hypothesis) {
      ++sum.within_hypothesis;
      if (!rec.pass) ++sum.violations;
    }
    if (!rec.pass && sum.failures.size() < kKeptFailures) sum.failures.push_back(rec);
  }
  return sum;
}

}  // namespace shapecomp
