/// @file bench.hpp
/// @brief Wall-time scaling harness for the summed-area completion and the oracle.
///
/// The completion is timed through a reused CompletionWorkspace; the oracle
/// is timed as-is.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "shapecomp/completion.hpp"
#include "shapecomp/oracle.hpp"
#include "shapecomp/random.hpp"

namespace shapecomp::bench {

[[nodiscard]] inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

/// Median wall time of `fn` in milliseconds over `reps` runs, after one warm-up.
template <typename Fn>
[[nodiscard]] double median_ms(Fn&& fn, int reps) {
  if (reps < 1) throw std::invalid_argument("median_ms: reps must be >= 1");
  fn();
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(reps));
  for (int k = 0; k < reps; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return median(std::move(times));
}

/// Square canvas with a centered s x s patch and 1% scattered noise.
[[nodiscard]] inline BinaryMask workload(std::size_t side, std::size_t s, std::uint64_t seed) {
  BinaryMask m(side, side);
  if (s <= side) {
    const std::size_t at = (side - s) / 2;
    m = BinaryMask::square(m.extent(), {s, at, at});
  }
  Rng rng(seed);
  for (std::size_t k = 0; k < m.area() / 100; ++k) {
    m.flip(static_cast<std::size_t>(rng.below(side)), static_cast<std::size_t>(rng.below(side)));
  }
  return m;
}

struct Config {
  std::vector<std::size_t> canvases{512, 1024};
  std::vector<std::size_t> sizes{25, 50, 100};
  int reps = 5;
  int oracle_reps = 1;
  /// Canvas on which the oracle is timed; 0 disables the oracle.
  std::size_t oracle_canvas = 512;
  double gamma = 0.5;
  std::uint64_t seed = kDefaultSeed;
};

struct Row {
  std::size_t canvas = 0;
  std::size_t size = 0;
  double dp_ms = 0.0;
  std::optional<double> oracle_ms;
};

struct Result {
  std::vector<Row> rows;
  /// dp(2N) / dp(N) per size, keyed by (N, size) for every canvas N whose double is benchmarked.
  std::map<std::pair<std::size_t, std::size_t>, double> area_ratio;
  /// (max - min) / min of DP time across sizes, per canvas.
  std::map<std::size_t, double> dp_size_spread;
  /// oracle(max size) / oracle(min size) on the oracle canvas.
  std::optional<double> oracle_growth;

  [[nodiscard]] const Row* find(std::size_t canvas, std::size_t size) const {
    for (const Row& r : rows) {
      if (r.canvas == canvas && r.size == size) return &r;
    }
    return nullptr;
  }
};

[[nodiscard]] inline Result run(const Config& cfg) {
  if (cfg.canvases.empty() || cfg.sizes.empty()) {
    throw std::invalid_argument("bench: need at least one canvas and one size");
  }
  validate_gamma(cfg.gamma);
  if (cfg.reps < 1) throw std::invalid_argument("bench: reps must be >= 1");
  Result res;
  std::vector<BinaryMask> masks;
  std::vector<BinaryMask> outputs;
  std::vector<CompletionWorkspace> workspaces;
  for (std::size_t side : cfg.canvases) {
    for (std::size_t s : cfg.sizes) {
      if (side == 0 || s == 0 || s > side) {
        throw std::invalid_argument("bench: size must be in [1, canvas]");
      }
      masks.push_back(workload(side, s, cfg.seed));
      outputs.emplace_back(side, side);
      workspaces.emplace_back();
      res.rows.push_back({side, s, 0.0, std::nullopt});
    }
  }

  // Repetitions go round-robin over the configurations so that slow drift in
  // machine load affects every configuration alike. Each configuration keeps
  // its own buffers, so the timings are the steady-state per-frame cost.
  std::vector<std::vector<double>> times(res.rows.size());
  for (int rep = -1; rep < cfg.reps; ++rep) {
    for (std::size_t k = 0; k < res.rows.size(); ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      (void)workspaces[k].complete(masks[k], res.rows[k].size, cfg.gamma, outputs[k]);
      const auto t1 = std::chrono::steady_clock::now();
      if (rep >= 0) times[k].push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
  }
  for (std::size_t k = 0; k < res.rows.size(); ++k) {
    res.rows[k].dp_ms = median(times[k]);
    if (cfg.oracle_canvas != 0 && res.rows[k].canvas == cfg.oracle_canvas) {
      const std::size_t s = res.rows[k].size;
      res.rows[k].oracle_ms =
          median_ms([&] { (void)oracle::oracle_complete_single(masks[k], s, cfg.gamma); }, cfg.oracle_reps);
    }
  }

  for (std::size_t side : cfg.canvases) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (std::size_t s : cfg.sizes) {
      const Row* r = res.find(side, s);
      if (const Row* twice = res.find(2 * side, s)) {
        res.area_ratio[{side, s}] = twice->dp_ms / r->dp_ms;
      }
      lo = first ? r->dp_ms : std::min(lo, r->dp_ms);
      hi = first ? r->dp_ms : std::max(hi, r->dp_ms);
      first = false;
    }
    res.dp_size_spread[side] = (hi - lo) / lo;
  }

  if (cfg.oracle_canvas != 0) {
    const auto [smin, smax] = std::minmax_element(cfg.sizes.begin(), cfg.sizes.end());
    const Row* a = res.find(cfg.oracle_canvas, *smin);
    const Row* b = res.find(cfg.oracle_canvas, *smax);
    if (a && b && a->oracle_ms && b->oracle_ms) res.oracle_growth = *b->oracle_ms / *a->oracle_ms;
  }
  return res;
}

}  // namespace shapecomp::bench
