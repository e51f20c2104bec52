// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//
//   acceptance [path-to-shapecomp-binary]
//
// With a binary path, criterion 6 runs the executable twice; otherwise it
// calls the same command implementation in-process.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "shapecomp/bench.hpp"
#include "shapecomp/cli.hpp"
#include "shapecomp/completion.hpp"
#include "shapecomp/corruption.hpp"
#include "shapecomp/oracle.hpp"
#include "shapecomp/pbm.hpp"
#include "test_support.hpp"

namespace {

using namespace shapecomp;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Tolerances and sizes, pinned.
constexpr std::size_t kRandomEquivalenceInstances = 10'000;
constexpr std::size_t kMaxSide = 24;
constexpr std::size_t kMaxSize = 8;
constexpr std::size_t kTrialsPerCell = 1000;
constexpr double kGuaranteeGamma = 0.3;
constexpr Extent kTrialCanvas{64, 64};
constexpr std::size_t kPropertyInstances = 1000;
constexpr double kAreaRatioLo = 2.5;
constexpr double kAreaRatioHi = 6.0;
constexpr double kMaxDpSizeSpread = 0.20;
constexpr double kMinOracleGrowth = 4.0;
constexpr std::size_t kRoundTripMasks = 1000;

double random_grid_gamma(Rng& rng) { return 0.1 * static_cast<double>(rng.below(10)); }

Outcome oracle_equivalence() {
  std::size_t checked = 0, mismatches = 0;
  for (double gamma : {0.0, 0.25, 0.5, 0.75}) {
    for (std::uint64_t p = 0; p < (1U << 16); ++p) {
      const BinaryMask m = testing::mask_from_pattern(4, 4, p);
      for (std::size_t s : {2u, 3u}) {
        ++checked;
        if (complete_single_size(m, s, gamma).mask != oracle::oracle_complete_single(m, s, gamma)) ++mismatches;
      }
    }
  }
  const std::size_t exhaustive = checked;
  Rng rng(0xACCE'0001);
  for (std::size_t k = 0; k < kRandomEquivalenceInstances; ++k) {
    const auto inst = testing::random_instance(rng, kMaxSide, kMaxSize);
    const double gamma = random_grid_gamma(rng);
    ++checked;
    if (complete_single_size(inst.mask, inst.size, gamma).mask !=
        oracle::oracle_complete_single(inst.mask, inst.size, gamma)) {
      ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(exhaustive) + " exhaustive 4x4 + " +
                               std::to_string(kRandomEquivalenceInstances) + " random instances, " +
                               std::to_string(mismatches) + " mismatches"};
}

Outcome coverage_guarantee() {
  std::size_t trials = 0, violations = 0, outside = 0;
  std::ostringstream cells;
  for (std::size_t s : {8u, 16u, 25u}) {
    for (CorruptionKind kind : kAllCorruptionKinds) {
      const std::size_t budget = distance_cutoff(kGuaranteeGamma, s);
      const TrialSummary sum = run_trials(s, kTrialCanvas, kGuaranteeGamma, kind, budget, kTrialsPerCell,
                                          0xACCE'0002 ^ (s << 8) ^ static_cast<std::uint64_t>(kind));
      trials += sum.trials;
      violations += sum.violations;
      outside += sum.trials - sum.within_hypothesis;
    }
  }
  cells << trials << " trials (sizes 8,16,25 x 4 models, gamma 0.3, budget floor(gamma*s^2)), "
        << violations << " coverage violations, " << outside << " outside hypothesis";
  return {violations == 0 && outside == 0 && trials == 12 * kTrialsPerCell, cells.str()};
}

Outcome exact_patch_recovery() {
  const SizeSet sizes{25, 50, 75, 100};
  const GammaSchedule defaults{0.9L, 0.7L, 15};
  bool ok = defaults.gamma(1) == 0.1;
  std::ostringstream d;
  d << "gamma_1=" << defaults.gamma(1);
  for (std::size_t s : sizes) {
    // observation is exactly the s x s patch
    BinaryMask patch(s, s);
    for (std::size_t r = 0; r < s; ++r) {
      for (std::size_t c = 0; c < s; ++c) patch.set(r, c, true);
    }
    const SearchResult r = gamma_search(patch, sizes, defaults);
    const bool this_ok = r.report.attack_found && r.report.iterations_run == 1 && r.report.gamma_used == 0.1 &&
                         r.report.output_popcount == s * s && popcount(r.mask) == s * s;
    // same patch on a larger canvas: still t = 1, output is the oracle's
    // union of all windows within floor(0.1 * s^2) of it
    const BinaryMask embedded = BinaryMask::square({s + 60, s + 60}, {s, 30, 30});
    const SearchResult e = gamma_search(embedded, sizes, defaults);
    const bool embedded_ok = e.report.iterations_run == 1 && e.report.gamma_used == 0.1 &&
                             is_subset(embedded, e.mask) &&
                             e.mask == oracle::oracle_complete_multi(embedded, sizes.sizes(), 0.1);
    ok = ok && this_ok && embedded_ok;
    d << "; s=" << s << " t=" << r.report.iterations_run << " popcount=" << popcount(r.mask)
      << (this_ok ? "" : " FAIL") << " (embedded popcount " << popcount(e.mask)
      << (embedded_ok ? "" : " FAIL") << ")";
  }
  return {ok, d.str()};
}

Outcome monotonicity_and_symmetry() {
  Rng rng(0xACCE'0004);
  std::size_t gamma_viol = 0, size_viol = 0, sym_viol = 0;
  for (std::size_t k = 0; k < kPropertyInstances; ++k) {
    const auto inst = testing::random_instance(rng, kMaxSide, kMaxSize);
    double g1 = random_grid_gamma(rng), g2 = random_grid_gamma(rng);
    if (g1 > g2) std::swap(g1, g2);
    if (!is_subset(complete_single_size(inst.mask, inst.size, g1).mask,
                   complete_single_size(inst.mask, inst.size, g2).mask)) {
      ++gamma_viol;
    }
  }
  for (std::size_t k = 0; k < kPropertyInstances; ++k) {
    const auto inst = testing::random_instance(rng, kMaxSide, kMaxSize);
    const double g = random_grid_gamma(rng);
    std::vector<std::size_t> big{inst.size};
    for (std::size_t s = 1; s <= kMaxSize; ++s) {
      if (s != inst.size && rng.below(2) == 0) big.push_back(s);
    }
    const SizeSet large(big);
    const SizeSet small{inst.size};
    if (!is_subset(complete_multi_size(inst.mask, small, g).mask, complete_multi_size(inst.mask, large, g).mask)) {
      ++size_viol;
    }
  }
  for (std::size_t k = 0; k < kPropertyInstances; ++k) {
    const auto inst = testing::random_instance(rng, kMaxSide, kMaxSize);
    const double g = random_grid_gamma(rng);
    const BinaryMask out = complete_single_size(inst.mask, inst.size, g).mask;
    if (complete_single_size(flip_horizontal(inst.mask), inst.size, g).mask != flip_horizontal(out)) ++sym_viol;
    if (complete_single_size(flip_vertical(inst.mask), inst.size, g).mask != flip_vertical(out)) ++sym_viol;
    if (complete_single_size(transpose(inst.mask), inst.size, g).mask != transpose(out)) ++sym_viol;
  }
  std::ostringstream d;
  d << "gamma-monotonicity " << gamma_viol << "/" << kPropertyInstances << ", size-set monotonicity " << size_viol
    << "/" << kPropertyInstances << ", symmetry (hflip, vflip, transpose) " << sym_viol << "/"
    << 3 * kPropertyInstances << " violations";
  return {gamma_viol == 0 && size_viol == 0 && sym_viol == 0, d.str()};
}

Outcome performance_contract() {
  bench::Config cfg;
  cfg.canvases = {512, 1024};
  cfg.sizes = {25, 50, 100};
  cfg.reps = 21;
  cfg.oracle_reps = 1;
  cfg.oracle_canvas = 512;
  const bench::Result res = bench::run(cfg);
  bool ok = true;
  std::ostringstream d;
  d.setf(std::ios::fixed);
  d.precision(2);
  for (std::size_t s : cfg.sizes) {
    const double ratio = res.area_ratio.at({512, s});
    const bool in = ratio >= kAreaRatioLo && ratio <= kAreaRatioHi;
    ok = ok && in;
    d << "1024/512 s=" << s << ": " << ratio << (in ? "" : " OUT") << "; ";
  }
  const double spread = res.dp_size_spread.at(512);
  ok = ok && spread < kMaxDpSizeSpread;
  d << "DP spread over s at 512: " << 100.0 * spread << "%; ";
  const double growth = res.oracle_growth.value_or(0.0);
  ok = ok && growth >= kMinOracleGrowth;
  d << "oracle s=100/s=25: " << growth << "x; DP ms at 512:";
  for (std::size_t s : cfg.sizes) d << " " << res.find(512, s)->dp_ms;
  return {ok, d.str()};
}

Outcome determinism_and_round_trip(const std::string& binary) {
  Rng rng(0xACCE'0006);
  std::size_t bad = 0;
  for (std::size_t k = 0; k < kRoundTripMasks; ++k) {
    const BinaryMask m = testing::random_mask(rng, rng.between(1, 64), rng.between(1, 64), rng.unit());
    if (pbm::decode(pbm::encode(m, pbm::Format::Plain)) != m) ++bad;
    if (pbm::decode(pbm::encode(m, pbm::Format::Raw)) != m) ++bad;
  }

  const fs::path dir = fs::temp_directory_path() / "shapecomp_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const BinaryMask truth = BinaryMask::square({300, 300}, {50, 120, 90});
  pbm::save(dir / "obs.pbm", corrupt(truth, {CorruptionKind::UniformFlip, 700, 6}).mask, pbm::Format::Raw);

  auto run_once = [&](int k) {
    const fs::path out = dir / "out.pbm";
    const fs::path rep = dir / "report.json";
    int code = 0;
    if (!binary.empty()) {
      const std::string cmd = "\"" + binary + "\" complete -i \"" + (dir / "obs.pbm").string() + "\" -o \"" +
                              out.string() + "\" -r \"" + rep.string() + "\"";
      code = std::system(cmd.c_str());
    } else {
      cli::CompleteOptions opt;
      opt.input = dir / "obs.pbm";
      opt.output = out;
      opt.report = rep;
      std::ostringstream sink;
      code = cli::run_complete(opt, sink, sink);
    }
    fs::rename(out, dir / ("out" + std::to_string(k) + ".pbm"));
    cli::Json j = cli::Json::parse(pbm::read_file(rep));
    j.erase("wall_time_ms");
    return std::make_pair(code, j.dump());
  };
  const auto [code1, rep1] = run_once(1);
  const auto [code2, rep2] = run_once(2);
  const bool same_mask = pbm::read_file(dir / "out1.pbm") == pbm::read_file(dir / "out2.pbm");
  fs::remove_all(dir);

  std::ostringstream d;
  d << 2 * kRoundTripMasks << " PBM round trips, " << bad << " failures; complete via "
    << (binary.empty() ? "in-process" : "executable") << ": exit " << code1 << "/" << code2 << ", mask "
    << (same_mask ? "identical" : "DIFFERENT") << ", report " << (rep1 == rep2 ? "identical" : "DIFFERENT");
  return {bad == 0 && code1 == 0 && code2 == 0 && same_mask && rep1 == rep2, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string binary = argc > 1 ? argv[1] : "";
  struct Criterion {
    const char* id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"AC1", "oracle equivalence", oracle_equivalence},
      {"AC2", "coverage guarantee", coverage_guarantee},
      {"AC3", "exact-patch recovery", exact_patch_recovery},
      {"AC4", "monotonicity and symmetry", monotonicity_and_symmetry},
      {"AC5", "performance contract", performance_contract},
      {"AC6", "file determinism and PBM round trip", [&] { return determinism_and_round_trip(binary); }},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %s %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
