/// @file cli.hpp
/// @brief Subcommand implementations behind the `shapecomp` executable.
///
/// Each run_* function takes parsed options, performs file I/O, writes a
/// JSON report and returns the process exit code. Argument parsing lives in
/// tools/shapecomp.cpp.

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "shapecomp/bench.hpp"
#include "shapecomp/completion.hpp"
#include "shapecomp/corruption.hpp"
#include "shapecomp/mask.hpp"
#include "shapecomp/oracle.hpp"
#include "shapecomp/pbm.hpp"
#include "shapecomp/random.hpp"
#include "shapecomp/shape.hpp"

namespace shapecomp::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kMismatch = 1, kUsage = 2, kIoError = 3 };

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kConvention = "bit 1 = adversarial patch pixel (PBM black)";

/// Bad flag values detected after parsing.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CompleteOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  std::optional<std::filesystem::path> report;
  std::vector<std::size_t> sizes{25, 50, 75, 100};
  GammaSchedule schedule;
  std::optional<double> fixed_gamma;
  bool union_ps = false;
  pbm::Format format = pbm::Format::Raw;
  std::uint64_t seed = kDefaultSeed;
};

struct OracleOptions {
  std::filesystem::path input;
  std::vector<std::size_t> sizes;
  double gamma = 0.0;
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> compare;
  pbm::Format format = pbm::Format::Raw;
};

struct GenOptions {
  ShapeKind kind = ShapeKind::Square;
  std::size_t n = 0;
  std::optional<Anchor> anchor;  // centered when absent
  Extent canvas;
  std::filesystem::path output;
  pbm::Format format = pbm::Format::Raw;
};

struct CorruptOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  CorruptionModel model;
  std::optional<std::filesystem::path> report;
  pbm::Format format = pbm::Format::Raw;
};

struct TrialOptions {
  std::size_t size = 25;
  Extent canvas{64, 64};
  double gamma = 0.3;
  CorruptionKind kind = CorruptionKind::UniformFlip;
  std::optional<std::size_t> budget;  // floor(gamma * s^2) when absent
  std::size_t trials = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::filesystem::path> report;
};

struct BenchOptions {
  bench::Config config;
  std::optional<std::filesystem::path> report;
};

[[nodiscard]] inline const char* format_name(pbm::Format f) { return f == pbm::Format::Raw ? "p4" : "p1"; }

[[nodiscard]] inline std::string seed_hex(std::uint64_t seed) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(seed));
  return buf;
}

[[nodiscard]] inline Json describe_input(const std::filesystem::path& path, const BinaryMask& m) {
  return Json{{"path", path.string()}, {"rows", m.rows()}, {"cols", m.cols()}, {"popcount", popcount(m)}};
}

[[nodiscard]] inline Json to_json(const CompletionReport& rep) {
  Json per_size = Json::object();
  for (const auto& [s, n] : rep.per_size_accepted) per_size[std::to_string(s)] = n;
  Json j;
  j["attack_found"] = rep.attack_found;
  j["gamma_used"] = rep.gamma_used ? Json(*rep.gamma_used) : Json(nullptr);
  j["iterations_run"] = rep.iterations_run;
  j["per_size_accepted"] = per_size;
  j["skipped_sizes"] = rep.skipped_sizes;
  j["output_popcount"] = rep.output_popcount;
  return j;
}

/// Prints the report to `out` or writes it atomically to `path`.
inline void emit_report(const Json& report, const std::optional<std::filesystem::path>& path,
                        std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (path) {
    pbm::write_file_atomic(*path, text);
  } else {
    out << text;
  }
}

namespace detail {

template <typename Body>
int guarded(const char* command, std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const pbm::PbmError& e) {
    err << "shapecomp " << command << ": corrupt input: " << e.what() << "\n";
    return kIoError;
  } catch (const pbm::IoError& e) {
    err << "shapecomp " << command << ": " << e.what() << "\n";
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "shapecomp " << command << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "shapecomp " << command << ": " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace detail

/// Completion result produced by `complete`, without any file I/O.
struct CompleteOutcome {
  BinaryMask completed;  // M_SC
  BinaryMask written;    // M_SC, or M_PS | M_SC with union_ps
  CompletionReport report;
};

[[nodiscard]] inline CompleteOutcome complete_mask(const BinaryMask& observed, const CompleteOptions& opt) {
  const SizeSet sizes(opt.sizes);
  SearchResult res{BinaryMask(observed.extent()), {}};
  if (opt.fixed_gamma) {
    MultiSizeCompletion one = complete_multi_size(observed, sizes, *opt.fixed_gamma);
    res.report.iterations_run = 1;
    res.report.per_size_accepted = one.accepted;
    res.report.skipped_sizes = one.skipped;
    res.report.output_popcount = popcount(one.mask);
    res.report.attack_found = res.report.output_popcount > 0;
    if (res.report.attack_found) res.report.gamma_used = *opt.fixed_gamma;
    res.mask = std::move(one.mask);
  } else {
    res = gamma_search(observed, sizes, opt.schedule);
  }
  BinaryMask written = opt.union_ps ? final_mask(observed, res.mask) : res.mask;
  return {std::move(res.mask), std::move(written), std::move(res.report)};
}

inline int run_complete(const CompleteOptions& opt, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
  return detail::guarded("complete", err, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    if (opt.fixed_gamma) validate_gamma(*opt.fixed_gamma);
    opt.schedule.validate();
    const BinaryMask observed = pbm::load(opt.input);
    const CompleteOutcome outcome = complete_mask(observed, opt);
    pbm::save(opt.output, outcome.written, opt.format);
    const auto t1 = std::chrono::steady_clock::now();

    Json config;
    config["sizes"] = opt.sizes;
    if (opt.fixed_gamma) {
      config["mode"] = "fixed";
      config["gamma"] = *opt.fixed_gamma;
    } else {
      config["mode"] = "schedule";
      config["alpha"] = static_cast<double>(opt.schedule.alpha);
      config["beta"] = static_cast<double>(opt.schedule.beta);
      config["t_max"] = opt.schedule.t_max;
    }
    config["union_ps"] = opt.union_ps;
    config["output_format"] = format_name(opt.format);
    config["seed"] = seed_hex(opt.seed);

    Json result = to_json(outcome.report);
    result["output_kind"] = opt.union_ps ? "ps_union_sc" : "sc";
    result["written_popcount"] = popcount(outcome.written);

    Json report;
    report["schema_version"] = kReportSchemaVersion;
    report["command"] = "complete";
    report["convention"] = kConvention;
    report["input"] = describe_input(opt.input, observed);
    report["output"] = opt.output.string();
    report["config"] = config;
    report["result"] = result;
    report["wall_time_ms"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    emit_report(report, opt.report, out);
    return static_cast<int>(kOk);
  });
}

inline int run_oracle(const OracleOptions& opt, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
  return detail::guarded("oracle", err, [&] {
    if (opt.sizes.empty()) throw UsageError("at least one size is required");
    (void)SizeSet(opt.sizes);
    oracle::check_gamma(opt.gamma);
    const BinaryMask observed = pbm::load(opt.input);
    const BinaryMask completed = oracle::oracle_complete_multi(observed, opt.sizes, opt.gamma);
    if (opt.output) pbm::save(*opt.output, completed, opt.format);

    Json report;
    report["schema_version"] = kReportSchemaVersion;
    report["command"] = "oracle";
    report["convention"] = kConvention;
    report["input"] = describe_input(opt.input, observed);
    report["config"] = Json{{"sizes", opt.sizes}, {"gamma", opt.gamma}};
    report["output_popcount"] = popcount(completed);
    int code = kOk;
    if (opt.compare) {
      const BinaryMask other = pbm::load(*opt.compare);
      std::size_t mismatches = other.extent() == completed.extent()
                                   ? hamming_distance(other, completed)
                                   : completed.area() + other.area();
      report["compare"] = Json{{"path", opt.compare->string()},
                               {"same_extent", other.extent() == completed.extent()},
                               {"mismatched_pixels", mismatches},
                               {"match", mismatches == 0}};
      if (mismatches != 0) {
        err << "shapecomp oracle: " << mismatches << " pixel(s) differ from " << opt.compare->string()
            << "\n";
        code = kMismatch;
      }
    }
    emit_report(report, std::nullopt, out);
    return code;
  });
}

inline int run_gen(const GenOptions& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded("gen", err, [&] {
    if (opt.n == 0) throw UsageError("n must be positive");
    if (opt.canvas.rows == 0 || opt.canvas.cols == 0) throw UsageError("canvas must be non-empty");
    const Anchor anchor = opt.anchor ? *opt.anchor : centered_anchor(opt.kind, opt.n, opt.canvas);
    const BinaryMask m = generate_shape_mask(opt.kind, opt.n, anchor, opt.canvas);
    pbm::save(opt.output, m, opt.format);
    Json report;
    report["schema_version"] = kReportSchemaVersion;
    report["command"] = "gen";
    report["kind"] = to_string(opt.kind);
    report["n"] = opt.n;
    report["anchor"] = Json{{"row", anchor.row}, {"col", anchor.col}};
    report["canvas"] = Json{{"rows", opt.canvas.rows}, {"cols", opt.canvas.cols}};
    report["popcount"] = popcount(m);
    report["output"] = opt.output.string();
    emit_report(report, std::nullopt, out);
    return static_cast<int>(kOk);
  });
}

inline int run_corrupt(const CorruptOptions& opt, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
  return detail::guarded("corrupt", err, [&] {
    const BinaryMask truth = pbm::load(opt.input);
    const CorruptionResult res = corrupt(truth, opt.model);
    pbm::save(opt.output, res.mask, opt.format);
    Json report;
    report["schema_version"] = kReportSchemaVersion;
    report["command"] = "corrupt";
    report["input"] = describe_input(opt.input, truth);
    report["model"] = Json{{"kind", to_string(opt.model.kind)},
                           {"budget", opt.model.budget},
                           {"seed", seed_hex(opt.model.seed)},
                           {"rng", std::string(kRngName) + "/v" + std::to_string(kRngVersion)}};
    report["applied_budget"] = res.applied_budget;
    report["clamped"] = res.clamped;
    report["distance"] = res.distance;
    report["output_popcount"] = popcount(res.mask);
    report["output"] = opt.output.string();
    emit_report(report, opt.report, out);
    return static_cast<int>(kOk);
  });
}

inline int run_trial(const TrialOptions& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded("trial", err, [&] {
    validate_gamma(opt.gamma);
    if (!size_fits(opt.canvas, opt.size)) throw UsageError("size does not fit the canvas");
    const std::size_t budget = opt.budget ? *opt.budget : distance_cutoff(opt.gamma, opt.size);
    const TrialSummary sum =
        run_trials(opt.size, opt.canvas, opt.gamma, opt.kind, budget, opt.trials, opt.seed);
    Json failures = Json::array();
    for (const TrialRecord& r : sum.failures) {
      failures.push_back(Json{{"seed", seed_hex(r.seed)},
                              {"row", r.truth.row},
                              {"col", r.truth.col},
                              {"distance", r.distance},
                              {"within_hypothesis", r.within_hypothesis}});
    }
    Json report;
    report["schema_version"] = kReportSchemaVersion;
    report["command"] = "trial";
    report["config"] = Json{{"size", opt.size},
                            {"canvas", Json{{"rows", opt.canvas.rows}, {"cols", opt.canvas.cols}}},
                            {"gamma", opt.gamma},
                            {"model", to_string(opt.kind)},
                            {"budget", budget},
                            {"guaranteed_budget", distance_cutoff(opt.gamma, opt.size)},
                            {"trials", opt.trials},
                            {"seed", seed_hex(opt.seed)},
                            {"rng", std::string(kRngName) + "/v" + std::to_string(kRngVersion)}};
    report["trials"] = sum.trials;
    report["passes"] = sum.passes;
    report["within_hypothesis"] = sum.within_hypothesis;
    report["violations"] = sum.violations;
    report["cover_rate"] = sum.cover_rate();
    report["failures"] = failures;
    emit_report(report, opt.report, out);
    if (sum.violations != 0) {
      err << "shapecomp trial: " << sum.violations << " coverage violation(s) inside the guarantee\n";
      return static_cast<int>(kMismatch);
    }
    return static_cast<int>(kOk);
  });
}

[[nodiscard]] inline Json to_json(const bench::Result& res) {
  Json rows = Json::array();
  for (const bench::Row& r : res.rows) {
    Json row{{"canvas", r.canvas}, {"size", r.size}, {"dp_ms", r.dp_ms}};
    row["oracle_ms"] = r.oracle_ms ? Json(*r.oracle_ms) : Json(nullptr);
    if (r.oracle_ms) row["oracle_over_dp"] = *r.oracle_ms / r.dp_ms;
    rows.push_back(row);
  }
  Json ratios = Json::array();
  for (const auto& [key, v] : res.area_ratio) {
    ratios.push_back(Json{{"from", key.first}, {"to", 2 * key.first}, {"size", key.second}, {"dp_ratio", v}});
  }
  Json spread = Json::object();
  for (const auto& [side, v] : res.dp_size_spread) spread[std::to_string(side)] = v;
  Json j;
  j["rows"] = rows;
  j["area_scaling"] = ratios;
  j["dp_size_spread"] = spread;
  j["oracle_growth"] = res.oracle_growth ? Json(*res.oracle_growth) : Json(nullptr);
  return j;
}

inline int run_bench(const BenchOptions& opt, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded("bench", err, [&] {
    const bench::Result res = bench::run(opt.config);
    Json report;
    report["schema_version"] = kReportSchemaVersion;
    report["command"] = "bench";
    report["config"] = Json{{"canvases", opt.config.canvases},
                            {"sizes", opt.config.sizes},
                            {"reps", opt.config.reps},
                            {"oracle_reps", opt.config.oracle_reps},
                            {"oracle_canvas", opt.config.oracle_canvas},
                            {"gamma", opt.config.gamma}};
    report["result"] = to_json(res);
    emit_report(report, opt.report, out);
    return static_cast<int>(kOk);
  });
}

}  // namespace shapecomp::cli
