// shapecomp: robust square-prior shape completion of binary patch masks.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shapecomp/cli.hpp"

namespace {

using namespace shapecomp;

// "HxW" or a single N for N x N
Extent parse_extent(const std::string& text) {
  const auto x = text.find_first_of("xX");
  try {
    if (x == std::string::npos) {
      const auto n = static_cast<std::size_t>(std::stoull(text));
      return {n, n};
    }
    return {static_cast<std::size_t>(std::stoull(text.substr(0, x))),
            static_cast<std::size_t>(std::stoull(text.substr(x + 1)))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("canvas", "expected HxW, got '" + text + "'");
  }
}

Anchor parse_anchor(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("no comma");
    return {static_cast<std::size_t>(std::stoull(text.substr(0, comma))),
            static_cast<std::size_t>(std::stoull(text.substr(comma + 1)))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("anchor", "expected ROW,COL, got '" + text + "'");
  }
}

pbm::Format parse_format(const std::string& text) {
  if (text == "p1") return pbm::Format::Plain;
  if (text == "p4") return pbm::Format::Raw;
  throw CLI::ValidationError("format", "expected p1 or p4");
}

ShapeKind parse_kind(const std::string& text) {
  if (auto k = parse_shape_kind(text)) return *k;
  throw CLI::ValidationError("kind", "unknown shape '" + text + "'");
}

CorruptionKind parse_model(const std::string& text) {
  if (auto k = parse_corruption_kind(text)) return *k;
  throw CLI::ValidationError("model", "unknown corruption model '" + text + "'");
}

const std::vector<std::string> kShapeNames{"square", "circle", "rectangle", "diamond", "triangle", "ellipse"};
const std::vector<std::string> kModelNames{"uniform-flip", "erode-boundary", "dilate-outside", "split-hole"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust shape completion for binary adversarial-patch masks.\n"
               "Masks are PBM files (P1 or P4); bit 1 (black) = adversarial patch pixel."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  std::uint64_t seed = kDefaultSeed;
  std::string format = "p4";

  // complete
  cli::CompleteOptions copt;
  std::string c_input, c_output, c_report;
  std::string alpha_text = "0.9", beta_text = "0.7";
  std::optional<double> fixed_gamma;
  auto* complete = app.add_subcommand("complete", "Complete an observed mask (gamma schedule or fixed gamma)");
  complete->add_option("-i,--input", c_input, "Observed mask (PBM)")->required();
  complete->add_option("-o,--output", c_output, "Completed mask (PBM)")->required();
  complete->add_option("-r,--report", c_report, "JSON report path (stdout when omitted)");
  complete->add_option("--sizes", copt.sizes, "Candidate patch sizes")->delimiter(',')->capture_default_str();
  complete->add_option("--alpha", alpha_text, "Schedule alpha in (0,1)")->capture_default_str();
  complete->add_option("--beta", beta_text, "Schedule beta in (0,1)")->capture_default_str();
  complete->add_option("--t-max", copt.schedule.t_max, "Schedule iterations")->capture_default_str();
  complete->add_option("--fixed-gamma", fixed_gamma, "Skip the schedule and complete at this gamma");
  complete->add_flag("--union-ps", copt.union_ps, "Write observed | completed instead of completed");
  complete->add_option("--format", format, "Output PBM format (p1|p4)")->capture_default_str();
  complete->add_option("--seed", seed, "Recorded in the report");

  // oracle
  cli::OracleOptions oopt;
  std::string o_input, o_output, o_compare;
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force completion at a fixed gamma, optionally diffed");
  oracle_cmd->add_option("-i,--input", o_input, "Observed mask (PBM)")->required();
  oracle_cmd->add_option("--sizes,--size", oopt.sizes, "Candidate patch sizes")->delimiter(',')->required();
  oracle_cmd->add_option("--gamma", oopt.gamma, "Relative distortion threshold in [0,1)")->required();
  oracle_cmd->add_option("-o,--output", o_output, "Write the oracle completion (PBM)");
  oracle_cmd->add_option("--compare", o_compare, "Mask to diff against; exit 1 on any mismatch");
  oracle_cmd->add_option("--format", format, "Output PBM format (p1|p4)");

  // gen
  cli::GenOptions gopt;
  std::string g_kind, g_anchor, g_canvas, g_output;
  auto* gen = app.add_subcommand("gen", "Generate a shape mask of about n x n pixels");
  gen->add_option("--kind", g_kind, "Shape kind")->required()->check(CLI::IsMember(kShapeNames));
  gen->add_option("-n", gopt.n, "Nominal side length")->required();
  gen->add_option("--anchor", g_anchor, "Top-left ROW,COL of the bounding box (centered when omitted)");
  gen->add_option("--canvas", g_canvas, "Canvas HxW")->required();
  gen->add_option("-o,--output", g_output, "Output mask (PBM)")->required();
  gen->add_option("--format", format, "Output PBM format (p1|p4)");

  // corrupt
  cli::CorruptOptions xopt;
  std::string x_input, x_output, x_model, x_report;
  auto* corrupt_cmd = app.add_subcommand("corrupt", "Corrupt a mask within a Hamming budget");
  corrupt_cmd->add_option("-i,--input", x_input, "Ground-truth mask (PBM)")->required();
  corrupt_cmd->add_option("-o,--output", x_output, "Corrupted mask (PBM)")->required();
  corrupt_cmd->add_option("--model", x_model, "Corruption model")->required()->check(CLI::IsMember(kModelNames));
  corrupt_cmd->add_option("--budget", xopt.model.budget, "Maximum number of changed pixels")->required();
  corrupt_cmd->add_option("--seed", seed, "Random seed");
  corrupt_cmd->add_option("-r,--report", x_report, "JSON report path (stdout when omitted)");
  corrupt_cmd->add_option("--format", format, "Output PBM format (p1|p4)");

  // trial
  cli::TrialOptions topt;
  std::string t_canvas = "64x64", t_model = "uniform-flip", t_report;
  std::optional<std::size_t> t_budget;
  auto* trial = app.add_subcommand("trial", "Seeded coverage-guarantee trials");
  trial->add_option("--size", topt.size, "Patch size")->capture_default_str();
  trial->add_option("--canvas", t_canvas, "Canvas HxW")->capture_default_str();
  trial->add_option("--gamma", topt.gamma, "Relative distortion threshold")->capture_default_str();
  trial->add_option("--model", t_model, "Corruption model")->capture_default_str()->check(CLI::IsMember(kModelNames));
  trial->add_option("--budget", t_budget, "Corruption budget (default floor(gamma*s^2))");
  trial->add_option("--trials", topt.trials, "Number of trials")->capture_default_str();
  trial->add_option("--seed", seed, "Base seed");
  trial->add_option("-r,--report", t_report, "JSON report path (stdout when omitted)");

  // bench
  cli::BenchOptions bopt;
  std::string b_report;
  bool no_oracle = false;
  auto* bench_cmd = app.add_subcommand("bench", "Median wall times of the completion and the oracle");
  bench_cmd->add_option("--canvases", bopt.config.canvases, "Square canvas sides")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--sizes", bopt.config.sizes, "Patch sizes")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--reps", bopt.config.reps, "Timed repetitions per configuration")->capture_default_str();
  bench_cmd->add_option("--oracle-reps", bopt.config.oracle_reps, "Timed oracle repetitions")->capture_default_str();
  bench_cmd->add_option("--oracle-canvas", bopt.config.oracle_canvas, "Canvas on which the oracle is timed")->capture_default_str();
  bench_cmd->add_flag("--no-oracle", no_oracle, "Skip the oracle path");
  bench_cmd->add_option("--gamma", bopt.config.gamma, "Completion gamma")->capture_default_str();
  bench_cmd->add_option("-r,--report", b_report, "JSON report path (stdout when omitted)");

  try {
    app.parse(argc, argv);
    const pbm::Format fmt = parse_format(format);

    if (*complete) {
      copt.input = c_input;
      copt.output = c_output;
      if (!c_report.empty()) copt.report = c_report;
      try {
        copt.schedule.alpha = std::stold(alpha_text);
        copt.schedule.beta = std::stold(beta_text);
      } catch (const std::exception&) {
        throw CLI::ValidationError("alpha/beta", "expected numbers");
      }
      copt.fixed_gamma = fixed_gamma;
      copt.format = fmt;
      copt.seed = seed;
      return cli::run_complete(copt);
    }
    if (*oracle_cmd) {
      oopt.input = o_input;
      if (!o_output.empty()) oopt.output = o_output;
      if (!o_compare.empty()) oopt.compare = o_compare;
      oopt.format = fmt;
      return cli::run_oracle(oopt);
    }
    if (*gen) {
      gopt.kind = parse_kind(g_kind);
      gopt.canvas = parse_extent(g_canvas);
      if (!g_anchor.empty()) gopt.anchor = parse_anchor(g_anchor);
      gopt.output = g_output;
      gopt.format = fmt;
      return cli::run_gen(gopt);
    }
    if (*corrupt_cmd) {
      xopt.input = x_input;
      xopt.output = x_output;
      xopt.model.kind = parse_model(x_model);
      xopt.model.seed = seed;
      if (!x_report.empty()) xopt.report = x_report;
      xopt.format = fmt;
      return cli::run_corrupt(xopt);
    }
    if (*trial) {
      topt.canvas = parse_extent(t_canvas);
      topt.kind = parse_model(t_model);
      topt.budget = t_budget;
      topt.seed = seed;
      if (!t_report.empty()) topt.report = t_report;
      return cli::run_trial(topt);
    }
    if (*bench_cmd) {
      if (no_oracle) bopt.config.oracle_canvas = 0;
      bopt.config.seed = seed;
      if (!b_report.empty()) bopt.report = b_report;
      return cli::run_bench(bopt);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "shapecomp: " << e.what() << "\n";
    return cli::kIoError;
  }
  return cli::kUsage;
}
