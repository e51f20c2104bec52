#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "shapecomp/cli.hpp"
#include "test_support.hpp"

namespace shapecomp {
namespace {

namespace fs = std::filesystem;
using cli::Json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("shapecomp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  fs::path write_mask(const std::string& name, const BinaryMask& m, pbm::Format f = pbm::Format::Raw) {
    pbm::save(path(name), m, f);
    return path(name);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, CompleteDefaultsMirrorReferenceConfiguration) {
  const cli::CompleteOptions opt;
  EXPECT_EQ(opt.sizes, (std::vector<std::size_t>{25, 50, 75, 100}));
  EXPECT_EQ(opt.schedule.alpha, 0.9L);
  EXPECT_EQ(opt.schedule.beta, 0.7L);
  EXPECT_EQ(opt.schedule.t_max, 15);
  EXPECT_FALSE(opt.fixed_gamma.has_value());
}

TEST_F(CliTest, CompleteEmptyInput) {
  cli::CompleteOptions opt;
  opt.input = write_mask("empty.pbm", BinaryMask(200, 150));
  opt.output = path("out.pbm");
  opt.report = path("report.json");
  ASSERT_EQ(cli::run_complete(opt, out_, err_), cli::kOk) << err_.str();
  EXPECT_FALSE(pbm::load(opt.output).any());
  const Json rep = Json::parse(pbm::read_file(*opt.report));
  EXPECT_EQ(rep["schema_version"], 1);
  EXPECT_EQ(rep["result"]["attack_found"], false);
  EXPECT_TRUE(rep["result"]["gamma_used"].is_null());
  EXPECT_EQ(rep["result"]["iterations_run"], 15);
  EXPECT_EQ(rep["result"]["skipped_sizes"], Json::array({}));
  EXPECT_EQ(rep["input"]["rows"], 200);
  EXPECT_EQ(rep["input"]["cols"], 150);
}

TEST_F(CliTest, CompleteMatchesLibraryOnCorruptedFixture) {
  const BinaryMask truth = BinaryMask::square({160, 160}, {50, 40, 70});
  const BinaryMask observed = corrupt(truth, {CorruptionKind::SplitHole, 600, 99}).mask;
  cli::CompleteOptions opt;
  opt.input = write_mask("obs.pbm", observed, pbm::Format::Plain);
  opt.output = path("sc.pbm");
  opt.report = path("sc.json");
  ASSERT_EQ(cli::run_complete(opt, out_, err_), cli::kOk) << err_.str();

  const SearchResult lib = gamma_search(observed, SizeSet{25, 50, 75, 100}, GammaSchedule{});
  ASSERT_TRUE(lib.report.attack_found);
  EXPECT_EQ(pbm::load(opt.output), lib.mask);
  EXPECT_TRUE(is_subset(truth, lib.mask));
  const Json rep = Json::parse(pbm::read_file(*opt.report));
  EXPECT_EQ(rep["result"]["gamma_used"].get<double>(), *lib.report.gamma_used);
  EXPECT_EQ(rep["result"]["iterations_run"], lib.report.iterations_run);
  EXPECT_EQ(rep["result"]["output_popcount"], lib.report.output_popcount);
  EXPECT_EQ(rep["result"]["skipped_sizes"], Json::array({}));
  EXPECT_EQ(rep["result"]["per_size_accepted"]["50"], lib.report.per_size_accepted.at(50));
  EXPECT_EQ(rep["result"]["output_kind"], "sc");
}

TEST_F(CliTest, UnionPsWritesObservationUnitedWithCompletion) {
  BinaryMask observed = BinaryMask::square({60, 60}, {10, 5, 5});
  observed.set(50, 50, true);  // stray detection far from the patch
  cli::CompleteOptions opt;
  opt.input = write_mask("obs.pbm", observed);
  opt.output = path("final.pbm");
  opt.sizes = {10};
  opt.union_ps = true;
  ASSERT_EQ(cli::run_complete(opt, out_, err_), cli::kOk);
  const BinaryMask sc = gamma_search(observed, SizeSet{10}, GammaSchedule{}).mask;
  EXPECT_EQ(pbm::load(opt.output), final_mask(observed, sc));
  const Json rep = Json::parse(out_.str());
  EXPECT_EQ(rep["result"]["output_kind"], "ps_union_sc");
  EXPECT_EQ(rep["config"]["union_ps"], true);
}

TEST_F(CliTest, ReportEchoesFlags) {
  cli::CompleteOptions opt;
  opt.input = write_mask("obs.pbm", BinaryMask::square({40, 40}, {8, 1, 1}));
  opt.output = path("o.pbm");
  opt.sizes = {8, 16};
  opt.schedule = {0.8L, 0.5L, 7};
  ASSERT_EQ(cli::run_complete(opt, out_, err_), cli::kOk);
  const Json cfg = Json::parse(out_.str())["config"];
  EXPECT_EQ(cfg["sizes"], Json::array({8, 16}));
  EXPECT_EQ(cfg["mode"], "schedule");
  EXPECT_EQ(cfg["alpha"].get<double>(), 0.8);
  EXPECT_EQ(cfg["beta"].get<double>(), 0.5);
  EXPECT_EQ(cfg["t_max"], 7);

  std::ostringstream out2;
  opt.fixed_gamma = 0.25;
  ASSERT_EQ(cli::run_complete(opt, out2, err_), cli::kOk);
  const Json rep = Json::parse(out2.str());
  EXPECT_EQ(rep["config"]["mode"], "fixed");
  EXPECT_EQ(rep["config"]["gamma"].get<double>(), 0.25);
  EXPECT_EQ(rep["result"]["gamma_used"].get<double>(), 0.25);
}

TEST_F(CliTest, RepeatedRunsAreByteIdenticalExceptWallTime) {
  Rng rng(81);
  const BinaryMask truth = BinaryMask::square({128, 128}, {25, 60, 30});
  cli::CompleteOptions opt;
  opt.input = write_mask("obs.pbm", corrupt(truth, {CorruptionKind::UniformFlip, 150, 4}).mask);
  opt.output = path("o.pbm");
  opt.report = path("r.json");
  ASSERT_EQ(cli::run_complete(opt, out_, err_), cli::kOk);
  const std::string mask1 = pbm::read_file(opt.output);
  Json rep1 = Json::parse(pbm::read_file(*opt.report));
  ASSERT_EQ(cli::run_complete(opt, out_, err_), cli::kOk);
  const std::string mask2 = pbm::read_file(opt.output);
  Json rep2 = Json::parse(pbm::read_file(*opt.report));
  EXPECT_EQ(mask1, mask2);
  rep1.erase("wall_time_ms");
  rep2.erase("wall_time_ms");
  EXPECT_EQ(rep1.dump(), rep2.dump());
}

TEST_F(CliTest, CompleteErrors) {
  cli::CompleteOptions opt;
  opt.input = path("missing.pbm");
  opt.output = path("o.pbm");
  EXPECT_EQ(cli::run_complete(opt, out_, err_), cli::kIoError);

  std::ofstream(path("bad.pbm")) << "P7 garbage";
  opt.input = path("bad.pbm");
  EXPECT_EQ(cli::run_complete(opt, out_, err_), cli::kIoError);
  EXPECT_NE(err_.str().find("corrupt input"), std::string::npos);

  opt.input = write_mask("ok.pbm", BinaryMask(8, 8));
  opt.fixed_gamma = 1.0;
  EXPECT_EQ(cli::run_complete(opt, out_, err_), cli::kUsage);
  opt.fixed_gamma.reset();
  opt.schedule.alpha = 1.5L;
  EXPECT_EQ(cli::run_complete(opt, out_, err_), cli::kUsage);
  opt.schedule.alpha = 0.9L;
  opt.sizes = {5, 5};
  EXPECT_EQ(cli::run_complete(opt, out_, err_), cli::kUsage);
}

TEST_F(CliTest, OracleCompareMatchesAndMismatches) {
  Rng rng(82);
  const BinaryMask observed = corrupt(BinaryMask::square({30, 30}, {6, 10, 12}), {CorruptionKind::UniformFlip, 8, 3}).mask;
  const fs::path in = write_mask("obs.pbm", observed);

  cli::CompleteOptions copt;
  copt.input = in;
  copt.output = path("dp.pbm");
  copt.sizes = {6};
  copt.fixed_gamma = 0.3;
  ASSERT_EQ(cli::run_complete(copt, out_, err_), cli::kOk);

  cli::OracleOptions oopt;
  oopt.input = in;
  oopt.sizes = {6};
  oopt.gamma = 0.3;
  oopt.compare = copt.output;
  oopt.output = path("oracle.pbm");
  std::ostringstream o1;
  EXPECT_EQ(cli::run_oracle(oopt, o1, err_), cli::kOk);
  EXPECT_EQ(Json::parse(o1.str())["compare"]["match"], true);
  EXPECT_EQ(pbm::load(*oopt.output), pbm::load(copt.output));

  oopt.gamma = 0.6;
  std::ostringstream o2;
  EXPECT_EQ(cli::run_oracle(oopt, o2, err_), cli::kMismatch);
  EXPECT_EQ(Json::parse(o2.str())["compare"]["match"], false);

  oopt.gamma = 1.0;
  EXPECT_EQ(cli::run_oracle(oopt, out_, err_), cli::kUsage);
}

TEST_F(CliTest, OracleSweepOverRandomFixtures) {
  Rng rng(83);
  for (int k = 0; k < 20; ++k) {
    const auto inst = testing::random_instance(rng, 20, 6);
    const double g = 0.1 * static_cast<double>(rng.below(10));
    const fs::path in = write_mask("in.pbm", inst.mask);
    cli::CompleteOptions copt;
    copt.input = in;
    copt.output = path("dp.pbm");
    copt.sizes = {inst.size};
    copt.fixed_gamma = g;
    ASSERT_EQ(cli::run_complete(copt, out_, err_), cli::kOk);
    cli::OracleOptions oopt;
    oopt.input = in;
    oopt.sizes = {inst.size};
    oopt.gamma = g;
    oopt.compare = copt.output;
    ASSERT_EQ(cli::run_oracle(oopt, out_, err_), cli::kOk) << "fixture " << k;
  }
}

TEST_F(CliTest, GenShapes) {
  cli::GenOptions opt;
  opt.kind = ShapeKind::Square;
  opt.n = 100;
  opt.canvas = {500, 500};
  opt.output = path("sq.pbm");
  ASSERT_EQ(cli::run_gen(opt, out_, err_), cli::kOk);
  EXPECT_EQ(popcount(pbm::load(opt.output)), 10000u);

  opt.kind = ShapeKind::Ellipse;
  opt.output = path("el.pbm");
  ASSERT_EQ(cli::run_gen(opt, out_, err_), cli::kOk);
  const std::size_t n = popcount(pbm::load(opt.output));
  EXPECT_GE(n, 9800u);
  EXPECT_LE(n, 10200u);

  opt.kind = ShapeKind::Square;
  opt.anchor = Anchor{450, 0};
  EXPECT_EQ(cli::run_gen(opt, out_, err_), cli::kUsage);
}

TEST_F(CliTest, CorruptAndTrial) {
  cli::CorruptOptions copt;
  copt.input = write_mask("gt.pbm", BinaryMask::square({40, 40}, {10, 5, 5}));
  copt.output = path("obs.pbm");
  copt.model = {CorruptionKind::ErodeBoundary, 12, 5};
  ASSERT_EQ(cli::run_corrupt(copt, out_, err_), cli::kOk);
  const Json rep = Json::parse(out_.str());
  EXPECT_EQ(rep["distance"], 12);
  EXPECT_EQ(popcount(pbm::load(copt.output)), 88u);

  cli::TrialOptions topt;
  topt.size = 8;
  topt.canvas = {32, 32};
  topt.trials = 50;
  std::ostringstream tout;
  ASSERT_EQ(cli::run_trial(topt, tout, err_), cli::kOk);
  const Json t = Json::parse(tout.str());
  EXPECT_EQ(t["violations"], 0);
  EXPECT_EQ(t["config"]["budget"], 19);  // floor(0.3 * 64)
}

TEST_F(CliTest, BenchSmoke) {
  cli::BenchOptions opt;
  opt.config.canvases = {64, 128};
  opt.config.sizes = {5, 10};
  opt.config.reps = 1;
  opt.config.oracle_canvas = 64;
  ASSERT_EQ(cli::run_bench(opt, out_, err_), cli::kOk);
  const Json rep = Json::parse(out_.str());
  EXPECT_EQ(rep["result"]["rows"].size(), 4u);
  EXPECT_EQ(rep["result"]["area_scaling"].size(), 2u);
  EXPECT_FALSE(rep["result"]["oracle_growth"].is_null());

  opt.config.sizes = {200};
  EXPECT_EQ(cli::run_bench(opt, out_, err_), cli::kUsage);
}

}  // namespace
}  // namespace shapecomp
