#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ncwishart/cli.hpp"
#include "ncwishart/errors.hpp"
#include "ncwishart/io.hpp"

using namespace ncwishart;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ncwishart_cli_" + std::string(::testing::UnitTest::GetInstance()
                                               ->current_test_info()
                                               ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& body) {
    const std::string path = (dir_ / name).string();
    std::ofstream(path) << body;
    return path;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(cli::Command c, const std::string& input, const std::string& output,
          std::uint64_t seed = 7, bool allow_open = false) {
    cli::RunConfig cfg;
    cfg.command = c;
    cfg.input = input;
    cfg.output = output;
    cfg.seed = seed;
    cfg.n = 2000;
    cfg.allow_open = allow_open;
    return cli::run(cfg, log_);
  }

  fs::path dir_;
  std::ostringstream log_;
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

constexpr const char* kOpen =
    R"({"d":3,"p":0.5,"omega":[[1,0,0],[0,1,0],[0,0,0]],"sigma":[[1,0,0],[0,1,0],[0,0,1]]})";
constexpr const char* kTrivial = R"({"d":2,"p":0,"omega":[[0,0],[0,0]],"sigma":[[1,0],[0,1]]})";
constexpr const char* kNotExists = R"({"d":2,"p":0.3,"omega":[[0,0],[0,0]],"sigma":[[1,0],[0,1]]})";
constexpr const char* kGood =
    R"({"d":2,"p":1.5,"omega":[[1.2,0.3],[0.3,0.5]],"sigma":[[0.8,0.2],[0.2,0.6]]})";

}  // namespace

TEST(Io, ParamsRoundTrip) {
  const auto p = io::params_from_json(io::json::parse(kGood));
  const auto j = io::params_to_json(p);
  const auto q = io::params_from_json(j);
  EXPECT_EQ(p.p(), q.p());
  EXPECT_EQ(p.omega().mat(), q.omega().mat());
  EXPECT_EQ(io::detect_parameterization(io::json::parse(kGood)), io::Parameterization::Gamma);
}

TEST(Io, RejectsMalformedDocuments) {
  EXPECT_THROW(io::params_from_json(io::json::parse(R"({"d":2,"p":1,"omega":[[1,0]],"sigma":[[1,0],[0,1]]})")),
               ValidationError);
  EXPECT_THROW(io::params_from_json(io::json::parse(R"({"d":2,"p":1,"omega":[[1,0],[0,-1]],"sigma":[[1,0],[0,1]]})")),
               ValidationError);
}

TEST(Io, FormatDoubleIsShortestRoundTrip) {
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(2.0), "2");
  const double x = 0.30326532985631671;
  EXPECT_EQ(std::stod(io::format_double(x)), x);
}

TEST(Grid, ParseAndPrint) {
  const auto g = cli::GridSpec::parse("10:0.1,1");
  EXPECT_EQ(g.directions, 10);
  ASSERT_EQ(g.scales.size(), 2u);
  EXPECT_EQ(g.to_string(), "10:0.1,1");
  EXPECT_THROW(cli::GridSpec::parse("ten"), ValidationError);
  EXPECT_THROW(cli::GridSpec::parse("0:1"), ValidationError);
}

TEST_F(CliTest, ValidateOpenProblemExitsFour) {
  const auto in = write("open.json", kOpen);
  EXPECT_EQ(run(cli::Command::Validate, in, path("v.json")), cli::kOpenProblem);
  const auto v = io::json::parse(slurp(path("v.json")));
  EXPECT_EQ(v["status"], "OpenProblem");
  EXPECT_EQ(run(cli::Command::Validate, in, path("v2.json"), 7, true), cli::kSuccess);
}

TEST_F(CliTest, SampleTrivialIsPointMass) {
  const auto in = write("t.json", kTrivial);
  ASSERT_EQ(run(cli::Command::Sample, in, path("s.csv")), cli::kSuccess);
  std::istringstream csv(slurp(path("s.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "k,x_11,x_12,x_21,x_22");
  std::getline(csv, line);
  EXPECT_EQ(line, "0,0,0,0,0");
  const auto meta = io::json::parse(slurp(path("s.csv.meta.json")));
  EXPECT_EQ(meta["verdict"]["status"], "Trivial");
  EXPECT_EQ(meta["method"], "point-mass");
  EXPECT_EQ(meta["seed"], 7);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run(cli::Command::Sample, write("n.json", kNotExists), path("o.csv")),
            cli::kNotExists);
  EXPECT_EQ(run(cli::Command::Sample, write("o.json", kOpen), path("o.csv")),
            cli::kOpenProblem);
  EXPECT_EQ(run(cli::Command::Validate, write("bad.json", "{not json"), path("x.json")),
            cli::kInvalidInput);
  EXPECT_EQ(run(cli::Command::Validate, path("missing.json"), path("x.json")),
            cli::kInvalidInput);
  // The transform stays evaluable whatever the verdict.
  EXPECT_EQ(run(cli::Command::Laplace, path("n.json"), path("l.csv")), cli::kSuccess);
  EXPECT_EQ(run(cli::Command::Convert, path("n.json"), path("c.json")), cli::kSuccess);
  const auto proc = write(
      "p.json", R"({"d":3,"p":0.5,"alpha":[[1,0,0],[0,1,0],[0,0,1]],"beta":[[0,0,0],[0,0,0],[0,0,0]],"mode":"formal"})");
  EXPECT_EQ(run(cli::Command::Simulate, proc, path("path.csv")), cli::kNotExists);
  EXPECT_EQ(run(cli::Command::Riccati, proc, path("r.csv")), cli::kSuccess);
}

TEST_F(CliTest, SampleIsByteReproducible) {
  const auto in = write("g.json", kGood);
  ASSERT_EQ(run(cli::Command::Sample, in, path("a.csv"), 11), cli::kSuccess);
  ASSERT_EQ(run(cli::Command::Sample, in, path("b.csv"), 11), cli::kSuccess);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(slurp(path("a.csv.meta.json")), slurp(path("b.csv.meta.json")));
  ASSERT_EQ(run(cli::Command::Sample, in, path("c.csv"), 12), cli::kSuccess);
  EXPECT_NE(slurp(path("a.csv")), slurp(path("c.csv")));
}

TEST_F(CliTest, VerifyReportsIdentitiesAndZScores) {
  const auto in = write("g.json", kGood);
  ASSERT_EQ(run(cli::Command::Verify, in, path("r.json"), 42), cli::kSuccess);
  const auto r = io::json::parse(slurp(path("r.json")));
  EXPECT_TRUE(r["identities_passed"].get<bool>());
  EXPECT_EQ(r["transform"].size(), 20u);
  EXPECT_EQ(r["method"], "exact");
  for (const auto& row : r["transform"]) {
    for (const char* key : {"u_id", "analytic", "empirical", "stderr", "z"}) {
      EXPECT_TRUE(row.contains(key)) << key;
    }
  }
}

TEST_F(CliTest, VerifyOpenProblem) {
  const auto in = write("o.json", kOpen);
  EXPECT_EQ(run(cli::Command::Verify, in, path("r.json")), cli::kOpenProblem);
  EXPECT_EQ(run(cli::Command::Verify, in, path("r2.json"), 7, true), cli::kSuccess);
  const auto r = io::json::parse(slurp(path("r2.json")));
  EXPECT_TRUE(r["transform"].is_null());
  EXPECT_TRUE(r["identities_passed"].get<bool>());
}

TEST_F(CliTest, ConvertRoundTrip) {
  const auto in = write("g.json", kGood);
  cli::RunConfig cfg;
  cfg.command = cli::Command::Convert;
  cfg.input = in;
  cfg.output = path("letac.json");
  cfg.to = "letac";
  ASSERT_EQ(cli::run(cfg, log_), cli::kSuccess);
  cfg.input = cfg.output;
  cfg.output = path("back.json");
  cfg.to = "gamma";
  ASSERT_EQ(cli::run(cfg, log_), cli::kSuccess);
  const auto a = io::params_from_json(io::json::parse(kGood));
  const auto b = io::params_from_json(io::json::parse(slurp(path("back.json"))));
  EXPECT_LE((a.omega().mat() - b.omega().mat()).norm(), 1e-12);
}
