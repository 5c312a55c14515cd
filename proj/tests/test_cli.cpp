#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fgraph/cli.hpp"
#include "fgraph/io/g2o.hpp"
#include "fgraph/io/synthetic.hpp"
#include "fgraph/lie.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kData = FGRAPH_TEST_DATA;

struct CliResult {
  int code;
  std::string out, err;
};

CliResult fgopt(std::vector<std::string> args) {
  args.insert(args.begin(), "fgopt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = fgraph::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t lineCount(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fgopt_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  fs::path m3500() {
    const fs::path p = path("m3500.g2o");
    std::ofstream out(p);
    fgraph::io::writeSyntheticPlanar(out, fgraph::io::SyntheticSpec::planarBenchmark());
    return p;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, InfoOnFivePoseFixture) {
  const CliResult r = fgopt({"info", "--input", (kData / "five_pose.g2o").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("5 vertices, 5 edges + 1 prior, 2D\n", 0), 0u) << r.out;
  const auto pos = r.out.find("initial cost ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_GT(std::stod(r.out.substr(pos + 13)), 0.0);
  EXPECT_EQ(r.out.find("automatic prior"), std::string::npos);
}

TEST_F(Cli, InfoOnBenchmarkScaleInput) {
  const CliResult r = fgopt({"info", "-i", m3500().string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("3500 vertices, 5453 edges, 2D\n", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("gauge anchored by an automatic prior"), std::string::npos);
}

TEST_F(Cli, MissingFileIsAnIoError) {
  for (const bool optimize : {false, true}) {
    std::vector<std::string> args{optimize ? "optimize" : "info", "--input", path("nope.g2o").string()};
    if (optimize) args.insert(args.end(), {"--output", path("out.g2o").string()});
    const CliResult r = fgopt(args);
    EXPECT_EQ(r.code, fgraph::cli::kIo);
    EXPECT_TRUE(r.out.empty());
    EXPECT_FALSE(r.err.empty());
    EXPECT_FALSE(fs::exists(path("out.g2o")));
  }
}

TEST_F(Cli, EmptyFileIsAParseErrorAtLineZero) {
  const CliResult r = fgopt({"optimize", "--input", (kData / "empty.g2o").string(), "--output", path("o.g2o").string()});
  EXPECT_EQ(r.code, fgraph::cli::kParse);
  EXPECT_NE(r.err.find("line 0"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("o.g2o")));
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(fgopt({}).code, fgraph::cli::kUsage);
  EXPECT_EQ(fgopt({"optimize"}).code, fgraph::cli::kUsage);
  EXPECT_EQ(fgopt({"frobnicate"}).code, fgraph::cli::kUsage);
  const std::string in = (kData / "five_pose.g2o").string();
  EXPECT_EQ(fgopt({"optimize", "-i", in, "--algorithm", "dogleg"}).code, fgraph::cli::kUsage);
  EXPECT_EQ(fgopt({"optimize", "-i", in, "--kernel", "tukey"}).code, fgraph::cli::kUsage);
  EXPECT_EQ(fgopt({"optimize", "-i", in, "--max-iters", "-3"}).code, fgraph::cli::kUsage);
  EXPECT_EQ(fgopt({"optimize", "-i", in, "--kernel-param", "0"}).code, fgraph::cli::kUsage);
  EXPECT_EQ(fgopt({"--help"}).code, fgraph::cli::kOk);
}

TEST_F(Cli, FivePoseFixtureConverges) {
  const CliResult r = fgopt({"optimize", "-i", (kData / "five_pose.g2o").string(), "--stats", path("s.json").string(),
                       "--trajectory", path("t.csv").string(), "-o", path("o.g2o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("status SUCCESS"), std::string::npos);
  const auto stats = nlohmann::json::parse(slurp(path("s.json")));
  EXPECT_EQ(stats["status"], "SUCCESS");
  EXPECT_LT(stats["final_cost"].get<double>(), 1e-10);
  EXPECT_EQ(stats["records"].back()["cost"].get<double>(), stats["final_cost"].get<double>());

  const std::string csv = slurp(path("t.csv"));
  EXPECT_EQ(csv.rfind("id,x,y,theta\n", 0), 0u);
  EXPECT_EQ(lineCount(csv), 6u);

  const auto out = fgraph::io::load_pose_graph(path("o.g2o"));
  EXPECT_EQ(out.vertex_count, 5u);
  EXPECT_EQ(out.prior_count, 1u);
  EXPECT_NEAR(out.initials.at<fgraph::Pose2>(fgraph::key('x', 2)).x(), 5.0, 1e-5);
}

TEST_F(Cli, FixedIterationsOnBenchmarkScaleInput) {
  const fs::path in = m3500();
  const CliResult r = fgopt({"optimize", "--input", in.string(), "--algorithm", "lm", "--fixed-iters", "5", "--output",
                       path("out.g2o").string(), "--stats", path("stats.json").string(), "--trajectory",
                       path("traj.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto stats = nlohmann::json::parse(slurp(path("stats.json")));
  EXPECT_EQ(stats["status"], "MAX_ITERATIONS");
  EXPECT_EQ(stats["iterations"], 5);
  double prev = stats["initial_cost"].get<double>();
  int accepted = 0;
  for (const auto& rec : stats["records"]) {
    if (!rec["accepted"].get<bool>()) continue;
    ++accepted;
    EXPECT_LT(rec["cost"].get<double>(), prev);
    prev = rec["cost"].get<double>();
  }
  EXPECT_EQ(accepted, 5);
  EXPECT_EQ(lineCount(slurp(path("traj.csv"))), 3501u);

  // The auto prior is not written back: the output has the input's records.
  const auto a = fgraph::io::load_pose_graph(in), b = fgraph::io::load_pose_graph(path("out.g2o"));
  EXPECT_EQ(b.vertex_count, a.vertex_count);
  EXPECT_EQ(b.edge_count, a.edge_count);
  EXPECT_EQ(b.prior_count, 0u);
}

TEST_F(Cli, SpatialTrajectoryHeader) {
  const CliResult r = fgopt({"optimize", "-i", (kData / "square_3d.g2o").string(), "--trajectory", path("t.csv").string(),
                       "--solver", "pcg", "--kernel", "huber"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(path("t.csv"));
  EXPECT_EQ(csv.rfind("id,x,y,z,qx,qy,qz,qw\n", 0), 0u);
  EXPECT_EQ(lineCount(csv), 6u);
}

TEST_F(Cli, RankDeficiencyIsAnOptimizerFailure) {
  // The fixture without its prior and without the automatic one.
  std::ifstream in(kData / "five_pose.g2o");
  std::ofstream out(path("noprior.g2o"));
  for (std::string line; std::getline(in, line);)
    if (line.rfind("EDGE_PRIOR", 0) != 0) out << line << '\n';
  out.close();
  for (const char* alg : {"lm", "gn"}) {
    const CliResult r = fgopt({"optimize", "-i", path("noprior.g2o").string(), "--no-auto-prior", "--algorithm", alg,
                         "-o", path("o.g2o").string(), "--stats", path("s.json").string()});
    EXPECT_EQ(r.code, fgraph::cli::kOptimizer);
    EXPECT_NE(r.err.find("RANK_DEFICIENCY"), std::string::npos) << r.err;
    EXPECT_FALSE(fs::exists(path("o.g2o")));
    EXPECT_EQ(nlohmann::json::parse(slurp(path("s.json")))["status"], "RANK_DEFICIENCY");
  }
}

TEST_F(Cli, RepeatedRunsAreIdentical) {
  const fs::path in = m3500();
  std::vector<std::string> outputs;
  for (int run = 0; run < 2; ++run) {
    const std::string tag = std::to_string(run);
    const CliResult r = fgopt({"optimize", "-i", in.string(), "--fixed-iters", "3", "-o", path("o" + tag).string(),
                         "--stats", path("s" + tag).string(), "--trajectory", path("t" + tag).string()});
    ASSERT_EQ(r.code, 0);
    outputs.push_back(r.out + slurp(path("o" + tag)) + slurp(path("s" + tag)) + slurp(path("t" + tag)));
  }
  EXPECT_EQ(outputs[0], outputs[1]);
}

TEST_F(Cli, GenerateWritesLoadableData) {
  ASSERT_EQ(fgopt({"generate", "--kind", "spatial", "--output", path("s.g2o").string()}).code, 0);
  const auto b = fgraph::io::load_pose_graph(path("s.g2o"));
  EXPECT_EQ(b.vertex_count, 5000u);
  EXPECT_EQ(b.edge_count, 9048u);
}

TEST_F(Cli, BinaryExitCodes) {
  const char* bin = std::getenv("FGOPT_BINARY");
  if (bin == nullptr) GTEST_SKIP() << "FGOPT_BINARY not set";
  const std::string base = std::string("\"") + bin + "\"";
  auto status = [](int raw) { return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1; };
  EXPECT_EQ(status(std::system((base + " info -i \"" + (kData / "five_pose.g2o").string() + "\" >/dev/null").c_str())), 0);
  EXPECT_EQ(status(std::system((base + " info -i \"" + path("missing").string() + "\" 2>/dev/null").c_str())), 3);
  EXPECT_EQ(status(std::system((base + " info -i \"" + (kData / "empty.g2o").string() + "\" 2>/dev/null").c_str())), 4);
  EXPECT_EQ(status(std::system((base + " bogus 2>/dev/null").c_str())), 2);
}
