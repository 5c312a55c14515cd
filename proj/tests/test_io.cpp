#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "fgraph/errors.hpp"
#include "fgraph/factors.hpp"
#include "fgraph/io/g2o.hpp"
#include "fgraph/io/synthetic.hpp"
#include "oracles.hpp"

using namespace fgraph;
using namespace fgraph::io;

namespace {

const std::filesystem::path kData = FGRAPH_TEST_DATA;

Key x(int i) { return key('x', static_cast<std::uint64_t>(i)); }

DatasetBundle parse(const std::string& text, const LoadOptions& opts = {}) {
  std::istringstream in(text);
  return load_pose_graph(in, opts);
}

std::string save(const DatasetBundle& b, const SaveOptions& opts = {}) {
  std::ostringstream out;
  save_pose_graph(out, b, b.initials, opts);
  return out.str();
}

std::size_t parseErrorLine(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "no parse error for:\n" << text;
  return 0;
}

Eigen::MatrixXd information(const Factor& f) {
  return f.loss() ? f.loss()->informationMatrix() : Eigen::MatrixXd::Identity(f.dim(), f.dim());
}

// Compares two bundles factor by factor: keys, measurements, information and
// initial values.
void expectSameBundle(const DatasetBundle& a, const DatasetBundle& b, double tol) {
  ASSERT_EQ(a.graph.size(), b.graph.size());
  ASSERT_EQ(a.initials.size(), b.initials.size());
  EXPECT_EQ(a.dimensionality, b.dimensionality);
  for (const auto& [k, v] : a.initials) EXPECT_LT(v.local(b.initials.at(k)).norm(), tol) << k;
  for (std::size_t i = 0; i < a.graph.size(); ++i) {
    const Factor& fa = *a.graph[i];
    const Factor& fb = *b.graph[i];
    EXPECT_EQ(fa.keys(), fb.keys()) << i;
    EXPECT_LT((information(fa) - information(fb)).norm(), tol * (1.0 + information(fa).norm())) << i;
    // Same measurement: identical errors at the initial values.
    EXPECT_LT((fa.error(a.initials) - fb.error(a.initials)).norm(), tol) << i;
  }
}

const char* kThreeVertex =
    "VERTEX_SE2 0 1.0 2.0 0.5\n"
    "VERTEX_SE2 1 3.0 2.5 0.7\n"
    "VERTEX_SE2 2 4.0 4.0 1.2\n"
    "EDGE_SE2 0 1 2 0.1 0.2 10 1 0 10 0 40\n"
    "EDGE_SE2 1 2 1.5 1.0 0.5 5 0 0 5 0 20\n";

}  // namespace

TEST(Load, VertexRecord) {
  const auto b = parse("VERTEX_SE2 0 1.0 2.0 0.5\n");
  const Pose2& p = b.initials.at<Pose2>(x(0));
  EXPECT_EQ(p.x(), 1.0);
  EXPECT_EQ(p.y(), 2.0);
  EXPECT_EQ(p.theta(), 0.5);
  EXPECT_EQ(b.vertex_count, 1u);
  EXPECT_EQ(b.dimensionality, Dimensionality::Planar);
}

TEST(Load, EdgeRecordExpandsUpperTriangle) {
  const auto b = parse("VERTEX_SE2 0 0 0 0\nVERTEX_SE2 1 5 0 0\nEDGE_SE2 0 1 5 0 0 1 0 0 1 0 1\n",
                       {.auto_prior = false});
  ASSERT_EQ(b.graph.size(), 1u);
  const auto* f = dynamic_cast<const BetweenFactor<Pose2>*>(b.graph[0].get());
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->measured().x(), 5.0);
  EXPECT_EQ(f->measured().theta(), 0.0);
  EXPECT_EQ(f->keys(), (std::vector<Key>{x(0), x(1)}));
  EXPECT_LT((information(*f) - Eigen::Matrix3d::Identity()).norm(), 1e-15);

  const auto c = parse("VERTEX_SE2 0 0 0 0\nVERTEX_SE2 1 5 0 0\nEDGE_SE2 0 1 5 0 0 4 1 2 5 3 6\n",
                       {.auto_prior = false});
  Eigen::Matrix3d expected;
  expected << 4, 1, 2, 1, 5, 3, 2, 3, 6;
  EXPECT_LT((information(*c.graph[0]) - expected).norm(), 1e-12);
}

TEST(Load, SpatialRecordsAndRotationFirstInformation) {
  std::string upper;
  for (int r = 0; r < 6; ++r)
    for (int c = r; c < 6; ++c) upper += " " + std::to_string(r == c ? r + 1 : 0);
  const std::string text = "VERTEX_SE3:QUAT 0 0 0 0 0 0 0 1\n"
                           "VERTEX_SE3:QUAT 1 1 0 0 0 0 0.7071067811865476 0.7071067811865476\n"
                           "EDGE_SE3:QUAT 0 1 1 0 0 0 0 0.7071067811865476 0.7071067811865476" + upper + "\n";
  const auto tw = parse(text, {.auto_prior = false});
  const auto wt = parse(text, {.auto_prior = false, .rotation_first_info = true});
  EXPECT_EQ(tw.dimensionality, Dimensionality::Spatial);
  Eigen::VectorXd d_tw(6), d_wt(6);
  d_tw << 1, 2, 3, 4, 5, 6;
  d_wt << 4, 5, 6, 1, 2, 3;
  EXPECT_LT((information(*tw.graph[0]).diagonal() - d_tw).norm(), 1e-12);
  EXPECT_LT((information(*wt.graph[0]).diagonal() - d_wt).norm(), 1e-12);
  EXPECT_LT(tw.graph[0]->error(tw.initials).norm(), 1e-12);

  // Writing with the same convention restores the file's ordering.
  std::ostringstream os;
  save_pose_graph(os, wt, wt.initials, {.rotation_first_info = true});
  const auto reread = parse(os.str(), {.auto_prior = false});
  EXPECT_LT((information(*reread.graph[0]).diagonal() - d_tw).norm(), 1e-12);
}

TEST(Load, QuaternionNormalization) {
  const auto ok = parse("VERTEX_SE3:QUAT 0 0 0 0 0 0 0 1.0005\n");
  EXPECT_NEAR(ok.initials.at<Pose3>(x(0)).rotation().quaternion().norm(), 1.0, 1e-15);
  EXPECT_EQ(parseErrorLine("VERTEX_SE3:QUAT 0 0 0 0 0 0 0 1.0005\nVERTEX_SE3:QUAT 1 0 0 0 0 0 0 1.01\n"), 2u);
}

TEST(Load, AutoPriorAnchorsLowestVertex) {
  const auto b = parse(kThreeVertex);
  EXPECT_EQ(b.edge_count, 2u);
  EXPECT_EQ(b.prior_count, 0u);
  ASSERT_TRUE(b.auto_prior_index.has_value());
  EXPECT_EQ(*b.auto_prior_index, 2u);
  const auto* prior = dynamic_cast<const PriorFactor<Pose2>*>(b.graph[2].get());
  ASSERT_NE(prior, nullptr);
  EXPECT_EQ(prior->keys()[0], x(0));
  EXPECT_EQ(prior->error(b.initials).norm(), 0.0);

  const auto none = parse(kThreeVertex, {.auto_prior = false});
  EXPECT_EQ(none.graph.size(), 2u);
  EXPECT_FALSE(none.auto_prior_index.has_value());

  const auto five = load_pose_graph(kData / "five_pose.g2o");
  EXPECT_EQ(five.prior_count, 1u);
  EXPECT_FALSE(five.auto_prior_index.has_value());
  EXPECT_EQ(five.graph.size(), 6u);
}

TEST(Load, CommentsBlankLinesAndUnknownRecords) {
  const auto b = parse("# header\n\nVERTEX_SE2 0 0 0 0\nFIX 0\nVERTEX_XY 3 1 2\nVERTEX_SE2 1 1 0 0\n"
                       "EDGE_SE2 0 1 1 0 0 1 0 0 1 0 1\n");
  EXPECT_EQ(b.skipped_records, 2u);
  EXPECT_EQ(b.vertex_count, 2u);
  EXPECT_EQ(b.edge_count, 1u);
}

TEST(Load, Errors) {
  EXPECT_EQ(parseErrorLine(""), 0u);
  EXPECT_EQ(parseErrorLine("# only a comment\n"), 0u);
  EXPECT_EQ(parseErrorLine("VERTEX_SE2 0 1 2\n"), 1u);
  EXPECT_EQ(parseErrorLine("VERTEX_SE2 0 1 2 0.5 9\n"), 1u);
  EXPECT_EQ(parseErrorLine("VERTEX_SE2 0 1 2 abc\n"), 1u);
  EXPECT_EQ(parseErrorLine("VERTEX_SE2 0 0 0 0\nVERTEX_SE2 0 1 1 1\n"), 2u);
  EXPECT_EQ(parseErrorLine("VERTEX_SE2 0 0 0 0\nVERTEX_SE3:QUAT 1 0 0 0 0 0 0 1\n"), 2u);
  EXPECT_EQ(parseErrorLine("VERTEX_SE2 0 0 0 0\nEDGE_SE2 0 0 1 0 0 1 0 0 1 0 1\n"), 2u);
  EXPECT_EQ(parseErrorLine("VERTEX_SE2 0 0 0 0\nVERTEX_SE2 1 0 0 0\nEDGE_SE2 0 1 1 0 0 1 0 0 -1 0 1\n"), 3u);
  EXPECT_EQ(parseErrorLine("VERTEX_SE2 -1 0 0 0\n"), 1u);

  try {
    parse("VERTEX_SE2 0 0 0 0\n\nEDGE_SE2 0 7 1 0 0 1 0 0 1 0 1\n");
    FAIL();
  } catch (const ReferenceError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("7"), std::string::npos);
  }
  EXPECT_THROW(load_pose_graph(kData / "does_not_exist.g2o"), IoError);
}

TEST(Save, IdentityInformationAndNumberFormat) {
  FactorGraph g;
  g.emplace<BetweenFactor<Pose2>>(x(0), x(1), Pose2(5, 0, 0));
  Variables v;
  v.add(x(0), Pose2(0, -0.0, 0));
  v.add(x(1), Pose2(0.1, 5, 1.0 / 3.0));
  std::ostringstream os;
  save_pose_graph(os, g, v);
  EXPECT_EQ(os.str(),
            "VERTEX_SE2 0 0 0 0\n"
            "VERTEX_SE2 1 0.10000000000000001 5 0.33333333333333331\n"
            "EDGE_SE2 0 1 5 0 0 1 0 0 1 0 1\n");
}

TEST(Save, EmptyBundleGivesEmptyOutput) {
  std::ostringstream os;
  save_pose_graph(os, FactorGraph{}, Variables{});
  EXPECT_TRUE(os.str().empty());
}

TEST(Save, Errors) {
  Variables mixed;
  mixed.add(x(0), Pose2());
  mixed.add(x(1), Pose3());
  std::ostringstream os;
  EXPECT_THROW(save_pose_graph(os, FactorGraph{}, mixed), ContractViolation);

  Variables landmark;
  landmark.add(key('l', 0), Pose2());
  EXPECT_THROW(save_pose_graph(os, FactorGraph{}, landmark), ContractViolation);

  FactorGraph linear;
  linear.emplace<LinearFactor>(std::vector<Key>{x(0)}, std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Identity(3, 3)},
                               Eigen::VectorXd::Zero(3));
  Variables one;
  one.add(x(0), Pose2());
  EXPECT_THROW(save_pose_graph(os, linear, one), ContractViolation);
}

TEST(RoundTrip, ThreeVertexBundle) {
  const auto a = parse(kThreeVertex);
  const std::string text = save(a);
  const auto b = parse(text);
  expectSameBundle(a, b, 1e-9);
  EXPECT_EQ(save(b), text);
}

TEST(RoundTrip, FixturesAreFixpoints) {
  for (const char* name : {"five_pose.g2o", "five_pose_literal.g2o", "square_3d.g2o"}) {
    SCOPED_TRACE(name);
    const auto a = load_pose_graph(kData / name);
    const auto b = parse(save(a));
    expectSameBundle(a, b, 1e-9);
    EXPECT_EQ(save(b), save(a));
  }
}

TEST(RoundTrip, RandomPlanarAndSpatialGraphs) {
  std::mt19937_64 rng(121);
  for (int trial = 0; trial < 20; ++trial) {
    FactorGraph g2, g3;
    Variables v2, v3;
    for (int i = 0; i < 6; ++i) {
      v2.add(x(i), oracle::randomPose2(rng));
      v3.add(x(i), oracle::randomPose3(rng));
    }
    for (int i = 0; i + 1 < 6; ++i) {
      g2.emplace<BetweenFactor<Pose2>>(x(i), x(i + 1), oracle::randomPose2(rng),
                                       LossFunction::information(oracle::randomSpd(rng, 3, 0.5)));
      g3.emplace<BetweenFactor<Pose3>>(x(i), x(i + 1), oracle::randomPose3(rng),
                                       LossFunction::information(oracle::randomSpd(rng, 6, 0.5)));
    }
    g2.emplace<PriorFactor<Pose2>>(x(0), oracle::randomPose2(rng));
    g3.emplace<PriorFactor<Pose3>>(x(3), oracle::randomPose3(rng), LossFunction::sigmas(Eigen::VectorXd::Constant(6, 0.3)));
    for (auto* pair : {&g2, &g3}) {
      const Variables& v = pair == &g2 ? v2 : v3;
      std::ostringstream os;
      save_pose_graph(os, *pair, v);
      const auto b = parse(os.str(), {.auto_prior = false});
      DatasetBundle a;
      a.graph = *pair;
      a.initials = v;
      a.dimensionality = pair == &g2 ? Dimensionality::Planar : Dimensionality::Spatial;
      expectSameBundle(a, b, 1e-9);
    }
  }
}

TEST(RoundTrip, RobustKernelsAreDropped) {
  auto a = parse(kThreeVertex, {.auto_prior = false});
  FactorGraph robust;
  for (const auto& f : a.graph) robust.add(f->withLoss(f->loss()->withKernel(RobustKernel::cauchy())));
  std::ostringstream os;
  save_pose_graph(os, robust, a.initials);
  EXPECT_EQ(os.str(), save(a));
}

TEST(Synthetic, PlanarBenchmarkCounts) {
  std::stringstream ss;
  const Variables truth = writeSyntheticPlanar(ss, SyntheticSpec::planarBenchmark());
  const auto b = load_pose_graph(ss);
  EXPECT_EQ(b.vertex_count, 3500u);
  EXPECT_EQ(b.edge_count, 5453u);
  EXPECT_EQ(truth.size(), 3500u);
  EXPECT_EQ(b.dimensionality, Dimensionality::Planar);
  EXPECT_EQ(b.graph.size(), 5454u);
}

TEST(Synthetic, SpatialBenchmarkCounts) {
  std::stringstream ss;
  writeSyntheticSpatial(ss, SyntheticSpec::spatialBenchmark());
  const auto b = load_pose_graph(ss);
  EXPECT_EQ(b.vertex_count, 5000u);
  EXPECT_EQ(b.edge_count, 9048u);
  EXPECT_EQ(b.dimensionality, Dimensionality::Spatial);
}

TEST(Synthetic, SeedDeterminesOutput) {
  SyntheticSpec spec = SyntheticSpec::planarBenchmark();
  spec.vertices = 200;
  spec.edges = 240;
  std::ostringstream a, b, c;
  writeSyntheticPlanar(a, spec);
  writeSyntheticPlanar(b, spec);
  spec.seed += 1;
  writeSyntheticPlanar(c, spec);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str(), c.str());
}
