#include "fgraph/io/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "fgraph/errors.hpp"
#include "fgraph/factors.hpp"
#include "fgraph/io/g2o.hpp"
#include "fgraph/lie.hpp"
#include "fgraph/loss.hpp"

namespace fgraph::io {

namespace {

using Pair = std::pair<std::size_t, std::size_t>;

// Random subset of `count` (earlier, later) pairs, sorted by the later pose.
std::vector<Pair> subsample(std::vector<Pair> candidates, std::size_t count, std::mt19937_64& rng) {
  if (candidates.size() < count) {
    throw ContractViolation("walk produced " + std::to_string(candidates.size()) +
                            " loop-closure candidates, need " + std::to_string(count));
  }
  std::shuffle(candidates.begin(), candidates.end(), rng);
  candidates.resize(count);
  std::sort(candidates.begin(), candidates.end(),
            [](const Pair& a, const Pair& b) { return std::tie(a.second, a.first) < std::tie(b.second, b.first); });
  return candidates;
}

Eigen::VectorXd sampleTangent(const Eigen::VectorXd& sigmas, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd n(sigmas.size());
  for (Eigen::Index k = 0; k < n.size(); ++k) n[k] = sigmas[k] * normal(rng);
  return n;
}

template <typename G>
Variables writeDataset(std::ostream& out, const std::vector<G>& truth,
                       const std::vector<Pair>& closures, const Eigen::VectorXd& sigmas,
                       std::mt19937_64& rng) {
  const auto loss = LossFunction::sigmas(sigmas);
  auto measure = [&](std::size_t a, std::size_t b) {
    const G rel = truth[a].inverse() * truth[b];
    return rel * G::exp(sampleTangent(sigmas, rng));
  };

  FactorGraph graph;
  Variables initials, ground_truth;
  G current = truth[0];
  initials.add(key('x', 0), current);
  for (std::size_t i = 1; i < truth.size(); ++i) {
    const G odo = measure(i - 1, i);
    graph.emplace<BetweenFactor<G>>(key('x', i - 1), key('x', i), odo, loss);
    current = current * odo;
    initials.add(key('x', i), current);
  }
  for (const auto& [a, b] : closures) {
    graph.emplace<BetweenFactor<G>>(key('x', a), key('x', b), measure(a, b), loss);
  }
  for (std::size_t i = 0; i < truth.size(); ++i) ground_truth.add(key('x', i), truth[i]);
  save_pose_graph(out, graph, initials);
  return ground_truth;
}

void checkCounts(const SyntheticSpec& spec) {
  if (spec.vertices < 2 || spec.edges < spec.vertices - 1 || spec.extent < 2) {
    throw ContractViolation("synthetic spec needs >= 2 vertices, >= vertices-1 edges, >= 2 cells");
  }
}

}  // namespace

Variables writeSyntheticPlanar(std::ostream& out, const SyntheticSpec& spec) {
  checkCounts(spec);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  constexpr std::array<std::array<int, 2>, 4> kStep{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

  std::vector<std::array<int, 2>> cells;
  std::vector<Pose2> truth;
  std::array<int, 2> pos{spec.extent / 2, spec.extent / 2};
  int heading = 0;
  auto inside = [&](int h) {
    const int x = pos[0] + kStep[h][0], y = pos[1] + kStep[h][1];
    return x >= 0 && y >= 0 && x < spec.extent && y < spec.extent;
  };
  for (std::size_t i = 0; i < spec.vertices; ++i) {
    cells.push_back(pos);
    truth.emplace_back(pos[0], pos[1], heading * std::numbers::pi / 2);
    const double u = uniform(rng);
    int next = u < 0.6 ? heading : (u < 0.8 ? (heading + 1) % 4 : (heading + 3) % 4);
    for (int tries = 0; !inside(next) && tries < 4; ++tries) next = (next + 1) % 4;
    heading = next;
    pos = {pos[0] + kStep[heading][0], pos[1] + kStep[heading][1]};
  }

  // Every non-consecutive revisit of a cell is a candidate closure.
  std::map<std::array<int, 2>, std::vector<std::size_t>> visits;
  std::vector<Pair> candidates;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto& seen = visits[cells[i]];
    for (std::size_t j : seen) {
      if (j + 1 < i) candidates.emplace_back(j, i);
    }
    seen.push_back(i);
  }
  const auto closures = subsample(std::move(candidates), spec.edges - (spec.vertices - 1), rng);
  const Eigen::Vector3d sigmas(spec.translation_sigma, spec.translation_sigma, spec.rotation_sigma);
  return writeDataset(out, truth, closures, sigmas, rng);
}

Variables writeSyntheticSpatial(std::ostream& out, const SyntheticSpec& spec) {
  checkCounts(spec);
  std::mt19937_64 rng(spec.seed);
  const auto per_turn = static_cast<std::size_t>(spec.extent);
  const double windings = std::ceil(static_cast<double>(spec.vertices) / spec.extent);
  constexpr double kMajor = 30.0, kMinor = 10.0;

  // Pose k sits at minor angle psi = 2 pi k / per_turn while the major angle
  // phi advances by one step per winding. The body x axis follows the motion
  // around the tube and z points out of the surface.
  std::vector<Pose3> truth;
  for (std::size_t k = 0; k < spec.vertices; ++k) {
    const double psi = 2.0 * std::numbers::pi * static_cast<double>(k) / spec.extent;
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / (spec.extent * windings);
    const double ring = kMajor + kMinor * std::cos(psi);
    const Eigen::Vector3d p(ring * std::cos(phi), ring * std::sin(phi), kMinor * std::sin(psi));
    const Eigen::Vector3d normal(std::cos(psi) * std::cos(phi), std::cos(psi) * std::sin(phi),
                                 std::sin(psi));
    const Eigen::Vector3d along(-std::sin(psi) * std::cos(phi), -std::sin(psi) * std::sin(phi),
                                std::cos(psi));
    Eigen::Matrix3d r;
    r.col(0) = along;
    r.col(1) = normal.cross(along);
    r.col(2) = normal;
    truth.emplace_back(Rot3::fromMatrix(r), p);
  }

  // Candidates join a pose to the three nearest poses one winding earlier.
  std::vector<Pair> candidates;
  for (std::size_t k = per_turn + 1; k < spec.vertices; ++k) {
    for (std::size_t back : {per_turn - 1, per_turn, per_turn + 1}) candidates.emplace_back(k - back, k);
  }
  const auto closures = subsample(std::move(candidates), spec.edges - (spec.vertices - 1), rng);
  Eigen::VectorXd sigmas(6);
  sigmas << Eigen::Vector3d::Constant(spec.translation_sigma),
      Eigen::Vector3d::Constant(spec.rotation_sigma);
  return writeDataset(out, truth, closures, sigmas, rng);
}

}  // namespace fgraph::io
