#pragma once

// Deterministic synthetic pose graphs with the vertex/edge counts of the
// standard benchmark problems. Odometry and loop-closure measurements are the
// true relative poses perturbed by Gaussian tangent noise; initial values
// come from chaining the noisy odometry, so the initial estimate drifts the
// way real front ends do.
//
//   planar : Manhattan-world walk on a grid, closures between revisits of a
//            cell (M3500-like).
//   spatial: trajectory winding around a torus, closures to nearby poses on
//            the previous winding (torus3D-like).

#include <cstddef>
#include <cstdint>
#include <iosfwd>

#include "fgraph/variables.hpp"

namespace fgraph::io {

struct SyntheticSpec {
  std::size_t vertices = 3500;
  std::size_t edges = 5453;  // odometry (vertices - 1) plus loop closures
  // planar: side of the square grid; spatial: poses per winding.
  int extent = 20;
  double translation_sigma = 0.05;
  double rotation_sigma = 0.01;
  std::uint64_t seed = 3500;

  static SyntheticSpec planarBenchmark() { return {}; }
  static SyntheticSpec spatialBenchmark() { return {5000, 9048, 100, 0.05, 0.01, 5000}; }
};

// Writes the dataset in the pose-graph text format. Returns the ground truth.
// Throws ContractViolation when the walk cannot supply enough loop closures.
Variables writeSyntheticPlanar(std::ostream& out, const SyntheticSpec& spec);
Variables writeSyntheticSpatial(std::ostream& out, const SyntheticSpec& spec);

}  // namespace fgraph::io
