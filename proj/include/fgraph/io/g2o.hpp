#pragma once

// Pose-graph text files, one record per line:
//
//   VERTEX_SE2 id x y theta
//   EDGE_SE2 i j dx dy dtheta  I11 I12 I13 I22 I23 I33
//   VERTEX_SE3:QUAT id x y z qx qy qz qw
//   EDGE_SE3:QUAT i j dx dy dz qx qy qz qw  <21 upper-triangular entries>
//   EDGE_PRIOR_SE2 id x y theta  <6 entries>
//   EDGE_PRIOR_SE3:QUAT id x y z qx qy qz qw  <21 entries>
//
// Vertex `id` becomes key ('x', id). Information entries are listed row by
// row over the upper triangle, in tangent order (x, y, theta) for 2D and
// (t, w) for 3D unless the rotation-first option is set.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "fgraph/factor_graph.hpp"
#include "fgraph/variables.hpp"

namespace fgraph::io {

enum class Dimensionality { None, Planar, Spatial };

std::string_view to_string(Dimensionality d);

struct LoadOptions {
  // Anchor the lowest vertex with a unit-weight prior when the file has none.
  bool auto_prior = true;
  // 3D information blocks are stored (w, t) in the file.
  bool rotation_first_info = false;
};

struct SaveOptions {
  bool rotation_first_info = false;
};

struct DatasetBundle {
  FactorGraph graph;
  Variables initials;
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;   // EDGE_SE2 / EDGE_SE3:QUAT records
  std::size_t prior_count = 0;  // prior records in the file
  std::size_t skipped_records = 0;
  Dimensionality dimensionality = Dimensionality::None;
  // Graph index of the prior added by auto_prior, if any.
  std::optional<std::size_t> auto_prior_index;
};

// Throws ParseError (malformed record, empty input, mixed dimensionality,
// duplicate vertex, bad quaternion) or ReferenceError (unknown vertex id).
DatasetBundle load_pose_graph(std::istream& in, const LoadOptions& options = {});
// As above; IoError if the file cannot be opened.
DatasetBundle load_pose_graph(const std::filesystem::path& path, const LoadOptions& options = {});

// Writes vertices in key order, then the factors in graph order. Only
// Pose2/Pose3 prior and between factors are representable; anything else,
// or a mix of 2D and 3D values, throws ContractViolation. Robust kernels are
// not part of the format and are dropped.
void save_pose_graph(std::ostream& out, const FactorGraph& graph, const Variables& values,
                     const SaveOptions& options = {});

// Saves `values` with the bundle's factors, leaving out the auto prior so the
// output reloads to the same graph.
void save_pose_graph(std::ostream& out, const DatasetBundle& bundle, const Variables& values,
                     const SaveOptions& options = {});

}  // namespace fgraph::io
