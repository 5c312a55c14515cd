#pragma once

#include <span>

#include <Eigen/Core>

#include "fgraph/sparse/csc.hpp"

namespace fgraph::sparse {

struct PcgOptions {
  double tolerance = 1e-10;  // on ||H x - g|| / ||g||
  int max_iterations = 1000;
};

struct PcgResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Conjugate gradients on symmetric positive definite H (both triangles
// stored) with a block-Jacobi preconditioner over `block_offsets`; scalar
// Jacobi when the span is empty. Non-convergence is reported in the result.
PcgResult pcgSolve(const CscMatrix& h, const Eigen::VectorXd& g, const PcgOptions& options = {},
                   std::span<const Index> block_offsets = {});

}  // namespace fgraph::sparse
