#pragma once

#include <iosfwd>

namespace fgraph::cli {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kIo = 3,
  kParse = 4,
  kOptimizer = 5,
};

// Entry point of the fgopt tool with injectable streams:
//
//   fgopt optimize --input in.g2o [--output out.g2o] [--algorithm gn|lm]
//                  [--solver cholesky|pcg] [--max-iters N] [--fixed-iters N]
//                  [--kernel none|huber|cauchy] [--kernel-param k]
//                  [--no-auto-prior] [--info-order tw|wt]
//                  [--stats stats.json] [--trajectory traj.csv] [-v]
//   fgopt info --input in.g2o [--no-auto-prior] [--info-order tw|wt]
//   fgopt generate --kind planar|spatial --output out.g2o [--seed S]
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fgraph::cli
