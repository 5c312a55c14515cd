#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "fgraph/factor_graph.hpp"
#include "fgraph/sparse/cholesky.hpp"
#include "fgraph/sparse/csc.hpp"
#include "fgraph/sparse/pcg.hpp"
#include "fgraph/variables.hpp"

namespace fgraph {

enum class Algorithm { GaussNewton, LevenbergMarquardt };
enum class LinearSolverKind { Cholesky, Pcg };

enum class OptimizationStatus { Success, MaxIterations, RankDeficiency, InvalidInput, LambdaLimit };

std::string_view to_string(OptimizationStatus status);
std::string_view to_string(Algorithm algorithm);
std::string_view to_string(LinearSolverKind solver);

struct OptimizerParams {
  Algorithm algorithm = Algorithm::LevenbergMarquardt;
  LinearSolverKind solver = LinearSolverKind::Cholesky;

  // Counts accepted iterations; rejected LM attempts are recorded separately.
  int max_iterations = 100;
  double relative_cost_tolerance = 1e-6;
  double gradient_tolerance = 1e-9;  // on ||J^T b||_inf

  // Runs exactly max_iterations accepted iterations with the convergence
  // tests disabled.
  bool fixed_iterations = false;

  double lambda_initial = 1e-5;
  double lambda_increase = 10.0;
  double lambda_decrease = 0.1;
  double lambda_min = 1e-10;
  double lambda_max = 1e10;
  // Floor applied to diag(J^T J) in the damping term.
  double damping_floor = 1e-12;

  // LM factorizes the undamped system once at the start so that a gauge
  // freedom surfaces as RankDeficiency instead of being masked by damping.
  bool check_rank = true;

  sparse::PcgOptions pcg{};
  sparse::CholeskyOptions cholesky{};

  // Throws ContractViolation on inconsistent settings.
  void validate() const;
};

struct IterationRecord {
  int iteration = 0;  // 1-based accepted-iteration index this attempt belongs to
  double cost_before = 0.0;
  double cost_after = 0.0;
  double lambda = 0.0;  // 0 for Gauss-Newton
  double step_norm = 0.0;
  double linear_residual = 0.0;  // ||A dx + g|| / ||g|| of the solved system
  bool accepted = false;
};

struct OptimizationResult {
  Variables values;
  OptimizationStatus status = OptimizationStatus::InvalidInput;
  std::vector<IterationRecord> records;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  int iterations = 0;  // accepted
  int rejected = 0;
  std::string message;
};

// Solves (H + damping) dx = rhs, caching the ordering and symbolic analysis
// while the pattern of H stays the same.
class NormalEquationSolver {
 public:
  NormalEquationSolver(LinearSolverKind kind, sparse::CholeskyOptions cholesky = {},
                       sparse::PcgOptions pcg = {});

  // Adds lambda * max(diag(H), floor) to the diagonal when lambda > 0.
  // Throws IndefiniteMatrixError from the Cholesky path.
  Eigen::VectorXd solve(const sparse::CscMatrix& h, const Eigen::VectorXd& rhs,
                        const VariableLayout& layout, double lambda = 0.0,
                        double damping_floor = 1e-12);

  // ||A dx - rhs|| / ||rhs|| of the last solve.
  double lastResidual() const { return last_residual_; }
  int analyses() const { return analyses_; }

 private:
  LinearSolverKind kind_;
  sparse::CholeskyOptions cholesky_;
  sparse::PcgOptions pcg_;
  std::shared_ptr<const sparse::SymbolicCholesky> symbolic_;
  double last_residual_ = 0.0;
  int analyses_ = 0;
};

struct StepResult {
  Eigen::VectorXd delta;      // apply as values.retract(layout, delta)
  double predicted_cost = 0;  // ||J dx + b||^2
  double linear_residual = 0;
};

// Minimizer of ||J dx + b||^2 at `values`: solves J^T J dx = -J^T b.
StepResult gaussNewtonStep(const FactorGraph& graph, const Variables& values,
                           const VariableLayout& layout, NormalEquationSolver& solver);

struct LmState {
  double lambda = 1e-5;
  double cost = 0.0;  // cost at the current values
};

struct LmStepResult {
  bool accepted = false;
  Variables values;  // unchanged copy when rejected
  IterationRecord record;
};

// One damped attempt on a fixed linearization. On acceptance lambda is
// decreased, on rejection increased; state.cost follows the accepted values.
LmStepResult lmStep(LmState& state, const sparse::CscMatrix& h, const Eigen::VectorXd& gradient,
                    const FactorGraph& graph, const Variables& values,
                    const VariableLayout& layout, NormalEquationSolver& solver,
                    const OptimizerParams& params);

// Never mutates `init`. Missing keys give InvalidInput; a singular undamped
// system gives RankDeficiency.
OptimizationResult optimize(const FactorGraph& graph, const Variables& init,
                            const OptimizerParams& params = {});

}  // namespace fgraph
