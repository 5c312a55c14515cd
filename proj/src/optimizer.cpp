#include "fgraph/optimizer.hpp"

#include <cmath>
#include <limits>

#include "fgraph/errors.hpp"
#include "fgraph/sparse/linear_system.hpp"
#include "fgraph/sparse/ordering.hpp"

namespace fgraph {

std::string_view to_string(OptimizationStatus status) {
  switch (status) {
    case OptimizationStatus::Success:
      return "SUCCESS";
    case OptimizationStatus::MaxIterations:
      return "MAX_ITERATIONS";
    case OptimizationStatus::RankDeficiency:
      return "RANK_DEFICIENCY";
    case OptimizationStatus::InvalidInput:
      return "INVALID_INPUT";
    case OptimizationStatus::LambdaLimit:
      return "LAMBDA_LIMIT";
  }
  return "UNKNOWN";
}

std::string_view to_string(Algorithm algorithm) {
  return algorithm == Algorithm::GaussNewton ? "gn" : "lm";
}

std::string_view to_string(LinearSolverKind solver) {
  return solver == LinearSolverKind::Cholesky ? "cholesky" : "pcg";
}

void OptimizerParams::validate() const {
  if (max_iterations < 0) throw ContractViolation("max_iterations must be non-negative");
  if (!(relative_cost_tolerance > 0.0) || !(gradient_tolerance > 0.0)) {
    throw ContractViolation("convergence tolerances must be positive");
  }
  if (!(lambda_min > 0.0) || !(lambda_min <= lambda_max)) {
    throw ContractViolation("lambda bounds must satisfy 0 < min <= max");
  }
  if (!(lambda_initial >= lambda_min && lambda_initial <= lambda_max)) {
    throw ContractViolation("initial lambda outside its bounds");
  }
  if (!(lambda_increase > 1.0) || !(lambda_decrease > 0.0 && lambda_decrease < 1.0)) {
    throw ContractViolation("lambda factors must increase above 1 and decrease below 1");
  }
  if (!(damping_floor > 0.0)) throw ContractViolation("damping floor must be positive");
  if (!(pcg.tolerance > 0.0) || pcg.max_iterations <= 0) {
    throw ContractViolation("pcg settings must be positive");
  }
}

// ---------------------------------------------------------------- solver

NormalEquationSolver::NormalEquationSolver(LinearSolverKind kind, sparse::CholeskyOptions cholesky,
                                           sparse::PcgOptions pcg)
    : kind_(kind), cholesky_(cholesky), pcg_(pcg) {}

Eigen::VectorXd NormalEquationSolver::solve(const sparse::CscMatrix& h, const Eigen::VectorXd& rhs,
                                            const VariableLayout& layout, double lambda,
                                            double damping_floor) {
  sparse::CscMatrix a = h;
  if (lambda > 0.0) {
    for (sparse::Index j = 0; j < a.cols; ++j) {
      const sparse::Index p = a.find(j, j);
      if (p < 0) throw IndefiniteMatrixError(static_cast<std::size_t>(j), 0.0);
      a.values[p] += lambda * std::max(h.values[p], damping_floor);
    }
  }

  Eigen::VectorXd dx;
  if (kind_ == LinearSolverKind::Cholesky) {
    if (!symbolic_ || !symbolic_->matches(a)) {
      auto ordering = sparse::amdOrdering(a, layout.offsets());
      symbolic_ = std::make_shared<const sparse::SymbolicCholesky>(a, std::move(ordering.scalar_perm));
      ++analyses_;
    }
    const sparse::CholeskyFactor factor(symbolic_, a, cholesky_);
    dx = factor.solve(rhs);
  } else {
    dx = sparse::pcgSolve(a, rhs, pcg_, layout.offsets()).x;
  }
  const double rn = rhs.norm();
  const Eigen::VectorXd res = sparse::symmetricMultiply(a, dx) - rhs;
  last_residual_ = rn > 0.0 ? res.norm() / rn : res.norm();
  return dx;
}

// ---------------------------------------------------------------- steps

StepResult gaussNewtonStep(const FactorGraph& graph, const Variables& values,
                           const VariableLayout& layout, NormalEquationSolver& solver) {
  const sparse::LinearSystem sys = sparse::linearize(graph, values, layout);
  const sparse::NormalSystem normal = sparse::assembleNormal(sys.jacobian, sys.rhs);
  StepResult out;
  out.delta = solver.solve(normal.hessian, -normal.gradient, layout);
  out.linear_residual = solver.lastResidual();
  out.predicted_cost = (sys.jacobian.multiply(out.delta) + sys.rhs).squaredNorm();
  return out;
}

LmStepResult lmStep(LmState& state, const sparse::CscMatrix& h, const Eigen::VectorXd& gradient,
                    const FactorGraph& graph, const Variables& values,
                    const VariableLayout& layout, NormalEquationSolver& solver,
                    const OptimizerParams& params) {
  LmStepResult out;
  out.record.cost_before = state.cost;
  out.record.lambda = state.lambda;

  Eigen::VectorXd dx;
  try {
    dx = solver.solve(h, -gradient, layout, state.lambda, params.damping_floor);
  } catch (const IndefiniteMatrixError&) {
    out.record.cost_after = std::numeric_limits<double>::infinity();
    out.values = values;
    state.lambda *= params.lambda_increase;
    return out;
  }
  out.record.step_norm = dx.norm();
  out.record.linear_residual = solver.lastResidual();

  Variables candidate = values.retract(layout, dx);
  const double new_cost = totalCost(graph, candidate);
  out.record.cost_after = new_cost;
  if (new_cost < state.cost) {
    out.accepted = true;
    out.values = std::move(candidate);
    state.cost = new_cost;
    state.lambda = std::max(state.lambda * params.lambda_decrease, params.lambda_min);
  } else {
    out.values = values;
    state.lambda *= params.lambda_increase;
  }
  out.record.accepted = out.accepted;
  return out;
}

// ---------------------------------------------------------------- driver

namespace {

std::string describeColumn(const VariableLayout& layout, std::size_t column) {
  if (column >= static_cast<std::size_t>(layout.totalDim())) return "column " + std::to_string(column);
  return "variable " + layout.keys()[layout.blockOfColumn(static_cast<std::ptrdiff_t>(column))].str();
}

bool converged(double before, double after, double tol) {
  if (before <= 0.0) return true;
  return std::abs(before - after) / before < tol;
}

}  // namespace

OptimizationResult optimize(const FactorGraph& graph, const Variables& init,
                            const OptimizerParams& params) {
  params.validate();
  OptimizationResult result;
  result.values = init;

  VariableLayout layout;
  double cost = 0.0;
  try {
    layout = VariableLayout(defaultOrdering(graph), init);
    cost = totalCost(graph, init);
  } catch (const Error& ex) {
    result.status = OptimizationStatus::InvalidInput;
    result.message = ex.what();
    return result;
  }
  result.initial_cost = result.final_cost = cost;
  if (graph.empty()) {
    result.status = OptimizationStatus::Success;
    return result;
  }

  const bool lm = params.algorithm == Algorithm::LevenbergMarquardt;
  NormalEquationSolver solver(params.solver, params.cholesky, params.pcg);
  LmState state{params.lambda_initial, cost};
  Variables values = init;
  result.status = OptimizationStatus::MaxIterations;

  auto finish = [&](OptimizationStatus status) {
    result.status = status;
    result.values = values;
    result.final_cost = cost;
    return result;
  };

  try {
    while (result.iterations < params.max_iterations) {
      const int iteration = result.iterations + 1;
      const sparse::LinearSystem sys = sparse::linearize(graph, values, layout);
      const sparse::NormalSystem normal = sparse::assembleNormal(sys.jacobian, sys.rhs);

      // Nothing can decrease a zero cost, even in fixed-iteration mode.
      if (cost == 0.0 || (!params.fixed_iterations &&
                          normal.gradient.lpNorm<Eigen::Infinity>() < params.gradient_tolerance)) {
        IterationRecord rec;
        rec.iteration = iteration;
        rec.cost_before = rec.cost_after = cost;
        rec.lambda = lm ? state.lambda : 0.0;
        rec.accepted = true;
        result.records.push_back(rec);
        ++result.iterations;
        return finish(OptimizationStatus::Success);
      }

      if (!lm) {
        Eigen::VectorXd dx;
        try {
          dx = solver.solve(normal.hessian, -normal.gradient, layout);
        } catch (const IndefiniteMatrixError& ex) {
          result.message = "singular normal equations at " + describeColumn(layout, ex.column());
          return finish(OptimizationStatus::RankDeficiency);
        }
        values = values.retract(layout, dx);
        const double new_cost = totalCost(graph, values);
        IterationRecord rec;
        rec.iteration = iteration;
        rec.cost_before = cost;
        rec.cost_after = new_cost;
        rec.step_norm = dx.norm();
        rec.linear_residual = solver.lastResidual();
        rec.accepted = true;
        result.records.push_back(rec);
        ++result.iterations;
        const double before = cost;
        cost = new_cost;
        if (!params.fixed_iterations && converged(before, cost, params.relative_cost_tolerance)) {
          return finish(OptimizationStatus::Success);
        }
        continue;
      }

      if (iteration == 1 && params.check_rank) {
        try {
          solver.solve(normal.hessian, -normal.gradient, layout);
        } catch (const IndefiniteMatrixError& ex) {
          result.message = "singular normal equations at " + describeColumn(layout, ex.column());
          return finish(OptimizationStatus::RankDeficiency);
        }
      }

      const double before = cost;
      for (;;) {
        LmStepResult step =
            lmStep(state, normal.hessian, normal.gradient, graph, values, layout, solver, params);
        step.record.iteration = iteration;
        result.records.push_back(step.record);
        if (step.accepted) {
          values = std::move(step.values);
          cost = state.cost;
          ++result.iterations;
          break;
        }
        ++result.rejected;
        if (state.lambda > params.lambda_max) {
          result.message = "damping exceeded its upper bound";
          return finish(OptimizationStatus::LambdaLimit);
        }
      }
      if (!params.fixed_iterations && converged(before, cost, params.relative_cost_tolerance)) {
        return finish(OptimizationStatus::Success);
      }
    }
  } catch (const MissingKeyError& ex) {
    result.message = ex.what();
    return finish(OptimizationStatus::InvalidInput);
  } catch (const DimensionMismatch& ex) {
    result.message = ex.what();
    return finish(OptimizationStatus::InvalidInput);
  }
  return finish(OptimizationStatus::MaxIterations);
}

}  // namespace fgraph
