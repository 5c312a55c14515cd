#include "fgraph/cli.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fgraph/errors.hpp"
#include "fgraph/factors.hpp"
#include "fgraph/io/g2o.hpp"
#include "fgraph/io/synthetic.hpp"
#include "fgraph/lie.hpp"
#include "fgraph/loss.hpp"
#include "fgraph/optimizer.hpp"

namespace fgraph::cli {

namespace {

struct RunConfig {
  std::string input;
  std::string output;
  std::string algorithm = "lm";
  std::string solver = "cholesky";
  int max_iters = 100;
  int fixed_iters = 0;
  std::string kernel = "none";
  double kernel_param = 0.0;  // 0 selects the kernel's default
  bool no_auto_prior = false;
  std::string info_order = "tw";
  std::string stats;
  std::string trajectory;
  bool verbose = false;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

io::DatasetBundle load(const RunConfig& cfg) {
  io::LoadOptions opts;
  opts.auto_prior = !cfg.no_auto_prior;
  opts.rotation_first_info = cfg.info_order == "wt";
  return io::load_pose_graph(std::filesystem::path(cfg.input), opts);
}

// Robust kernels go on measurement edges only; priors keep their loss.
FactorGraph applyKernel(const FactorGraph& graph, const RobustKernel& kernel) {
  FactorGraph out;
  for (const auto& f : graph) {
    const bool edge = dynamic_cast<const BetweenFactor<Pose2>*>(f.get()) ||
                      dynamic_cast<const BetweenFactor<Pose3>*>(f.get());
    if (!edge) {
      out.add(f);
      continue;
    }
    const auto base = f->loss() ? f->loss() : LossFunction::unit(f->dim());
    out.add(f->withLoss(base->withKernel(kernel)));
  }
  return out;
}

void writeTrajectory(std::ostream& os, const Variables& values, io::Dimensionality dim) {
  os << (dim == io::Dimensionality::Spatial ? "id,x,y,z,qx,qy,qz,qw\n" : "id,x,y,theta\n");
  for (const auto& [k, v] : values) {
    os << k.index;
    if (const Pose2* p = v.try_get<Pose2>()) {
      os << ',' << fmt(p->x()) << ',' << fmt(p->y()) << ',' << fmt(p->theta());
    } else {
      const Pose3& p3 = v.get<Pose3>();
      const auto& t = p3.translation();
      const auto& q = p3.rotation().quaternion();
      for (double c : {t.x(), t.y(), t.z(), q.x(), q.y(), q.z(), q.w()}) os << ',' << fmt(c);
    }
    os << '\n';
  }
}

nlohmann::ordered_json statsJson(const RunConfig& cfg, const OptimizationResult& r) {
  nlohmann::ordered_json j;
  j["status"] = std::string(to_string(r.status));
  j["algorithm"] = cfg.algorithm;
  j["solver"] = cfg.solver;
  j["kernel"] = cfg.kernel;
  j["iterations"] = r.iterations;
  j["rejected"] = r.rejected;
  j["initial_cost"] = r.initial_cost;
  j["final_cost"] = r.final_cost;
  if (!r.message.empty()) j["message"] = r.message;
  auto& records = j["records"] = nlohmann::ordered_json::array();
  for (const auto& rec : r.records) {
    records.push_back({{"iteration", rec.iteration},
                       {"cost_before", rec.cost_before},
                       {"cost", rec.cost_after},
                       {"lambda", rec.lambda},
                       {"step_norm", rec.step_norm},
                       {"linear_residual", rec.linear_residual},
                       {"accepted", rec.accepted}});
  }
  return j;
}

template <typename Fn>
bool writeFile(const std::string& path, std::ostream& err, Fn&& body) {
  std::ofstream os(path);
  if (!os) {
    err << "error: cannot write " << path << '\n';
    return false;
  }
  body(os);
  os.flush();
  if (!os) {
    err << "error: write failed for " << path << '\n';
    return false;
  }
  return true;
}

int runOptimize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  io::DatasetBundle bundle = load(cfg);
  FactorGraph graph = bundle.graph;
  if (cfg.kernel != "none") {
    const auto kind = *parse_kernel_kind(cfg.kernel);
    RobustKernel k = kind == RobustKernel::Kind::Huber ? RobustKernel::huber() : RobustKernel::cauchy();
    if (cfg.kernel_param > 0.0) k.k = cfg.kernel_param;
    graph = applyKernel(graph, k);
  }

  OptimizerParams params;
  params.algorithm = cfg.algorithm == "gn" ? Algorithm::GaussNewton : Algorithm::LevenbergMarquardt;
  params.solver = cfg.solver == "pcg" ? LinearSolverKind::Pcg : LinearSolverKind::Cholesky;
  params.max_iterations = cfg.max_iters;
  if (cfg.fixed_iters > 0) {
    params.fixed_iterations = true;
    params.max_iterations = cfg.fixed_iters;
  }

  const OptimizationResult result = optimize(graph, bundle.initials, params);
  if (cfg.verbose) {
    for (const auto& rec : result.records) {
      out << "iter " << rec.iteration << (rec.accepted ? " accepted" : " rejected")
          << " cost " << fmt(rec.cost_after) << " lambda " << fmt(rec.lambda) << " |dx| "
          << fmt(rec.step_norm) << '\n';
    }
  }
  out << "status " << to_string(result.status) << ", " << result.iterations << " iterations ("
      << result.rejected << " rejected), cost " << fmt(result.initial_cost) << " -> "
      << fmt(result.final_cost) << '\n';

  if (!cfg.stats.empty() &&
      !writeFile(cfg.stats, err, [&](std::ostream& os) { os << statsJson(cfg, result).dump(2) << '\n'; })) {
    return kIo;
  }
  const bool ok = result.status == OptimizationStatus::Success ||
                  result.status == OptimizationStatus::MaxIterations;
  if (!ok) {
    err << "error: optimization failed with " << to_string(result.status);
    if (!result.message.empty()) err << ": " << result.message;
    err << '\n';
    return kOptimizer;
  }

  io::SaveOptions save;
  save.rotation_first_info = cfg.info_order == "wt";
  if (!cfg.output.empty() &&
      !writeFile(cfg.output, err, [&](std::ostream& os) { io::save_pose_graph(os, bundle, result.values, save); })) {
    return kIo;
  }
  if (!cfg.trajectory.empty() &&
      !writeFile(cfg.trajectory, err,
                 [&](std::ostream& os) { writeTrajectory(os, result.values, bundle.dimensionality); })) {
    return kIo;
  }
  return kOk;
}

int runInfo(const RunConfig& cfg, std::ostream& out) {
  const io::DatasetBundle bundle = load(cfg);
  const double cost = totalCost(bundle.graph, bundle.initials);
  std::ostringstream os;
  os << bundle.vertex_count << " vertices, " << bundle.edge_count << " edges";
  if (bundle.prior_count > 0) os << " + " << bundle.prior_count << (bundle.prior_count == 1 ? " prior" : " priors");
  os << ", " << io::to_string(bundle.dimensionality) << '\n';
  if (bundle.auto_prior_index) os << "gauge anchored by an automatic prior\n";
  if (bundle.skipped_records > 0) os << bundle.skipped_records << " unknown records skipped\n";
  os << "initial cost " << fmt(cost) << '\n';
  out << os.str();
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Factor-graph pose-graph optimizer", "fgopt"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* opt = app.add_subcommand("optimize", "Optimize a pose graph");
  auto* info = app.add_subcommand("info", "Summarize a pose graph without optimizing");
  auto* gen = app.add_subcommand("generate", "Write a synthetic benchmark-sized pose graph");

  for (auto* sub : {opt, info}) {
    sub->add_option("--input,-i", cfg.input, "Input pose-graph file")->required();
    sub->add_flag("--no-auto-prior", cfg.no_auto_prior, "Do not anchor the gauge automatically");
    sub->add_option("--info-order", cfg.info_order, "3D information order in files: tw or wt")
        ->check(CLI::IsMember({"tw", "wt"}));
  }
  opt->add_option("--output,-o", cfg.output, "Optimized pose-graph file");
  opt->add_option("--algorithm", cfg.algorithm)->check(CLI::IsMember({"gn", "lm"}));
  opt->add_option("--solver", cfg.solver)->check(CLI::IsMember({"cholesky", "pcg"}));
  opt->add_option("--max-iters", cfg.max_iters)->check(CLI::Range(1, 1000000));
  opt->add_option("--fixed-iters", cfg.fixed_iters,
                  "Run exactly N accepted iterations with convergence tests off")
      ->check(CLI::Range(1, 1000000));
  opt->add_option("--kernel", cfg.kernel)->check(CLI::IsMember({"none", "huber", "cauchy"}));
  opt->add_option("--kernel-param", cfg.kernel_param, "Kernel width (default 1.345 huber, 1 cauchy)")
      ->check(CLI::PositiveNumber);
  opt->add_option("--stats", cfg.stats, "Per-iteration statistics (JSON)");
  opt->add_option("--trajectory", cfg.trajectory, "Optimized poses as CSV");
  opt->add_flag("--verbose,-v", cfg.verbose);

  std::string kind = "planar";
  io::SyntheticSpec spec;
  bool seed_set = false;
  gen->add_option("--kind", kind)->check(CLI::IsMember({"planar", "spatial"}));
  gen->add_option("--output,-o", cfg.output)->required();
  gen->add_option("--seed", spec.seed)->each([&](const std::string&) { seed_set = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (opt->parsed()) return runOptimize(cfg, out, err);
    if (info->parsed()) return runInfo(cfg, out);

    const std::uint64_t seed = spec.seed;
    spec = kind == "spatial" ? io::SyntheticSpec::spatialBenchmark() : io::SyntheticSpec::planarBenchmark();
    if (seed_set) spec.seed = seed;
    const bool ok = writeFile(cfg.output, err, [&](std::ostream& os) {
      kind == "spatial" ? io::writeSyntheticSpatial(os, spec) : io::writeSyntheticPlanar(os, spec);
    });
    if (!ok) return kIo;
    out << "wrote " << spec.vertices << " vertices, " << spec.edges << " edges to " << cfg.output << '\n';
    return kOk;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kOptimizer;
  }
}

}  // namespace fgraph::cli
