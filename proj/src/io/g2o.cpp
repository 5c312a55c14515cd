#include "fgraph/io/g2o.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fgraph/errors.hpp"
#include "fgraph/factors.hpp"
#include "fgraph/lie.hpp"
#include "fgraph/loss.hpp"

namespace fgraph::io {

std::string_view to_string(Dimensionality d) {
  switch (d) {
    case Dimensionality::Planar:
      return "2D";
    case Dimensionality::Spatial:
      return "3D";
    case Dimensionality::None:
      break;
  }
  return "none";
}

namespace {

constexpr double kQuaternionTolerance = 1e-3;

// Swaps the translation and rotation halves of a 6x6 matrix.
Eigen::MatrixXd swapHalves(const Eigen::MatrixXd& m) {
  Eigen::PermutationMatrix<6> p;
  p.indices() << 3, 4, 5, 0, 1, 2;
  return p * m * p.transpose();
}

Eigen::MatrixXd upperToSymmetric(const std::vector<double>& v, int n) {
  Eigen::MatrixXd m(n, n);
  std::size_t k = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = r; c < n; ++c) m(r, c) = m(c, r) = v[k++];
  }
  return m;
}

class LineParser {
 public:
  LineParser(std::size_t line, std::vector<std::string_view> tokens)
      : line_(line), tokens_(std::move(tokens)) {}

  void expectFields(std::size_t n) const {
    if (tokens_.size() != n + 1) {
      throw ParseError(line_, std::string(tokens_[0]) + " expects " + std::to_string(n) +
                                  " fields, found " + std::to_string(tokens_.size() - 1));
    }
  }

  std::uint64_t id() {
    const std::string_view t = next();
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      throw ParseError(line_, "invalid vertex id '" + std::string(t) + "'");
    }
    return v;
  }

  double number() {
    const std::string_view t = next();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
      throw ParseError(line_, "invalid number '" + std::string(t) + "'");
    }
    return v;
  }

  std::vector<double> numbers(std::size_t n) {
    std::vector<double> out(n);
    for (double& v : out) v = number();
    return out;
  }

  Eigen::Vector3d vector3() {
    const double x = number(), y = number(), z = number();
    return {x, y, z};
  }

  Rot3 quaternion() {
    const double qx = number(), qy = number(), qz = number(), qw = number();
    const double norm = std::sqrt(qx * qx + qy * qy + qz * qz + qw * qw);
    if (std::abs(norm - 1.0) > kQuaternionTolerance) {
      throw ParseError(line_, "quaternion norm " + std::to_string(norm) + " is not 1");
    }
    return Rot3(qw, qx, qy, qz);
  }

  Eigen::MatrixXd information(int n) {
    const auto v = numbers(static_cast<std::size_t>(n * (n + 1) / 2));
    return upperToSymmetric(v, n);
  }

  std::size_t line() const { return line_; }

 private:
  std::string_view next() { return tokens_[pos_++]; }

  std::size_t line_;
  std::vector<std::string_view> tokens_;
  std::size_t pos_ = 1;
};

std::vector<std::string_view> tokenize(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::shared_ptr<const LossFunction> informationLoss(const Eigen::MatrixXd& info, std::size_t line) {
  try {
    return LossFunction::information(info);
  } catch (const ContractViolation&) {
    throw ParseError(line, "information matrix is not positive definite");
  }
}

struct Reference {
  std::size_t line;
  std::uint64_t id;
};

}  // namespace

DatasetBundle load_pose_graph(std::istream& in, const LoadOptions& options) {
  DatasetBundle bundle;
  std::vector<Reference> references;
  std::string text;
  std::size_t line_no = 0;

  auto setDimensionality = [&](Dimensionality d, std::size_t line) {
    if (bundle.dimensionality == Dimensionality::None) {
      bundle.dimensionality = d;
    } else if (bundle.dimensionality != d) {
      throw ParseError(line, "file mixes 2D and 3D records");
    }
  };
  auto infoFromFile = [&](Eigen::MatrixXd info) {
    return options.rotation_first_info ? swapHalves(info) : info;
  };

  while (std::getline(in, text)) {
    ++line_no;
    auto tokens = tokenize(text);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    const std::string tag(tokens[0]);
    LineParser p(line_no, std::move(tokens));

    if (tag == "VERTEX_SE2") {
      p.expectFields(4);
      setDimensionality(Dimensionality::Planar, line_no);
      const auto id = p.id();
      const double x = p.number(), y = p.number(), th = p.number();
      if (bundle.initials.exists(key('x', id))) {
        throw ParseError(line_no, "vertex " + std::to_string(id) + " defined twice");
      }
      bundle.initials.add(key('x', id), Pose2(x, y, th));
      ++bundle.vertex_count;
    } else if (tag == "VERTEX_SE3:QUAT") {
      p.expectFields(8);
      setDimensionality(Dimensionality::Spatial, line_no);
      const auto id = p.id();
      const Eigen::Vector3d t = p.vector3();
      const Rot3 r = p.quaternion();
      if (bundle.initials.exists(key('x', id))) {
        throw ParseError(line_no, "vertex " + std::to_string(id) + " defined twice");
      }
      bundle.initials.add(key('x', id), Pose3(r, t));
      ++bundle.vertex_count;
    } else if (tag == "EDGE_SE2") {
      p.expectFields(11);
      setDimensionality(Dimensionality::Planar, line_no);
      const auto i = p.id(), j = p.id();
      if (i == j) throw ParseError(line_no, "edge connects vertex " + std::to_string(i) + " to itself");
      const double dx = p.number(), dy = p.number(), dth = p.number();
      auto loss = informationLoss(p.information(3), line_no);
      bundle.graph.emplace<BetweenFactor<Pose2>>(key('x', i), key('x', j), Pose2(dx, dy, dth),
                                                 std::move(loss));
      references.push_back({line_no, i});
      references.push_back({line_no, j});
      ++bundle.edge_count;
    } else if (tag == "EDGE_SE3:QUAT") {
      p.expectFields(30);
      setDimensionality(Dimensionality::Spatial, line_no);
      const auto i = p.id(), j = p.id();
      if (i == j) throw ParseError(line_no, "edge connects vertex " + std::to_string(i) + " to itself");
      const Eigen::Vector3d t = p.vector3();
      const Rot3 r = p.quaternion();
      auto loss = informationLoss(infoFromFile(p.information(6)), line_no);
      bundle.graph.emplace<BetweenFactor<Pose3>>(key('x', i), key('x', j), Pose3(r, t),
                                                 std::move(loss));
      references.push_back({line_no, i});
      references.push_back({line_no, j});
      ++bundle.edge_count;
    } else if (tag == "EDGE_PRIOR_SE2") {
      p.expectFields(10);
      setDimensionality(Dimensionality::Planar, line_no);
      const auto i = p.id();
      const double x = p.number(), y = p.number(), th = p.number();
      auto loss = informationLoss(p.information(3), line_no);
      bundle.graph.emplace<PriorFactor<Pose2>>(key('x', i), Pose2(x, y, th), std::move(loss));
      references.push_back({line_no, i});
      ++bundle.prior_count;
    } else if (tag == "EDGE_PRIOR_SE3:QUAT") {
      p.expectFields(29);
      setDimensionality(Dimensionality::Spatial, line_no);
      const auto i = p.id();
      const Eigen::Vector3d t = p.vector3();
      const Rot3 r = p.quaternion();
      auto loss = informationLoss(infoFromFile(p.information(6)), line_no);
      bundle.graph.emplace<PriorFactor<Pose3>>(key('x', i), Pose3(r, t), std::move(loss));
      references.push_back({line_no, i});
      ++bundle.prior_count;
    } else {
      ++bundle.skipped_records;
    }
  }
  if (in.bad()) throw IoError("read error");

  if (bundle.vertex_count == 0 && bundle.graph.empty()) {
    throw ParseError(0, "no pose records in input");
  }
  for (const auto& ref : references) {
    if (!bundle.initials.exists(key('x', ref.id))) {
      throw ReferenceError(ref.line, "unknown vertex " + std::to_string(ref.id));
    }
  }

  if (options.auto_prior && bundle.prior_count == 0 && bundle.vertex_count > 0) {
    const Key anchor = bundle.initials.begin()->first;
    const Value& v = bundle.initials.at(anchor);
    if (const Pose2* p2 = v.try_get<Pose2>()) {
      bundle.graph.emplace<PriorFactor<Pose2>>(anchor, *p2);
    } else {
      bundle.graph.emplace<PriorFactor<Pose3>>(anchor, v.get<Pose3>());
    }
    bundle.auto_prior_index = bundle.graph.size() - 1;
  }
  return bundle;
}

DatasetBundle load_pose_graph(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return load_pose_graph(in, options);
}

// ---------------------------------------------------------------- writing

namespace {

class Writer {
 public:
  Writer(std::ostream& out, const SaveOptions& options) : out_(out), options_(options) {}

  Writer& word(std::string_view s) {
    out_ << s;
    return *this;
  }
  Writer& id(const Key& k) {
    if (k.symbol != 'x') throw ContractViolation("only 'x' keys can be saved, got " + k.str());
    out_ << ' ' << k.index;
    return *this;
  }
  Writer& num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " %.17g", v == 0.0 ? 0.0 : v);  // no "-0"
    out_ << buf;
    return *this;
  }
  Writer& pose(const Pose2& p) { return num(p.x()).num(p.y()).num(p.theta()); }
  Writer& pose(const Pose3& p) {
    const auto& q = p.rotation().quaternion();
    const auto& t = p.translation();
    return num(t.x()).num(t.y()).num(t.z()).num(q.x()).num(q.y()).num(q.z()).num(q.w());
  }
  Writer& info(const std::shared_ptr<const LossFunction>& loss, int n) {
    Eigen::MatrixXd m =
        loss ? loss->informationMatrix() : Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n));
    if (n == 6 && options_.rotation_first_info) m = swapHalves(m);
    for (int r = 0; r < n; ++r) {
      for (int c = r; c < n; ++c) num(m(r, c));
    }
    return *this;
  }
  void end() { out_ << '\n'; }

 private:
  std::ostream& out_;
  const SaveOptions& options_;
};

void saveFactors(std::ostream& out, const FactorGraph& graph, const Variables& values,
                 const SaveOptions& options, std::optional<std::size_t> skip) {
  bool planar = false, spatial = false;
  for (const auto& [k, v] : values) {
    planar |= v.holds<Pose2>();
    spatial |= v.holds<Pose3>();
    if (!v.holds<Pose2>() && !v.holds<Pose3>()) {
      throw ContractViolation("variable " + k.str() + " is not a Pose2 or Pose3");
    }
  }
  if (planar && spatial) throw ContractViolation("cannot save a mix of 2D and 3D poses");

  Writer w(out, options);
  for (const auto& [k, v] : values) {
    if (const Pose2* p = v.try_get<Pose2>()) {
      w.word("VERTEX_SE2").id(k).pose(*p).end();
    } else {
      w.word("VERTEX_SE3:QUAT").id(k).pose(v.get<Pose3>()).end();
    }
  }
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (skip && *skip == i) continue;
    const Factor& f = *graph[i];
    if (auto* b = dynamic_cast<const BetweenFactor<Pose2>*>(&f)) {
      if (spatial) throw ContractViolation("cannot save a mix of 2D and 3D factors");
      w.word("EDGE_SE2").id(f.keys()[0]).id(f.keys()[1]).pose(b->measured()).info(f.loss(), 3).end();
    } else if (auto* b3 = dynamic_cast<const BetweenFactor<Pose3>*>(&f)) {
      if (planar) throw ContractViolation("cannot save a mix of 2D and 3D factors");
      w.word("EDGE_SE3:QUAT").id(f.keys()[0]).id(f.keys()[1]).pose(b3->measured()).info(f.loss(), 6).end();
    } else if (auto* p = dynamic_cast<const PriorFactor<Pose2>*>(&f)) {
      if (spatial) throw ContractViolation("cannot save a mix of 2D and 3D factors");
      w.word("EDGE_PRIOR_SE2").id(f.keys()[0]).pose(p->prior()).info(f.loss(), 3).end();
    } else if (auto* p3 = dynamic_cast<const PriorFactor<Pose3>*>(&f)) {
      if (planar) throw ContractViolation("cannot save a mix of 2D and 3D factors");
      w.word("EDGE_PRIOR_SE3:QUAT").id(f.keys()[0]).pose(p3->prior()).info(f.loss(), 6).end();
    } else {
      throw ContractViolation("factor " + std::to_string(i) + " has no file representation");
    }
  }
}

}  // namespace

void save_pose_graph(std::ostream& out, const FactorGraph& graph, const Variables& values,
                     const SaveOptions& options) {
  saveFactors(out, graph, values, options, std::nullopt);
}

void save_pose_graph(std::ostream& out, const DatasetBundle& bundle, const Variables& values,
                     const SaveOptions& options) {
  saveFactors(out, bundle.graph, values, options, bundle.auto_prior_index);
}

}  // namespace fgraph::io
