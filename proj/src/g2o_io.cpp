#include "certipose/g2o_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace certipose {

G2oDocument parse_g2o_document(const std::string& text,
                               const ParseOptions& opts) {
  G2oDocument doc;
  std::istringstream stream(text);
  std::string line;
  std::set<int> seen_ids;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag)) continue;  // blank line
    if (tag[0] == '#') continue;

    if (tag == "VERTEX_SE2") {
      G2oVertex v;
      if (!(fields >> v.id >> v.x >> v.y >> v.theta))
        throw ParseError(line_no, "malformed VERTEX_SE2");
      if (!seen_ids.insert(v.id).second)
        throw DuplicateVertexError("line " + std::to_string(line_no) +
                                   ": duplicate vertex id " +
                                   std::to_string(v.id));
      doc.vertices.push_back(v);
    } else if (tag == "EDGE_SE2") {
      G2oEdge e;
      if (!(fields >> e.i >> e.j >> e.dx >> e.dy >> e.dtheta >> e.info[0] >>
            e.info[1] >> e.info[2] >> e.info[3] >> e.info[4] >> e.info[5]))
        throw ParseError(line_no, "malformed EDGE_SE2");
      doc.edges.push_back(e);
    } else {
      if (opts.strict)
        throw UnknownTagError("line " + std::to_string(line_no) +
                              ": unknown tag " + tag);
      // skipped; reported as a warning by parse_g2o
    }
  }
  return doc;
}

ParsedGraph parse_g2o(const std::string& text, const ParseOptions& opts) {
  ParsedGraph out;

  {
    // Re-scan for unknown tags to surface warnings in non-strict mode.
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
      ++line_no;
      std::istringstream fields(line);
      std::string tag;
      if (!(fields >> tag)) continue;
      if (tag[0] == '#' || tag == "VERTEX_SE2" || tag == "EDGE_SE2") continue;
      out.warnings.push_back("line " + std::to_string(line_no) +
                             ": skipped unknown tag " + tag);
    }
  }

  const G2oDocument doc = parse_g2o_document(text, opts);

  const std::array<double, 6> identity{1, 0, 0, 1, 0, 1};
  for (const auto& e : doc.edges) {
    bool is_identity = true;
    for (int k = 0; k < 6; ++k)
      if (std::abs(e.info[k] - identity[k]) > 1e-12) is_identity = false;
    if (!is_identity) {
      const std::string msg = "edge (" + std::to_string(e.i) + "," +
                              std::to_string(e.j) +
                              ") carries a non-identity information matrix; "
                              "the cost is unweighted";
      if (opts.strict) throw Error(msg);
      out.warnings.push_back(msg);
    }
  }

  // Dense 0-based ids in ascending order of the file ids.
  std::set<int> ids;
  for (const auto& v : doc.vertices) ids.insert(v.id);
  for (const auto& e : doc.edges) {
    ids.insert(e.i);
    ids.insert(e.j);
  }
  std::map<int, int> remap;
  for (int id : ids) {
    out.original_ids.push_back(id);
    remap[id] = static_cast<int>(remap.size());
  }

  out.graph.node_count = static_cast<int>(ids.size());
  for (const auto& e : doc.edges)
    out.graph.edges.emplace_back(remap.at(e.i), remap.at(e.j),
                                 Eigen::Vector2d(e.dx, e.dy), e.dtheta);

  if (doc.vertices.size() == ids.size()) {
    PoseAssignment initial;
    initial.poses.resize(out.graph.node_count);
    for (const auto& v : doc.vertices)
      initial.poses[remap.at(v.id)] = Pose2D(v.x, v.y, v.theta);
    out.initial = std::move(initial);
  }
  return out;
}

namespace {

std::string num(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.9g", v);
  return buffer;
}

}  // namespace

std::string write_g2o(const ValidatedPoseGraph& graph,
                      const PoseAssignment* poses) {
  const PoseAssignment tree =
      poses ? PoseAssignment{} : spanning_tree_solution(graph);
  const PoseAssignment& assignment = poses ? *poses : tree;
  if (assignment.size() != graph.node_count())
    throw LengthMismatchError("pose list does not match graph");

  std::ostringstream os;
  for (int i = 0; i < graph.node_count(); ++i) {
    const Pose2D& p = assignment.poses[i];
    os << "VERTEX_SE2 " << i << ' ' << num(p.position.x()) << ' '
       << num(p.position.y()) << ' ' << num(p.angle) << '\n';
  }
  for (const auto& e : graph.edges())
    os << "EDGE_SE2 " << e.tail << ' ' << e.head << ' ' << num(e.delta.x())
       << ' ' << num(e.delta.y()) << ' ' << num(e.angle) << " 1 0 0 1 0 1\n";
  return os.str();
}

}  // namespace certipose
