#ifndef CERTIPOSE_G2O_IO_HPP
#define CERTIPOSE_G2O_IO_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "certipose/pose_graph.hpp"

namespace certipose {

struct G2oVertex {
  int id{0};
  double x{0.0}, y{0.0}, theta{0.0};
};

struct G2oEdge {
  int i{0}, j{0};
  double dx{0.0}, dy{0.0}, dtheta{0.0};
  // Upper triangle of the 3x3 information matrix: i11 i12 i13 i22 i23 i33.
  std::array<double, 6> info{1, 0, 0, 1, 0, 1};
};

struct G2oDocument {
  std::vector<G2oVertex> vertices;
  std::vector<G2oEdge> edges;
};

struct ParseOptions {
  // Error out on unknown tags and non-identity information matrices
  // instead of warning (the cost is unweighted).
  bool strict{false};
};

struct ParsedGraph {
  PoseGraph graph;
  // Present when every node has a VERTEX_SE2 line; ids remapped to the
  // dense 0-based order used by graph.
  std::optional<PoseAssignment> initial;
  std::vector<std::string> warnings;
  // original_ids[k] is the file id of internal node k.
  std::vector<int> original_ids;
};

G2oDocument parse_g2o_document(const std::string& text,
                               const ParseOptions& opts = {});

ParsedGraph parse_g2o(const std::string& text, const ParseOptions& opts = {});

// Vertices (given poses, or the spanning-tree solution) followed by edges
// with identity information, 9 significant digits.
std::string write_g2o(const ValidatedPoseGraph& graph,
                      const PoseAssignment* poses = nullptr);

}  // namespace certipose

#endif
