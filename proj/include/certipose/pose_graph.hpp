#ifndef CERTIPOSE_POSE_GRAPH_HPP
#define CERTIPOSE_POSE_GRAPH_HPP

#include <vector>

#include <Eigen/Core>

#include "certipose/errors.hpp"

namespace certipose {

// Wrap an angle to the canonical range (-pi, pi].
double wrap_angle(double a);

// A planar pose (p, theta). The angle is normalized to (-pi, pi] on
// construction and after every composition.
struct Pose2D {
  Eigen::Vector2d position{0.0, 0.0};
  double angle{0.0};

  Pose2D() = default;
  Pose2D(double x, double y, double theta)
      : position(x, y), angle(wrap_angle(theta)) {}
  Pose2D(const Eigen::Vector2d& p, double theta)
      : position(p), angle(wrap_angle(theta)) {}

  Eigen::Matrix2d rotation() const;
  // Unit vector [cos theta, sin theta].
  Eigen::Vector2d rotation_vector() const;
};

Pose2D compose(const Pose2D& a, const Pose2D& b);
Pose2D inverse(const Pose2D& p);

// Relative pose measurement attached to a directed edge (tail -> head).
struct RelativeMeasurement {
  int tail{0};
  int head{0};
  Eigen::Vector2d delta{0.0, 0.0};
  double angle{0.0};

  RelativeMeasurement() = default;
  RelativeMeasurement(int tail_, int head_, const Eigen::Vector2d& delta_,
                      double angle_)
      : tail(tail_), head(head_), delta(delta_), angle(wrap_angle(angle_)) {}

  Eigen::Matrix2d rotation() const;
  // D = [dx -dy; dy dx], the alpha-SO(2) representative of delta.
  Eigen::Matrix2d d_matrix() const;
  Pose2D as_pose() const { return Pose2D(delta, angle); }
};

struct PoseGraph {
  int node_count{0};
  std::vector<RelativeMeasurement> edges;
};

struct PoseAssignment {
  std::vector<Pose2D> poses;

  int size() const { return static_cast<int>(poses.size()); }
};

// A pose graph that passed validation (index ranges and connectivity).
// Only obtainable through validate_graph.
class ValidatedPoseGraph {
 public:
  const PoseGraph& graph() const { return graph_; }
  int node_count() const { return graph_.node_count; }
  int edge_count() const { return static_cast<int>(graph_.edges.size()); }
  const std::vector<RelativeMeasurement>& edges() const { return graph_.edges; }

  friend ValidatedPoseGraph validate_graph(const PoseGraph& graph);

 private:
  explicit ValidatedPoseGraph(PoseGraph graph) : graph_(std::move(graph)) {}
  PoseGraph graph_;
};

// Checks index ranges and connectivity of the undirected support.
// Throws IndexOutOfRangeError or DisconnectedGraphError (with the
// connected components) on failure.
ValidatedPoseGraph validate_graph(const PoseGraph& graph);

// Quadratic mismatch cost:
//   sum over edges of |(p_j - p_i) - D_ij r_i|^2 + |r_j - R_ij r_i|^2.
double evaluate_cost(const ValidatedPoseGraph& graph,
                     const PoseAssignment& assignment);

struct BalanceReport {
  bool balanced{false};
  // Largest fundamental-cycle closure residual observed, as
  // max(position norm, |angle|) over cycles.
  double worst_residual{0.0};
};

// A graph is balanced when the measurements compose to the identity along
// every cycle. Checked on the fundamental cycles of a BFS spanning tree.
BalanceReport is_balanced(const ValidatedPoseGraph& graph, double tol = 1e-6);

// Propagates measurements along a BFS spanning tree rooted at node 0
// (placed at the origin). Zero cost on trees and balanced graphs.
PoseAssignment spanning_tree_solution(const ValidatedPoseGraph& graph);

// BFS spanning tree bookkeeping shared by is_balanced and the tree solution.
struct SpanningTree {
  std::vector<int> parent_edge;   // per node; -1 at the root
  std::vector<char> edge_in_tree; // per edge
};
SpanningTree bfs_spanning_tree(const ValidatedPoseGraph& graph);

}  // namespace certipose

#endif
