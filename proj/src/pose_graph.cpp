#include "certipose/pose_graph.hpp"

#include <cmath>
#include <queue>

namespace certipose {

double wrap_angle(double a) {
  double w = std::fmod(a + M_PI, 2.0 * M_PI);
  if (w <= 0.0) w += 2.0 * M_PI;
  return w - M_PI;
}

Eigen::Matrix2d Pose2D::rotation() const {
  const double c = std::cos(angle), s = std::sin(angle);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

Eigen::Vector2d Pose2D::rotation_vector() const {
  return {std::cos(angle), std::sin(angle)};
}

Pose2D compose(const Pose2D& a, const Pose2D& b) {
  return Pose2D(a.position + a.rotation() * b.position, a.angle + b.angle);
}

Pose2D inverse(const Pose2D& p) {
  const Pose2D flipped(Eigen::Vector2d::Zero(), -p.angle);
  return Pose2D(-(flipped.rotation() * p.position), -p.angle);
}

Eigen::Matrix2d RelativeMeasurement::rotation() const {
  const double c = std::cos(angle), s = std::sin(angle);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

Eigen::Matrix2d RelativeMeasurement::d_matrix() const {
  Eigen::Matrix2d d;
  d << delta.x(), -delta.y(), delta.y(), delta.x();
  return d;
}

ValidatedPoseGraph validate_graph(const PoseGraph& graph) {
  const int n = graph.node_count;
  if (n <= 0) throw IndexOutOfRangeError("node_count must be positive");
  for (const auto& e : graph.edges) {
    if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n)
      throw IndexOutOfRangeError("edge (" + std::to_string(e.tail) + "," +
                                 std::to_string(e.head) +
                                 ") out of range for n=" + std::to_string(n));
    if (e.tail == e.head)
      throw IndexOutOfRangeError("self loop at node " + std::to_string(e.tail));
  }

  // Connectivity of the undirected support via BFS.
  std::vector<std::vector<int>> adjacency(n);
  for (const auto& e : graph.edges) {
    adjacency[e.tail].push_back(e.head);
    adjacency[e.head].push_back(e.tail);
  }
  std::vector<int> component(n, -1);
  int component_count = 0;
  for (int start = 0; start < n; ++start) {
    if (component[start] >= 0) continue;
    std::queue<int> queue;
    queue.push(start);
    component[start] = component_count;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      for (int v : adjacency[u]) {
        if (component[v] < 0) {
          component[v] = component_count;
          queue.push(v);
        }
      }
    }
    ++component_count;
  }
  if (component_count > 1) {
    std::vector<std::vector<int>> components(component_count);
    for (int i = 0; i < n; ++i) components[component[i]].push_back(i);
    throw DisconnectedGraphError(std::move(components));
  }
  return ValidatedPoseGraph(graph);
}

double evaluate_cost(const ValidatedPoseGraph& graph,
                     const PoseAssignment& assignment) {
  if (assignment.size() != graph.node_count())
    throw LengthMismatchError("assignment has " +
                              std::to_string(assignment.size()) +
                              " poses, graph has " +
                              std::to_string(graph.node_count()) + " nodes");
  double cost = 0.0;
  for (const auto& e : graph.edges()) {
    const Pose2D& pi = assignment.poses[e.tail];
    const Pose2D& pj = assignment.poses[e.head];
    const Eigen::Vector2d ri = pi.rotation_vector();
    const Eigen::Vector2d rj = pj.rotation_vector();
    cost += ((pj.position - pi.position) - e.d_matrix() * ri).squaredNorm();
    cost += (rj - e.rotation() * ri).squaredNorm();
  }
  return cost;
}

SpanningTree bfs_spanning_tree(const ValidatedPoseGraph& graph) {
  const int n = graph.node_count();
  // Incident edge indices per node, in edge-list order.
  std::vector<std::vector<int>> incident(n);
  for (int k = 0; k < graph.edge_count(); ++k) {
    incident[graph.edges()[k].tail].push_back(k);
    incident[graph.edges()[k].head].push_back(k);
  }
  SpanningTree tree;
  tree.parent_edge.assign(n, -1);
  tree.edge_in_tree.assign(graph.edge_count(), 0);
  std::vector<char> visited(n, 0);
  std::queue<int> queue;
  queue.push(0);
  visited[0] = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop();
    for (int k : incident[u]) {
      const auto& e = graph.edges()[k];
      const int v = (e.tail == u) ? e.head : e.tail;
      if (visited[v]) continue;
      visited[v] = 1;
      tree.parent_edge[v] = k;
      tree.edge_in_tree[k] = 1;
      queue.push(v);
    }
  }
  return tree;
}

namespace {

// Poses of all nodes in the root frame, propagated along the tree.
std::vector<Pose2D> tree_poses(const ValidatedPoseGraph& graph,
                               const SpanningTree& tree) {
  const int n = graph.node_count();
  std::vector<Pose2D> pose(n);
  std::vector<char> done(n, 0);
  done[0] = 1;
  // parent_edge encodes a tree order; settle nodes whose parents are done.
  bool progress = true;
  while (progress) {
    progress = false;
    for (int v = 1; v < n; ++v) {
      if (done[v]) continue;
      const auto& e = graph.edges()[tree.parent_edge[v]];
      const int parent = (e.tail == v) ? e.head : e.tail;
      if (!done[parent]) continue;
      if (e.tail == parent) {
        pose[v] = compose(pose[parent], e.as_pose());
      } else {
        pose[v] = compose(pose[parent], inverse(e.as_pose()));
      }
      done[v] = 1;
      progress = true;
    }
  }
  return pose;
}

}  // namespace

BalanceReport is_balanced(const ValidatedPoseGraph& graph, double tol) {
  const SpanningTree tree = bfs_spanning_tree(graph);
  const std::vector<Pose2D> pose = tree_poses(graph, tree);
  BalanceReport report;
  report.balanced = true;
  for (int k = 0; k < graph.edge_count(); ++k) {
    if (tree.edge_in_tree[k]) continue;
    const auto& e = graph.edges()[k];
    // Loop: tree path tail->head, then the chord traversed backwards.
    const Pose2D path = compose(inverse(pose[e.tail]), pose[e.head]);
    const Pose2D closure = compose(path, inverse(e.as_pose()));
    const double pos_res = closure.position.norm();
    const double ang_res = std::abs(closure.angle);
    report.worst_residual =
        std::max(report.worst_residual, std::max(pos_res, ang_res));
    if (pos_res > tol || ang_res > tol) report.balanced = false;
  }
  return report;
}

PoseAssignment spanning_tree_solution(const ValidatedPoseGraph& graph) {
  const SpanningTree tree = bfs_spanning_tree(graph);
  PoseAssignment assignment;
  assignment.poses = tree_poses(graph, tree);
  return assignment;
}

}  // namespace certipose
