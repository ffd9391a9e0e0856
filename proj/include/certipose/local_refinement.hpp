#ifndef CERTIPOSE_LOCAL_REFINEMENT_HPP
#define CERTIPOSE_LOCAL_REFINEMENT_HPP

#include <vector>

#include <Eigen/Core>

#include "certipose/pose_graph.hpp"

namespace certipose {

struct RefineOptions {
  int max_iter{200};
  double grad_tol{1e-8};
  double step_tol{1e-10};
  double lm_mu0_scale{1e-6};
};

struct RefinementResult {
  PoseAssignment poses;
  double final_cost{0.0};
  int iterations{0};
  bool converged{false};
  double step_norm_final{0.0};
  double gradient_norm{0.0};
};

// Stacked residuals of the quadratic cost (4 per edge: translation pair,
// rotation pair) and optionally the analytic Jacobian with respect to the
// free variables (x, y, theta) of nodes 1..n-1; node 0 carries the gauge
// and is held fixed.
void evaluate_residuals(const ValidatedPoseGraph& graph,
                        const PoseAssignment& assignment,
                        Eigen::VectorXd* residuals,
                        Eigen::MatrixXd* jacobian = nullptr);

// Levenberg-damped Gauss-Newton on the pose graph cost from an arbitrary
// initial guess. Node 0 keeps its initial pose.
RefinementResult gauss_newton(const ValidatedPoseGraph& graph,
                              const PoseAssignment& initial,
                              const RefineOptions& opts = {});

struct RotationInitResult {
  PoseAssignment assignment;
  // Nodes whose eigenvector entry was numerically zero and fell back to
  // phase zero.
  std::vector<int> fallback_nodes;
};

// Rotation-first spectral initializer: top eigenvector of the Hermitian
// rotation-connection matrix gives the rotations, then positions follow
// from a linear least-squares solve with rotations held fixed.
RotationInitResult rotation_first_init(const ValidatedPoseGraph& graph);

}  // namespace certipose

#endif
