#ifndef CERTIPOSE_SDP_RELAXATION_HPP
#define CERTIPOSE_SDP_RELAXATION_HPP

#include <utility>

#include <Eigen/Core>

#include "certipose/dual_certifier.hpp"

namespace certipose {

struct RelaxationOptions {
  double rho{1.0};
  int max_iter{400000};
  // Residual stop: primal and dual residuals <= eps_residual * scale.
  double eps_residual{1e-10};
  double rank_tol{1e-4};
};

// Solution of min Tr(W X) s.t. X >= 0, X_ii = 1 on rotation rows.
struct RelaxationSolution {
  Eigen::MatrixXcd x;
  double value{0.0};  // Tr(W X)
  int rank_estimate{0};
  double primal_residual{0.0};
  double dual_residual{0.0};
  double gap{0.0};  // |Tr(W (X - Z))| across the ADMM splitting
  int iterations{0};
  bool converged{true};
};

// ADMM splitting between the pinned-diagonal affine set and the PSD cone.
RelaxationSolution solve_sdp_relaxation(const Eigen::MatrixXcd& w,
                                        const RelaxationOptions& opts = {});

// Top eigenpair of X scaled into a candidate estimate; exact when the
// second eigenvalue is below tol * mu_top (then X is numerically rank one
// and the relaxation solved the original problem).
std::pair<PoseEstimate, bool> rank_one_extract(const RelaxationSolution& sol,
                                               double tol = 1e-4);

}  // namespace certipose

#endif
