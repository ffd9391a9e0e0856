#ifndef CERTIPOSE_DUAL_CERTIFIER_HPP
#define CERTIPOSE_DUAL_CERTIFIER_HPP

#include <Eigen/Core>

#include "certipose/hermitian_eig.hpp"
#include "certipose/pose_graph.hpp"

namespace certipose {

struct SolverOptions {
  double eps_dual{1e-8};
  // Barrier start: t0 = t0_scale * trace(W) / n.
  double t0_scale{0.1};
  int max_newton{50};
  int max_outer{60};
  double zero_threshold_scale{1e-7};
  // Rotate recovered estimates so the anchor rotation is the identity.
  bool gauge_fix{false};
};

// Solution of the dual problem max sum(lambda) s.t. W(lambda) >= 0.
struct DualSolution {
  Eigen::VectorXd lambda;
  double dual_value{0.0};
  SpectrumReport penalized_spectrum;  // spectrum of W(lambda*)
  int iterations{0};                  // Newton steps across the barrier path
  double barrier_final{0.0};
  bool converged{true};
  // sum(lambda) never decreased across outer barrier iterations.
  bool monotone{true};
};

struct SzepClassification {
  bool szep{false};
  int zero_count{0};
  double threshold{0.0};
  double spectral_gap{0.0};
};

// Complex estimate [anchored positions; unit-modulus rotations] plus its
// realization as planar poses with node 0 anchored at the origin.
struct PoseEstimate {
  Eigen::VectorXcd anchored_positions;  // n-1
  Eigen::VectorXcd rotations;           // n
  PoseAssignment realized;

  Eigen::VectorXcd stacked() const;
};

// Builds the realized poses from the complex parts (node 0 at the origin).
PoseEstimate make_estimate(const Eigen::VectorXcd& stacked);

enum class CertificateStatus { Optimal, Unknown };

struct Certificate {
  CertificateStatus status{CertificateStatus::Unknown};
  bool szep{false};
  int zero_count{0};
  double primal_value{0.0};
  double dual_value{0.0};
  double gap{0.0};
  PoseEstimate estimate;
  DualSolution dual;
};

// Subtracts lambda_i from the n rotation diagonal entries of W.
Eigen::MatrixXcd penalized_matrix(const Eigen::MatrixXcd& w,
                                  const Eigen::VectorXd& lambda);

// Log-det barrier path following on the dual SDP. Requires W Hermitian PSD
// (NotPsdInputError otherwise); a singular W (tree or balanced graph) short
// circuits to lambda = 0, which is then optimal.
DualSolution solve_dual(const Eigen::MatrixXcd& w,
                        const SolverOptions& opts = {});

// SZEP iff the penalized matrix has exactly one (near-)zero eigenvalue.
// Throws NoZeroEigenvalueError when it has none, which signals a failed
// dual solve.
SzepClassification classify_szep(const DualSolution& sol,
                                 double threshold_scale = 1e-7);

// Scales the zero-eigenvector of the penalized matrix into the primal
// optimal estimate. Valid only under SZEP; the last n entries must share a
// common modulus (InconsistentModulusError otherwise).
PoseEstimate recover_optimal(const DualSolution& sol, bool gauge_fix = false);

// Full pipeline: build the complex matrix, solve the dual, classify, and
// recover either the certified optimum or the null-space fallback estimate.
Certificate certify(const ValidatedPoseGraph& graph,
                    const SolverOptions& opts = {});

}  // namespace certipose

#endif
