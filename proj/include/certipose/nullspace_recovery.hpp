#ifndef CERTIPOSE_NULLSPACE_RECOVERY_HPP
#define CERTIPOSE_NULLSPACE_RECOVERY_HPP

#include <Eigen/Core>

#include "certipose/dual_certifier.hpp"
#include "certipose/hermitian_eig.hpp"

namespace certipose {

// Search for a near-feasible estimate inside the null space of the
// penalized matrix: maximize sum_i real(V_i z) + imag(V_i z) subject to
// |V_i z|^2 <= 1 on the rotation rows.
struct NullSpaceProgram {
  Eigen::MatrixXcd basis;  // (2n-1) x q, orthonormal columns
  int node_count{0};       // constrained rows are n-1 .. 2n-2
  // The objective as printed sums over all rows; restricting it to the
  // constrained rotation rows is exposed for experimentation.
  bool objective_all_rows{true};
};

NullSpaceProgram make_nullspace_program(const Eigen::MatrixXcd& basis,
                                        bool objective_all_rows = true);

struct NullSpaceSolution {
  Eigen::VectorXcd z;
  double objective{0.0};
  double kkt_residual{0.0};
  int iterations{0};
};

// Log-barrier Newton over the 2q real coordinates of z, starting at z = 0.
// Throws UnboundedObjectiveError when the rotation-row restriction of the
// basis is column-rank deficient (the feasible set would be unbounded).
NullSpaceSolution solve_nullspace_program(const NullSpaceProgram& prog);

// Divides each rotation entry by its modulus; positions untouched.
PoseEstimate normalize_estimate(const Eigen::VectorXcd& x);

// Baseline estimate from one zero-eigenvector of the penalized matrix,
// rotation entries normalized component-wise and positions kept at
// eigenvector scale. Under SZEP the rotations coincide with the certified
// recovery; the positions do not, which is why this is a baseline and not
// a recovery method.
PoseEstimate eigenvector_heuristic(const SpectrumReport& penalized);

}  // namespace certipose

#endif
