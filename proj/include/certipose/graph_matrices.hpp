#ifndef CERTIPOSE_GRAPH_MATRICES_HPP
#define CERTIPOSE_GRAPH_MATRICES_HPP

#include <complex>

#include <Eigen/Core>

#include "certipose/pose_graph.hpp"

namespace certipose {

// Incidence matrix of the directed graph: row k for edge (i,j) carries -1 at
// column i and +1 at column j. Rows follow the graph edge order.
Eigen::MatrixXd incidence_matrix(const ValidatedPoseGraph& graph);

// Incidence matrix with the column of node 0 removed. Full column rank n-1
// for connected graphs.
Eigen::MatrixXd anchored_incidence(const ValidatedPoseGraph& graph);

// Full real pose graph matrix (4n x 4n), assembled from the stacked factor
// [Abar Dbar; 0 Ubar]. Symmetric PSD with at least two zero eigenvalues.
Eigen::MatrixXd build_real_matrix(const ValidatedPoseGraph& graph);

// Deletes the first two rows/columns (position of node 0) from the full
// matrix, yielding the (4n-2) x (4n-2) anchored matrix.
Eigen::MatrixXd anchor(const Eigen::MatrixXd& full);

// Complex incidence matrix of the unit gain graph: row k for edge (i,j) has
// -e^{j theta_ij} at column i and +1 at column j.
Eigen::MatrixXcd unit_gain_incidence(const ValidatedPoseGraph& graph);

// The three factors of the complex anchored pose graph matrix:
// W = [A Dt; 0 Ut]^* [A Dt; 0 Ut].
struct ComplexFactors {
  Eigen::MatrixXd anchored_incidence;  // m x (n-1)
  Eigen::MatrixXcd translation;        // m x n, -delta at the tail column
  Eigen::MatrixXcd unit_gain;          // m x n
};
ComplexFactors complex_factors(const ValidatedPoseGraph& graph);

// Hermitian PSD (2n-1) x (2n-1) complex anchored pose graph matrix. Built
// twice, through the 2x2 block map of the anchored real matrix and through
// the complex factorization; a disagreement beyond 1e-12 relative raises
// InternalError.
Eigen::MatrixXcd build_complex_matrix(const ValidatedPoseGraph& graph);

// Pairwise map (a, b) -> a + jb. Inverse of realify.
Eigen::VectorXcd complexify(const Eigen::VectorXd& v);
Eigen::VectorXd realify(const Eigen::VectorXcd& v);

// Maps a 2x2 block [a -b; b a] to a + jb.
inline std::complex<double> block_to_complex(const Eigen::Matrix2d& block) {
  return {block(0, 0), block(1, 0)};
}

}  // namespace certipose

#endif
