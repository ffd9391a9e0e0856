#include "certipose/graph_matrices.hpp"

#include <cmath>

namespace certipose {

using std::complex;

Eigen::MatrixXd incidence_matrix(const ValidatedPoseGraph& graph) {
  Eigen::MatrixXd a =
      Eigen::MatrixXd::Zero(graph.edge_count(), graph.node_count());
  for (int k = 0; k < graph.edge_count(); ++k) {
    a(k, graph.edges()[k].tail) = -1.0;
    a(k, graph.edges()[k].head) = +1.0;
  }
  return a;
}

Eigen::MatrixXd anchored_incidence(const ValidatedPoseGraph& graph) {
  return incidence_matrix(graph).rightCols(graph.node_count() - 1);
}

Eigen::MatrixXd build_real_matrix(const ValidatedPoseGraph& graph) {
  const int n = graph.node_count();
  const int m = graph.edge_count();
  // Stacked factor [Abar Dbar; 0 Ubar] of the quadratic form.
  Eigen::MatrixXd factor = Eigen::MatrixXd::Zero(4 * m, 4 * n);
  for (int k = 0; k < m; ++k) {
    const auto& e = graph.edges()[k];
    factor.block<2, 2>(2 * k, 2 * e.tail) = -Eigen::Matrix2d::Identity();
    factor.block<2, 2>(2 * k, 2 * e.head) = Eigen::Matrix2d::Identity();
    factor.block<2, 2>(2 * k, 2 * n + 2 * e.tail) = -e.d_matrix();
    factor.block<2, 2>(2 * m + 2 * k, 2 * n + 2 * e.tail) = -e.rotation();
    factor.block<2, 2>(2 * m + 2 * k, 2 * n + 2 * e.head) =
        Eigen::Matrix2d::Identity();
  }
  Eigen::MatrixXd w = factor.transpose() * factor;
  return 0.5 * (w + w.transpose());
}

Eigen::MatrixXd anchor(const Eigen::MatrixXd& full) {
  if (full.rows() != full.cols() || full.rows() < 4 || full.rows() % 4 != 0)
    throw DimensionMismatchError("full pose graph matrix must be 4n x 4n, got " +
                                 std::to_string(full.rows()) + "x" +
                                 std::to_string(full.cols()));
  const Eigen::Index d = full.rows() - 2;
  return full.bottomRightCorner(d, d);
}

Eigen::MatrixXcd unit_gain_incidence(const ValidatedPoseGraph& graph) {
  Eigen::MatrixXcd u =
      Eigen::MatrixXcd::Zero(graph.edge_count(), graph.node_count());
  for (int k = 0; k < graph.edge_count(); ++k) {
    const auto& e = graph.edges()[k];
    u(k, e.tail) = -std::polar(1.0, e.angle);
    u(k, e.head) = 1.0;
  }
  return u;
}

ComplexFactors complex_factors(const ValidatedPoseGraph& graph) {
  ComplexFactors f;
  f.anchored_incidence = anchored_incidence(graph);
  f.unit_gain = unit_gain_incidence(graph);
  f.translation =
      Eigen::MatrixXcd::Zero(graph.edge_count(), graph.node_count());
  for (int k = 0; k < graph.edge_count(); ++k) {
    const auto& e = graph.edges()[k];
    f.translation(k, e.tail) = -complex<double>(e.delta.x(), e.delta.y());
  }
  return f;
}

Eigen::MatrixXcd build_complex_matrix(const ValidatedPoseGraph& graph) {
  const int n = graph.node_count();
  const int m = graph.edge_count();
  const int d = 2 * n - 1;

  // Route 1: element-for-block map of the anchored real matrix.
  const Eigen::MatrixXd real_anchored = anchor(build_real_matrix(graph));
  Eigen::MatrixXcd from_blocks(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      from_blocks(i, j) =
          block_to_complex(real_anchored.block<2, 2>(2 * i, 2 * j));

  // Route 2: factorization [A Dt; 0 Ut]^* [A Dt; 0 Ut].
  const ComplexFactors f = complex_factors(graph);
  Eigen::MatrixXcd factor = Eigen::MatrixXcd::Zero(2 * m, d);
  factor.topLeftCorner(m, n - 1) = f.anchored_incidence.cast<complex<double>>();
  factor.block(0, n - 1, m, n) = f.translation;
  factor.block(m, n - 1, m, n) = f.unit_gain;
  const Eigen::MatrixXcd from_factors = factor.adjoint() * factor;

  const double scale = 1.0 + from_blocks.cwiseAbs().maxCoeff();
  const double disagreement =
      (from_blocks - from_factors).cwiseAbs().maxCoeff();
  if (disagreement > 1e-12 * scale)
    throw InternalError(
        "complex pose graph matrix: block map and factorization disagree by " +
        std::to_string(disagreement));

  Eigen::MatrixXcd w = from_blocks;
  w = 0.5 * (w + Eigen::MatrixXcd(w.adjoint()));
  return w;
}

Eigen::VectorXcd complexify(const Eigen::VectorXd& v) {
  if (v.size() % 2 != 0)
    throw OddLengthError("complexify needs an even-length vector, got " +
                         std::to_string(v.size()));
  Eigen::VectorXcd out(v.size() / 2);
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out(i) = complex<double>(v(2 * i), v(2 * i + 1));
  return out;
}

Eigen::VectorXd realify(const Eigen::VectorXcd& v) {
  Eigen::VectorXd out(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out(2 * i) = v(i).real();
    out(2 * i + 1) = v(i).imag();
  }
  return out;
}

}  // namespace certipose
