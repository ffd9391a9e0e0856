#include "certipose/nullspace_recovery.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace certipose {

namespace {

// Real 2 x 2q map u = [Re z; Im z] -> [Re(V_i z); Im(V_i z)].
Eigen::MatrixXd row_map(const Eigen::MatrixXcd& basis, Eigen::Index row) {
  const Eigen::Index q = basis.cols();
  Eigen::MatrixXd a(2, 2 * q);
  a.block(0, 0, 1, q) = basis.row(row).real();
  a.block(0, q, 1, q) = -basis.row(row).imag();
  a.block(1, 0, 1, q) = basis.row(row).imag();
  a.block(1, q, 1, q) = basis.row(row).real();
  return a;
}

}  // namespace

NullSpaceProgram make_nullspace_program(const Eigen::MatrixXcd& basis,
                                        bool objective_all_rows) {
  NullSpaceProgram prog;
  prog.basis = basis;
  prog.node_count = static_cast<int>((basis.rows() + 1) / 2);
  prog.objective_all_rows = objective_all_rows;
  return prog;
}

NullSpaceSolution solve_nullspace_program(const NullSpaceProgram& prog) {
  const int n = prog.node_count;
  const Eigen::Index d = prog.basis.rows();
  const Eigen::Index q = prog.basis.cols();
  if (q < 1) throw Error("null-space basis is empty");
  if (d != 2 * n - 1)
    throw DimensionMismatchError("basis rows do not match node count");

  const Eigen::MatrixXcd rotation_rows = prog.basis.bottomRows(n);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rotation_rows);
  if (svd.singularValues().minCoeff() <= 1e-8)
    throw UnboundedObjectiveError(
        "rotation-row restriction of the basis is rank deficient; the "
        "feasible set is unbounded along a null direction");

  std::vector<Eigen::MatrixXd> constraints;
  constraints.reserve(n);
  for (Eigen::Index i = n - 1; i < d; ++i)
    constraints.push_back(row_map(prog.basis, i));

  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * q);
  const Eigen::Index first_objective_row = prog.objective_all_rows ? 0 : n - 1;
  for (Eigen::Index i = first_objective_row; i < d; ++i)
    c += row_map(prog.basis, i).colwise().sum();

  NullSpaceSolution sol;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * q);

  const auto barrier = [&](const Eigen::VectorXd& point, bool* feasible) {
    double value = 0.0;
    *feasible = true;
    for (const auto& a : constraints) {
      const double slack = 1.0 - (a * point).squaredNorm();
      if (slack <= 0.0) {
        *feasible = false;
        return 0.0;
      }
      value -= std::log(slack);
    }
    return value;
  };

  double s = 1.0;
  const double centering_factor = 10.0;
  Eigen::VectorXd grad(2 * q);
  for (int outer = 0; outer < 40; ++outer) {
    for (int inner = 0; inner < 80; ++inner) {
      grad = -s * c;
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(2 * q, 2 * q);
      for (const auto& a : constraints) {
        const Eigen::Vector2d w = a * u;
        const double slack = 1.0 - w.squaredNorm();
        const Eigen::VectorXd atw = a.transpose() * w;
        grad += 2.0 * atw / slack;
        hess += 2.0 * (a.transpose() * a) / slack +
                4.0 * (atw * atw.transpose()) / (slack * slack);
      }
      const Eigen::VectorXd step = hess.ldlt().solve(-grad);
      const double decrement = -grad.dot(step);
      if (decrement < 1e-18 * (1.0 + std::abs(s * c.dot(u)))) break;

      bool feasible = false;
      const double phi0 = -s * c.dot(u) + barrier(u, &feasible);
      double alpha = 1.0;
      bool moved = false;
      for (int halving = 0; halving < 70; ++halving) {
        const Eigen::VectorXd candidate = u + alpha * step;
        const double b = barrier(candidate, &feasible);
        if (feasible &&
            -s * c.dot(candidate) + b <= phi0 + 0.25 * alpha * grad.dot(step)) {
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
      u += alpha * step;
      ++sol.iterations;
    }
    // Suboptimality of the centered point is #constraints / s; stopping at
    // 1e-8 relative keeps the barrier well inside double precision.
    if (static_cast<double>(constraints.size()) / s <
        1e-8 * (1.0 + std::abs(c.dot(u))))
      break;
    s *= centering_factor;
  }

  sol.z = Eigen::VectorXcd(q);
  for (Eigen::Index k = 0; k < q; ++k)
    sol.z(k) = std::complex<double>(u(k), u(q + k));
  sol.objective = c.dot(u);
  sol.kkt_residual = grad.norm() / s;
  return sol;
}

PoseEstimate normalize_estimate(const Eigen::VectorXcd& x) {
  const int n = static_cast<int>((x.size() + 1) / 2);
  Eigen::VectorXcd out = x;
  for (int i = 0; i < n; ++i) {
    const double modulus = std::abs(out(n - 1 + i));
    if (modulus < 1e-12)
      throw ZeroRotationEntryError("rotation entry " + std::to_string(i) +
                                   " has modulus " + std::to_string(modulus));
    out(n - 1 + i) /= modulus;
  }
  return make_estimate(out);
}

PoseEstimate eigenvector_heuristic(const SpectrumReport& penalized) {
  if (penalized.zero_count < 1)
    throw EmptyNullSpaceError("penalized spectrum has no zero eigenvalue");
  return normalize_estimate(penalized.eigenvectors.col(0));
}

}  // namespace certipose
