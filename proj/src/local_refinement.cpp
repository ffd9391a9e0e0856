#include "certipose/local_refinement.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "certipose/errors.hpp"

namespace certipose {

void evaluate_residuals(const ValidatedPoseGraph& graph,
                        const PoseAssignment& assignment,
                        Eigen::VectorXd* residuals,
                        Eigen::MatrixXd* jacobian) {
  const int n = graph.node_count();
  const int m = graph.edge_count();
  if (assignment.size() != n)
    throw LengthMismatchError("assignment length does not match graph");

  residuals->resize(4 * m);
  if (jacobian) jacobian->setZero(4 * m, 3 * (n - 1));

  for (int k = 0; k < m; ++k) {
    const auto& e = graph.edges()[k];
    const Pose2D& pi = assignment.poses[e.tail];
    const Pose2D& pj = assignment.poses[e.head];
    const Eigen::Vector2d ri = pi.rotation_vector();
    const Eigen::Vector2d rj = pj.rotation_vector();
    const Eigen::Vector2d ri_prime(-std::sin(pi.angle), std::cos(pi.angle));
    const Eigen::Vector2d rj_prime(-std::sin(pj.angle), std::cos(pj.angle));

    residuals->segment<2>(4 * k) =
        (pj.position - pi.position) - e.d_matrix() * ri;
    residuals->segment<2>(4 * k + 2) = rj - e.rotation() * ri;

    if (!jacobian) continue;
    if (e.tail > 0) {
      const int col = 3 * (e.tail - 1);
      jacobian->block<2, 2>(4 * k, col) = -Eigen::Matrix2d::Identity();
      jacobian->block<2, 1>(4 * k, col + 2) = -e.d_matrix() * ri_prime;
      jacobian->block<2, 1>(4 * k + 2, col + 2) = -e.rotation() * ri_prime;
    }
    if (e.head > 0) {
      const int col = 3 * (e.head - 1);
      jacobian->block<2, 2>(4 * k, col) = Eigen::Matrix2d::Identity();
      jacobian->block<2, 1>(4 * k + 2, col + 2) = rj_prime;
    }
  }
}

RefinementResult gauss_newton(const ValidatedPoseGraph& graph,
                              const PoseAssignment& initial,
                              const RefineOptions& opts) {
  const int n = graph.node_count();
  RefinementResult result;
  result.poses = initial;

  Eigen::VectorXd r;
  Eigen::MatrixXd j;
  evaluate_residuals(graph, result.poses, &r, &j);
  double cost = r.squaredNorm();

  Eigen::MatrixXd jtj = j.transpose() * j;
  Eigen::VectorXd jtr = j.transpose() * r;
  double mu = opts.lm_mu0_scale * jtj.diagonal().maxCoeff();

  const auto apply_step = [&](const Eigen::VectorXd& step) {
    PoseAssignment next = result.poses;
    for (int i = 1; i < n; ++i) {
      next.poses[i].position += step.segment<2>(3 * (i - 1));
      next.poses[i] = Pose2D(next.poses[i].position,
                             next.poses[i].angle + step(3 * (i - 1) + 2));
    }
    return next;
  };

  for (int it = 0; it < opts.max_iter; ++it) {
    result.gradient_norm = 2.0 * jtr.norm();
    if (result.gradient_norm <= opts.grad_tol * (1.0 + cost)) {
      result.converged = true;
      break;
    }

    Eigen::MatrixXd damped = jtj;
    damped.diagonal().array() += mu;
    const Eigen::VectorXd step = damped.ldlt().solve(-jtr);
    result.step_norm_final = step.norm();
    result.iterations = it + 1;
    if (result.step_norm_final <= opts.step_tol) break;

    const PoseAssignment candidate = apply_step(step);
    Eigen::VectorXd r_new;
    evaluate_residuals(graph, candidate, &r_new, nullptr);
    const double cost_new = r_new.squaredNorm();

    const double predicted = -step.dot(2.0 * jtr) - step.dot(jtj * step);
    const double gain =
        predicted > 0.0 ? (cost - cost_new) / predicted : (cost - cost_new);
    if (cost_new <= cost && gain > 0.0) {
      result.poses = candidate;
      cost = cost_new;
      evaluate_residuals(graph, result.poses, &r, &j);
      jtj = j.transpose() * j;
      jtr = j.transpose() * r;
      mu /= 3.0;
    } else {
      mu *= 2.0;
    }
  }

  result.final_cost = cost;
  result.gradient_norm = 2.0 * jtr.norm();
  if (result.gradient_norm <= opts.grad_tol * (1.0 + cost))
    result.converged = true;
  return result;
}

RotationInitResult rotation_first_init(const ValidatedPoseGraph& graph) {
  const int n = graph.node_count();
  const int m = graph.edge_count();
  using Complex = std::complex<double>;

  // Rotation-connection matrix: H_ij = e^{-j theta_ij} for edge (i,j).
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& e : graph.edges()) {
    h(e.tail, e.head) += std::polar(1.0, -e.angle);
    h(e.head, e.tail) += std::polar(1.0, e.angle);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  const Eigen::VectorXcd top = solver.eigenvectors().col(n - 1);

  RotationInitResult result;
  Eigen::VectorXcd rotations(n);
  for (int i = 0; i < n; ++i) {
    const double modulus = std::abs(top(i));
    if (modulus < 1e-12) {
      rotations(i) = 1.0;
      result.fallback_nodes.push_back(i);
    } else {
      rotations(i) = top(i) / modulus;
    }
  }
  // Fix the global phase so that node 0 has rotation 1.
  rotations *= std::conj(rotations(0));

  // Positions from linear least squares with rotations fixed:
  // minimize sum |rho_j - rho_i - delta_ij r_i|^2, anchored at node 0.
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m, n - 1);
  Eigen::VectorXcd b(m);
  for (int k = 0; k < m; ++k) {
    const auto& e = graph.edges()[k];
    if (e.tail > 0) a(k, e.tail - 1) = -1.0;
    if (e.head > 0) a(k, e.head - 1) = 1.0;
    b(k) = Complex(e.delta.x(), e.delta.y()) * rotations(e.tail);
  }
  const Eigen::VectorXcd rho =
      (a.adjoint() * a).ldlt().solve(a.adjoint() * b);

  result.assignment.poses.resize(n);
  result.assignment.poses[0] = Pose2D(0.0, 0.0, std::arg(rotations(0)));
  for (int i = 1; i < n; ++i)
    result.assignment.poses[i] =
        Pose2D(rho(i - 1).real(), rho(i - 1).imag(), std::arg(rotations(i)));
  return result;
}

}  // namespace certipose
