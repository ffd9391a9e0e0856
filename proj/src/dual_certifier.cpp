#include "certipose/dual_certifier.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "certipose/graph_matrices.hpp"
#include "certipose/nullspace_recovery.hpp"

namespace certipose {

namespace {

int nodes_from_dim(Eigen::Index dim) {
  if (dim < 1 || dim % 2 == 0)
    throw DimensionMismatchError(
        "complex pose graph matrix must be (2n-1) x (2n-1)");
  return static_cast<int>((dim + 1) / 2);
}

double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXcd>& llt) {
  double log_det = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i)
    log_det += 2.0 * std::log(l(i, i).real());
  return log_det;
}

}  // namespace

Eigen::VectorXcd PoseEstimate::stacked() const {
  Eigen::VectorXcd x(anchored_positions.size() + rotations.size());
  x << anchored_positions, rotations;
  return x;
}

PoseEstimate make_estimate(const Eigen::VectorXcd& stacked) {
  const int n = nodes_from_dim(stacked.size());
  PoseEstimate est;
  est.anchored_positions = stacked.head(n - 1);
  est.rotations = stacked.tail(n);
  est.realized.poses.resize(n);
  est.realized.poses[0] = Pose2D(0.0, 0.0, std::arg(est.rotations(0)));
  for (int i = 1; i < n; ++i) {
    const std::complex<double> p = est.anchored_positions(i - 1);
    est.realized.poses[i] = Pose2D(p.real(), p.imag(),
                                   std::arg(est.rotations(i)));
  }
  return est;
}

Eigen::MatrixXcd penalized_matrix(const Eigen::MatrixXcd& w,
                                  const Eigen::VectorXd& lambda) {
  const int n = nodes_from_dim(w.rows());
  if (lambda.size() != n)
    throw LengthMismatchError("lambda has " + std::to_string(lambda.size()) +
                              " entries, expected " + std::to_string(n));
  Eigen::MatrixXcd m = w;
  for (int i = 0; i < n; ++i) m(n - 1 + i, n - 1 + i) -= lambda(i);
  return m;
}

DualSolution solve_dual(const Eigen::MatrixXcd& w, const SolverOptions& opts) {
  const int n = nodes_from_dim(w.rows());
  const Eigen::Index d = w.rows();

  DualSolution sol;
  sol.lambda = Eigen::VectorXd::Zero(n);

  const SpectrumReport input_spectrum = hermitian_eigen(w);
  const double mu_max = input_spectrum.max_eigenvalue();
  if (input_spectrum.eigenvalues(0) < -1e-9 * (1.0 + mu_max))
    throw NotPsdInputError("input matrix has eigenvalue " +
                           std::to_string(input_spectrum.eigenvalues(0)));

  // Singular W means the graph is balanced or a tree, where lambda = 0 is
  // optimal with d* = 0 and the barrier has no strictly feasible start.
  Eigen::LLT<Eigen::MatrixXcd> llt(w);
  if (input_spectrum.eigenvalues(0) <= 1e-11 * (1.0 + mu_max) ||
      llt.info() != Eigen::Success) {
    sol.dual_value = 0.0;
    sol.penalized_spectrum = input_spectrum;
    sol.barrier_final = 0.0;
    return sol;
  }

  // Path following: maximize sum(lambda) + t * log det W(lambda); the
  // gradient and Hessian come from the rotation block of W(lambda)^{-1}.
  double t = opts.t0_scale * w.trace().real() / n;
  double previous_sum = 0.0;
  bool first_outer = true;
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(d, d);

  for (int outer = 0; outer < opts.max_outer; ++outer) {
    for (int inner = 0; inner < opts.max_newton; ++inner) {
      const Eigen::MatrixXcd m = penalized_matrix(w, sol.lambda);
      Eigen::LLT<Eigen::MatrixXcd> m_llt(m);
      if (m_llt.info() != Eigen::Success) {
        sol.converged = false;
        break;
      }
      const Eigen::MatrixXcd m_inv = m_llt.solve(identity);
      const Eigen::MatrixXcd rot_block =
          m_inv.bottomRightCorner(n, n);
      const Eigen::VectorXd grad =
          Eigen::VectorXd::Ones(n) - t * rot_block.diagonal().real();
      const Eigen::MatrixXd gram = rot_block.cwiseAbs2();
      const Eigen::VectorXd step = gram.ldlt().solve(grad) / t;
      const double decrement = grad.dot(step);
      if (decrement < 1e-14 * (1.0 + std::abs(sol.lambda.sum()))) break;

      // Backtracking: keep W(lambda) positive definite and require an
      // Armijo increase of the barrier objective.
      const double phi0 = sol.lambda.sum() + t * log_det_from_llt(m_llt);
      double s = 1.0;
      bool accepted = false;
      for (int halving = 0; halving < 70; ++halving) {
        const Eigen::VectorXd candidate = sol.lambda + s * step;
        Eigen::LLT<Eigen::MatrixXcd> trial(penalized_matrix(w, candidate));
        if (trial.info() == Eigen::Success) {
          const double phi = candidate.sum() + t * log_det_from_llt(trial);
          if (phi >= phi0 + 0.05 * s * decrement) {
            sol.lambda = candidate;
            accepted = true;
            break;
          }
        }
        s *= 0.5;
      }
      ++sol.iterations;
      if (!accepted) break;
    }

    const double current_sum = sol.lambda.sum();
    if (!first_outer && current_sum < previous_sum - 1e-9 * (1.0 + std::abs(previous_sum)))
      sol.monotone = false;
    previous_sum = current_sum;
    first_outer = false;

    sol.barrier_final = t;
    if (n * t < opts.eps_dual * (1.0 + std::abs(current_sum))) break;
    t /= 10.0;
    if (outer == opts.max_outer - 1) sol.converged = false;
  }

  sol.dual_value = sol.lambda.sum();
  sol.penalized_spectrum = hermitian_eigen(penalized_matrix(w, sol.lambda));
  return sol;
}

SzepClassification classify_szep(const DualSolution& sol,
                                 double threshold_scale) {
  const ZeroClassification zc =
      classify_zeros(sol.penalized_spectrum, threshold_scale);
  if (zc.zero_count == 0)
    throw NoZeroEigenvalueError(
        "penalized matrix has no zero eigenvalue; the dual solve did not "
        "reach the boundary");
  SzepClassification out;
  out.szep = (zc.zero_count == 1);
  out.zero_count = zc.zero_count;
  out.threshold = zc.threshold;
  out.spectral_gap = zc.spectral_gap;
  return out;
}

PoseEstimate recover_optimal(const DualSolution& sol, bool gauge_fix) {
  const int n = nodes_from_dim(sol.penalized_spectrum.eigenvalues.size());
  Eigen::VectorXcd v = sol.penalized_spectrum.eigenvectors.col(0);

  const Eigen::VectorXd moduli = v.tail(n).cwiseAbs();
  const double gamma = moduli.mean();
  if (gamma <= 1e-12)
    throw ZeroModulusError("zero-eigenvector rotation entries vanish");
  const double deviation =
      (moduli.array() - gamma).abs().maxCoeff() / gamma;
  if (deviation > 1e-5)
    throw InconsistentModulusError(
        "rotation moduli of the zero-eigenvector deviate by " +
        std::to_string(deviation) + "; SZEP recovery is not applicable");

  Eigen::VectorXcd x = v / gamma;
  if (gauge_fix) {
    const std::complex<double> r0 = x(n - 1);
    x *= std::conj(r0) / std::abs(r0);
  }
  return make_estimate(x);
}

Certificate certify(const ValidatedPoseGraph& graph,
                    const SolverOptions& opts) {
  const Eigen::MatrixXcd w = build_complex_matrix(graph);
  Certificate cert;
  cert.dual = solve_dual(w, opts);
  cert.dual_value = cert.dual.dual_value;

  const SzepClassification szep =
      classify_szep(cert.dual, opts.zero_threshold_scale);
  cert.szep = szep.szep;
  cert.zero_count = szep.zero_count;

  if (szep.szep) {
    cert.estimate = recover_optimal(cert.dual, opts.gauge_fix);
    cert.status = CertificateStatus::Optimal;
  } else {
    const Eigen::MatrixXcd basis =
        null_space_basis(cert.dual.penalized_spectrum, szep.threshold);
    const NullSpaceSolution ns =
        solve_nullspace_program(make_nullspace_program(basis));
    cert.estimate = normalize_estimate(basis * ns.z);
    cert.status = CertificateStatus::Unknown;
  }

  cert.primal_value = evaluate_cost(graph, cert.estimate.realized);
  cert.gap = cert.primal_value - cert.dual_value;
  return cert;
}

}  // namespace certipose
