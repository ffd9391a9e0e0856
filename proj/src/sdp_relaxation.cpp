#include "certipose/sdp_relaxation.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "certipose/hermitian_eig.hpp"
#include "certipose/nullspace_recovery.hpp"

namespace certipose {

RelaxationSolution solve_sdp_relaxation(const Eigen::MatrixXcd& w,
                                        const RelaxationOptions& opts) {
  const Eigen::Index d = w.rows();
  const int n = static_cast<int>((d + 1) / 2);
  const double scale = 1.0 + w.norm();
  double rho = opts.rho;

  const auto pin_diagonal = [&](Eigen::MatrixXcd& m) {
    m = 0.5 * (m + Eigen::MatrixXcd(m.adjoint()));
    for (int i = 0; i < n; ++i) m(n - 1 + i, n - 1 + i) = 1.0;
  };

  RelaxationSolution sol;
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(d, d);
  pin_diagonal(x);
  Eigen::MatrixXcd z = x;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(d, d);

  sol.converged = false;
  for (int it = 0; it < opts.max_iter; ++it) {
    x = z - u - w / rho;
    pin_diagonal(x);

    const Eigen::MatrixXcd z_prev = z;
    z = psd_projection(x + u);

    u += x - z;

    sol.primal_residual = (x - z).norm();
    sol.dual_residual = rho * (z - z_prev).norm();
    sol.iterations = it + 1;
    if (sol.primal_residual <= opts.eps_residual * scale &&
        sol.dual_residual <= opts.eps_residual * scale) {
      sol.converged = true;
      break;
    }
    // Rescale rho when the residuals drift out of balance.
    if (it % 100 == 99) {
      if (sol.primal_residual > 10.0 * sol.dual_residual) {
        rho *= 10.0;
        u /= 10.0;
      } else if (sol.dual_residual > 10.0 * sol.primal_residual) {
        rho /= 10.0;
        u *= 10.0;
      }
    }
  }

  sol.x = x;
  sol.value = (w * x).trace().real();
  sol.gap = std::abs((w * (x - z)).trace().real());

  const SpectrumReport spectrum = hermitian_eigen(0.5 * (x + z));
  const double top = spectrum.max_eigenvalue();
  sol.rank_estimate = 0;
  for (Eigen::Index k = 0; k < spectrum.eigenvalues.size(); ++k)
    if (spectrum.eigenvalues(k) > opts.rank_tol * std::max(top, 0.0))
      ++sol.rank_estimate;
  return sol;
}

std::pair<PoseEstimate, bool> rank_one_extract(const RelaxationSolution& sol,
                                               double tol) {
  const SpectrumReport spectrum = hermitian_eigen(sol.x);
  const Eigen::Index d = spectrum.eigenvalues.size();
  const double top = spectrum.eigenvalues(d - 1);
  const double second = d > 1 ? std::max(spectrum.eigenvalues(d - 2), 0.0) : 0.0;
  const bool exact = top > 0.0 && second / top <= tol;
  const Eigen::VectorXcd candidate =
      std::sqrt(std::max(top, 0.0)) * spectrum.eigenvectors.col(d - 1);
  return {normalize_estimate(candidate), exact};
}

}  // namespace certipose
