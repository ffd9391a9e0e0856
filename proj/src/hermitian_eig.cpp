#include "certipose/hermitian_eig.hpp"

#include <limits>

#include <Eigen/Dense>

namespace certipose {

SpectrumReport hermitian_eigen(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols())
    throw NotHermitianError("matrix is not square");
  const double scale = 1.0 + h.cwiseAbs().maxCoeff();
  const double asym = (h - Eigen::MatrixXcd(h.adjoint())).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale)
    throw NotHermitianError("matrix deviates from Hermitian by " +
                            std::to_string(asym));
  const Eigen::MatrixXcd sym = 0.5 * (h + Eigen::MatrixXcd(h.adjoint()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw Error("eigendecomposition failed to converge");
  SpectrumReport report;
  report.eigenvalues = solver.eigenvalues();
  report.eigenvectors = solver.eigenvectors();
  const ZeroClassification zc = classify_zeros(report);
  report.zero_count = zc.zero_count;
  report.zero_threshold = zc.threshold;
  return report;
}

ZeroClassification classify_zeros(const SpectrumReport& report,
                                  double threshold_scale) {
  ZeroClassification zc;
  zc.threshold = threshold_scale * std::max(report.max_eigenvalue(), 1.0);
  const Eigen::Index d = report.eigenvalues.size();
  Eigen::Index count = 0;
  while (count < d && report.eigenvalues(count) <= zc.threshold) ++count;
  zc.zero_count = static_cast<int>(count);
  if (count < d && report.max_eigenvalue() > 0.0)
    zc.spectral_gap = report.eigenvalues(count) / report.max_eigenvalue();
  else
    zc.spectral_gap = std::numeric_limits<double>::infinity();
  return zc;
}

Eigen::MatrixXcd null_space_basis(const SpectrumReport& report,
                                  double threshold) {
  const Eigen::Index d = report.eigenvalues.size();
  Eigen::Index q = 0;
  while (q < d && report.eigenvalues(q) <= threshold) ++q;
  if (q == 0)
    throw EmptyNullSpaceError("no eigenvalue below threshold " +
                              std::to_string(threshold));
  return report.eigenvectors.leftCols(q);
}

Eigen::MatrixXcd null_space_basis(const Eigen::MatrixXcd& h, double threshold) {
  return null_space_basis(hermitian_eigen(h), threshold);
}

Eigen::MatrixXcd psd_projection(const Eigen::MatrixXcd& h) {
  const SpectrumReport report = hermitian_eigen(h);
  const Eigen::VectorXd clamped = report.eigenvalues.cwiseMax(0.0);
  Eigen::MatrixXcd out = report.eigenvectors *
                         clamped.asDiagonal() *
                         report.eigenvectors.adjoint();
  out = 0.5 * (out + Eigen::MatrixXcd(out.adjoint()));
  return out;
}

}  // namespace certipose
