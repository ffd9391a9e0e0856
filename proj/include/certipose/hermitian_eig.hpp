#ifndef CERTIPOSE_HERMITIAN_EIG_HPP
#define CERTIPOSE_HERMITIAN_EIG_HPP

#include <Eigen/Core>

#include "certipose/errors.hpp"

namespace certipose {

// Full spectrum of a Hermitian matrix, eigenvalues ascending; column k of
// eigenvectors pairs with eigenvalues[k].
struct SpectrumReport {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
  int zero_count{0};
  double zero_threshold{0.0};

  double max_eigenvalue() const {
    return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) : 0.0;
  }
};

struct ZeroClassification {
  int zero_count{0};
  double threshold{0.0};
  // Ratio of the smallest retained eigenvalue to the largest one;
  // infinity when everything is classified as zero.
  double spectral_gap{0.0};
};

// Dense eigendecomposition. Requires |H - H^*|_max <= 1e-10 * scale,
// otherwise NotHermitianError.
SpectrumReport hermitian_eigen(const Eigen::MatrixXcd& h);

// Counts eigenvalues below threshold_scale * max(mu_max, 1).
ZeroClassification classify_zeros(const SpectrumReport& report,
                                  double threshold_scale = 1e-7);

// Orthonormal eigenvectors of the eigenvalues <= threshold. Throws
// EmptyNullSpaceError when none qualify.
Eigen::MatrixXcd null_space_basis(const Eigen::MatrixXcd& h, double threshold);
Eigen::MatrixXcd null_space_basis(const SpectrumReport& report,
                                  double threshold);

// Frobenius-nearest PSD matrix (negative eigenvalues clamped to zero).
Eigen::MatrixXcd psd_projection(const Eigen::MatrixXcd& h);

}  // namespace certipose

#endif
