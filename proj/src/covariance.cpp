#include "bayeslin/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bayeslin/error.hpp"
#include "bayeslin/matrix_ops.hpp"

namespace bayeslin {

namespace {

Eigen::MatrixXd block_matrix(const CovarianceDecomposition& dec) {
  const Eigen::Index k = dec.Gamma.rows();
  const Eigen::Index m = dec.Delta.rows();
  Eigen::MatrixXd block(k + m, k + m);
  block.topLeftCorner(k, k) = dec.Gamma;
  block.topRightCorner(k, m) = dec.Xi;
  block.bottomLeftCorner(m, k) = dec.Xi.transpose();
  block.bottomRightCorner(m, m) = dec.Delta;
  return block;
}

}  // namespace

CovarianceDecomposition decompose(const GeneralLinearDesign& d,
                                  const ToleranceConfig& tol) {
  require_valid_design(d, tol);
  const Eigen::MatrixXd z = canonical_annihilator(d, tol);
  const Eigen::MatrixXd xtx_inv =
      inverse_spd(d.X.transpose() * d.X, tol, "XtX");
  const Eigen::MatrixXd ztz_inv =
      inverse_spd(z.transpose() * z, tol, "ZtZ");
  const Eigen::MatrixXd omega_x = d.Omega * d.X;
  const Eigen::MatrixXd omega_z = d.Omega * z;

  CovarianceDecomposition dec;
  dec.Gamma = xtx_inv * (d.X.transpose() * omega_x) * xtx_inv;
  dec.Gamma = 0.5 * (dec.Gamma + dec.Gamma.transpose());
  dec.Xi = xtx_inv * (d.X.transpose() * omega_z) * ztz_inv;
  dec.Delta = ztz_inv * (z.transpose() * omega_z) * ztz_inv;
  dec.Delta = 0.5 * (dec.Delta + dec.Delta.transpose());
  dec.X = d.X;
  dec.Z = z;
  return dec;
}

Eigen::MatrixXd recompose(const CovarianceDecomposition& dec,
                          const ToleranceConfig& tol) {
  if (!is_spd(block_matrix(dec), tol)) {
    throw invalid_input("block matrix [[Gamma, Xi], [Xi^T, Delta]] is not PD",
                        "decomposition");
  }
  const Eigen::MatrixXd cross = dec.X * dec.Xi * dec.Z.transpose();
  Eigen::MatrixXd omega = dec.X * dec.Gamma * dec.X.transpose() + cross +
                          cross.transpose() +
                          dec.Z * dec.Delta * dec.Z.transpose();
  return 0.5 * (omega + omega.transpose());
}

Eigen::MatrixXd block_inverse(const CovarianceDecomposition& dec,
                              const ToleranceConfig& tol) {
  const Eigen::MatrixXd delta_inv = inverse_spd(dec.Delta, tol, "Delta");
  Eigen::MatrixXd schur =
      dec.Gamma - dec.Xi * delta_inv * dec.Xi.transpose();
  schur = 0.5 * (schur + schur.transpose());
  if (!is_spd(schur, tol)) {
    throw invalid_input("Schur complement Gamma - Xi Delta^{-1} Xi^T is not PD",
                        "decomposition");
  }
  const Eigen::MatrixXd a = inverse_spd(schur, tol, "Schur");
  const Eigen::MatrixXd b = -a * dec.Xi * delta_inv;
  const Eigen::MatrixXd dd = delta_inv + b.transpose() * schur * b;

  const Eigen::MatrixXd x_tilde =
      dec.X * inverse_spd(dec.X.transpose() * dec.X, tol, "XtX");
  const Eigen::MatrixXd z_tilde =
      dec.Z * inverse_spd(dec.Z.transpose() * dec.Z, tol, "ZtZ");
  const Eigen::MatrixXd cross = x_tilde * b * z_tilde.transpose();
  Eigen::MatrixXd inv = x_tilde * a * x_tilde.transpose() + cross +
                        cross.transpose() + z_tilde * dd * z_tilde.transpose();
  return 0.5 * (inv + inv.transpose());
}

double rao_residual(const GeneralLinearDesign& d, const ToleranceConfig& tol) {
  require_valid_design(d, tol);
  const Eigen::MatrixXd z = canonical_annihilator(d, tol);
  const double scale =
      std::max(1e-300, d.X.norm() * d.Omega.norm() * z.norm());
  return (d.X.transpose() * d.Omega * z).norm() / scale;
}

bool has_rao_structure(const GeneralLinearDesign& d,
                       const ToleranceConfig& tol) {
  require_valid_design(d, tol);
  const Eigen::MatrixXd z = canonical_annihilator(d, tol);
  const double direct = rao_residual(d, tol);
  const Eigen::MatrixXd omega_inv = inverse_spd(d.Omega, tol, "Omega");
  const double inv_scale =
      std::max(1e-300, d.X.norm() * omega_inv.norm() * z.norm());
  const double inverse_form =
      (d.X.transpose() * omega_inv * z).norm() / inv_scale;

  const bool direct_verdict = direct <= tol.equality_rel_tol;
  const bool inverse_verdict = inverse_form <= tol.equality_rel_tol;
  if (direct_verdict != inverse_verdict) {
    throw consistency_failure(
        "X^T Omega Z and X^T Omega^{-1} Z criteria disagree: residuals " +
        std::to_string(direct) + " vs " + std::to_string(inverse_form));
  }
  return direct_verdict;
}

}  // namespace bayeslin
