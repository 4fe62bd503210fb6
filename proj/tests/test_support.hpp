#pragma once

#include <Eigen/Dense>

#include "bayeslin/matrix_ops.hpp"
#include "bayeslin/model.hpp"
#include "bayeslin/random.hpp"

namespace testsupport {

inline double max_abs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return max_abs(a - b);
}

inline bayeslin::GeneralLinearDesign random_valid_design(
    bayeslin::NormalSampler& rng, Eigen::Index n, Eigen::Index k) {
  bayeslin::GeneralLinearDesign d;
  d.X = bayeslin::random_design(n, k, rng);
  d.Omega = bayeslin::random_spd(n, rng);
  return d;
}

/// Split-structure covariance with known blocks in the canonical basis:
/// Omega = X Gamma X^T + Z Delta Z^T. The canonical decomposition recovers
/// Gamma and Delta exactly because X^T Z = 0 and Z^T Z = I.
struct RaoInstance {
  bayeslin::GeneralLinearDesign design;
  Eigen::MatrixXd Gamma;
  Eigen::MatrixXd Delta;
  Eigen::MatrixXd Z;
};

inline RaoInstance random_rao_design(bayeslin::NormalSampler& rng,
                                     Eigen::Index n, Eigen::Index k,
                                     bool delta_identity = false) {
  RaoInstance instance;
  instance.design.X = bayeslin::random_design(n, k, rng);
  instance.Z = bayeslin::orthogonal_complement_basis(instance.design.X);
  instance.Gamma = bayeslin::random_spd(k, rng);
  instance.Delta = delta_identity
                       ? Eigen::MatrixXd::Identity(n - k, n - k)
                       : bayeslin::random_spd(n - k, rng);
  Eigen::MatrixXd omega =
      instance.design.X * instance.Gamma * instance.design.X.transpose() +
      instance.Z * instance.Delta * instance.Z.transpose();
  instance.design.Omega = 0.5 * (omega + omega.transpose());
  return instance;
}

/// Covariance whose canonical cross block has norm well above tolerance
/// (||Xi|| around xi_scale), so split-structure verdicts are clearly false.
struct NonRaoInstance {
  bayeslin::GeneralLinearDesign design;
  Eigen::MatrixXd Xi;
};

inline NonRaoInstance random_non_rao_design(bayeslin::NormalSampler& rng,
                                            Eigen::Index n, Eigen::Index k,
                                            double xi_scale = 0.3) {
  NonRaoInstance instance;
  instance.design.X = bayeslin::random_design(n, k, rng);
  const Eigen::MatrixXd z =
      bayeslin::orthogonal_complement_basis(instance.design.X);
  const Eigen::MatrixXd gamma = bayeslin::random_spd(k, rng);
  const Eigen::MatrixXd delta = bayeslin::random_spd(n - k, rng);
  Eigen::MatrixXd xi = rng.normal_matrix(k, n - k);
  xi *= xi_scale / std::max(1e-12, xi.norm());
  instance.Xi = xi;
  const Eigen::MatrixXd cross =
      instance.design.X * xi * z.transpose();
  Eigen::MatrixXd omega =
      instance.design.X * gamma * instance.design.X.transpose() + cross +
      cross.transpose() + z * delta * z.transpose();
  instance.design.Omega = 0.5 * (omega + omega.transpose());
  return instance;
}

/// Regularizer from the family commuting with (X^T X)^{1/2} Gamma
/// (X^T X)^{1/2}; for split-structure designs the companion in either
/// direction stays symmetric PSD.
inline Eigen::MatrixXd compatible_regularizer(const RaoInstance& instance,
                                              bayeslin::NormalSampler& rng) {
  const Eigen::MatrixXd xtx =
      instance.design.X.transpose() * instance.design.X;
  const Eigen::MatrixXd half = bayeslin::sqrt_psd(xtx);
  const Eigen::MatrixXd inv_half = bayeslin::inverse_sqrt_spd(xtx);
  Eigen::MatrixXd m = half * instance.Gamma * half;
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  Eigen::VectorXd eigs(m.rows());
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    eigs(i) = 0.3 + 1.5 * rng.uniform();
  }
  const Eigen::MatrixXd g =
      es.eigenvectors() * eigs.asDiagonal() * es.eigenvectors().transpose();
  Eigen::MatrixXd k = inv_half * g * inv_half;
  return 0.5 * (k + k.transpose());
}

/// 3x3 integer determinant for exact-arithmetic oracles on integer-valued
/// covariance fixtures.
inline long long int_det3(const Eigen::MatrixXd& m) {
  const auto e = [&m](int i, int j) {
    return static_cast<long long>(std::llround(m(i, j)));
  };
  return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) -
         e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
         e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

inline long long int_det2(const Eigen::MatrixXd& m) {
  const auto e = [&m](int i, int j) {
    return static_cast<long long>(std::llround(m(i, j)));
  };
  return e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
}

}  // namespace testsupport
