#pragma once

#include <Eigen/Dense>

#include "bayeslin/model.hpp"
#include "bayeslin/tolerance.hpp"

namespace bayeslin {

/// Blocks of Omega in an (X, Z) basis:
///   Omega = X Gamma X^T + X Xi Z^T + Z Xi^T X^T + Z Delta Z^T.
/// Carries the basis pair so the representation can be reproduced exactly.
struct CovarianceDecomposition {
  Eigen::MatrixXd Gamma;  // k x k
  Eigen::MatrixXd Xi;     // k x (n-k)
  Eigen::MatrixXd Delta;  // (n-k) x (n-k)
  Eigen::MatrixXd X;
  Eigen::MatrixXd Z;
};

/// The exact block formulas in the canonical orthonormal annihilator basis:
///   Gamma = (X^T X)^{-1} X^T Omega X (X^T X)^{-1}
///   Xi    = (X^T X)^{-1} X^T Omega Z (Z^T Z)^{-1}
///   Delta = (Z^T Z)^{-1} Z^T Omega Z (Z^T Z)^{-1}
/// A user-supplied Z on the design is ignored here; only recompose accepts
/// arbitrary annihilators.
CovarianceDecomposition decompose(const GeneralLinearDesign& d,
                                  const ToleranceConfig& tol = {});

/// Rebuilds Omega from the blocks. Requires the block matrix
/// [[Gamma, Xi], [Xi^T, Delta]] to be positive definite.
Eigen::MatrixXd recompose(const CovarianceDecomposition& dec,
                          const ToleranceConfig& tol = {});

/// Omega^{-1} assembled from the Schur complement of the block matrix:
///   A = (Gamma - Xi Delta^{-1} Xi^T)^{-1},  B = -A Xi Delta^{-1},
///   D = Delta^{-1} + B^T A^{-1} B.
Eigen::MatrixXd block_inverse(const CovarianceDecomposition& dec,
                              const ToleranceConfig& tol = {});

/// Normalized ||X^T Omega Z|| in the canonical basis; zero exactly when the
/// covariance splits as X Gamma X^T + Z Delta Z^T.
double rao_residual(const GeneralLinearDesign& d,
                    const ToleranceConfig& tol = {});

/// True iff Omega has the split-covariance structure. Decided from
/// X^T Omega Z and cross-checked against X^T Omega^{-1} Z with the same
/// normalization; the two criteria must agree.
bool has_rao_structure(const GeneralLinearDesign& d,
                       const ToleranceConfig& tol = {});

}  // namespace bayeslin
