#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bayeslin/model.hpp"
#include "bayeslin/tolerance.hpp"

namespace bayeslin {

/// The reference 3 x 2 problem: X = [e1 e2], a one-parameter covariance
/// family Omega(a), and the regularizer pair (K1, K2) whose estimators
/// coincide with the a-independent map (1/3) [[1,1,0],[1,1,0]].
///
/// printed_* records the annihilator and covariance blocks exactly as the
/// source prints them. The printed annihilator (1,-1,2)^T does not satisfy
/// X^T Z = 0, so it is kept as representation metadata only; the design
/// itself carries no Z and the canonical orthonormal one (spanning e3) drives
/// every decomposition.
struct ExampleFixture {
  GeneralLinearDesign design;
  Eigen::MatrixXd K1;
  Eigen::MatrixXd K2;
  Eigen::MatrixXd expected_map;
  Eigen::MatrixXd printed_Z;
  Eigen::MatrixXd printed_Gamma;
  Eigen::MatrixXd printed_Xi;
  Eigen::MatrixXd printed_Delta;
  double a = 0.0;
};

/// Omega(a) is positive definite only for a > 8; smaller values are a
/// precondition error naming the boundary.
ExampleFixture example_fixture(double a);

Eigen::MatrixXd example_omega(double a);

/// I_n + X GammaBar X^T + Z DeltaBar Z^T for the mixed-effects error
/// structure; always split-structured by construction. Z is the canonical
/// annihilator of the design.
Eigen::MatrixXd rao_mixed_effects_omega(const GeneralLinearDesign& d,
                                        const Eigen::MatrixXd& gamma_bar,
                                        const Eigen::MatrixXd& delta_bar,
                                        const ToleranceConfig& tol = {});

/// Contiguity pattern C and its row-normalized weights W. Rows of C with no
/// neighbors yield zero weight rows, preserved and flagged.
struct SpatialWeights {
  Eigen::MatrixXd C;
  Eigen::MatrixXd W;
  std::vector<Eigen::Index> zero_rows;
};

SpatialWeights row_normalized_weights(const Eigen::MatrixXd& c);

/// ((I - rho W)^T (I - rho W))^{-1} ... assembled as the error covariance of
/// the first-order spatial autoregression eps = rho W eps + u. Throws when
/// I - rho W is numerically singular.
Eigen::MatrixXd spatial_ar1_omega(const SpatialWeights& weights, double rho,
                                  const ToleranceConfig& tol = {});

/// A five-region contiguity instance whose row-normalized weights annihilate
/// the design from both sides: W X = 0 and W^T X = 0, with X built from the
/// two prescribed difference directions. For any PSD K this gives
/// Omega(rho)^{-1} X K = X K exactly, whatever rho.
struct SpatialNullInstance {
  SpatialWeights weights;
  Eigen::MatrixXd X;
  Eigen::MatrixXd K;
};

SpatialNullInstance spatial_null_instance();

}  // namespace bayeslin
