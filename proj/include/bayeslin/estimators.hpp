#pragma once

#include <Eigen/Dense>
#include <string>

#include "bayeslin/model.hpp"
#include "bayeslin/tolerance.hpp"

namespace bayeslin {

enum class EstimatorFamily {
  BayesLinear,
  GeneralRidge,
  Ols,
  Gls,
  OrdinaryRidge,
  Shrinkage,
  Custom,
};

std::string to_string(EstimatorFamily family);

/// A k x n linear estimator map together with the provenance needed to name
/// which result applies to it: the weight Phi and regularizer K it was built
/// from.
struct LinearEstimatorMap {
  Eigen::MatrixXd L;
  EstimatorFamily family = EstimatorFamily::Custom;
  Eigen::MatrixXd Phi;
  Eigen::MatrixXd K;
};

/// K X^T (Phi + X K X^T)^{-1}, computed by an SPD solve. Defined for any
/// symmetric PSD K, including singular K and K = 0.
LinearEstimatorMap bayes_linear_map(const GeneralLinearDesign& d,
                                    const Eigen::MatrixXd& phi,
                                    const Eigen::MatrixXd& k,
                                    const ToleranceConfig& tol = {});

/// The same map in its k-space form
/// K [(X^T Phi^{-1} X)^{-1} + K]^{-1} (X^T Phi^{-1} X)^{-1} X^T Phi^{-1}.
/// Serves as an independent cross-check of bayes_linear_map.
LinearEstimatorMap bayes_linear_alt_map(const GeneralLinearDesign& d,
                                        const Eigen::MatrixXd& phi,
                                        const Eigen::MatrixXd& k,
                                        const ToleranceConfig& tol = {});

/// (X^T Phi^{-1} X + K)^{-1} X^T Phi^{-1}. K = 0 gives weighted least
/// squares; K = lambda I the ordinary ridge map.
LinearEstimatorMap general_ridge_map(const GeneralLinearDesign& d,
                                     const Eigen::MatrixXd& phi,
                                     const Eigen::MatrixXd& k,
                                     const ToleranceConfig& tol = {});

/// rho * (X^T Phi^{-1} X)^{-1}, the typical shrinkage regularizer.
Eigen::MatrixXd shrinkage_regularizer(const GeneralLinearDesign& d,
                                      const Eigen::MatrixXd& phi, double rho,
                                      const ToleranceConfig& tol = {});

Eigen::VectorXd apply_map(const LinearEstimatorMap& m,
                          const Eigen::VectorXd& y);

/// ||Phi^{-1/2} (y - X beta_hat)||^2 for beta_hat the Bayes linear estimate,
/// evaluated both as the weighted residual norm and as the quadratic form
/// y^T S Phi S y with S = (Phi + X K X^T)^{-1}, and cross-checked.
double generalized_rss(const GeneralLinearDesign& d, const Eigen::MatrixXd& phi,
                       const Eigen::MatrixXd& k, const Eigen::VectorXd& y,
                       const ToleranceConfig& tol = {});

}  // namespace bayeslin
