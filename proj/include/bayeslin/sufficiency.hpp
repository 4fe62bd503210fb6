#pragma once

#include <Eigen/Dense>

#include "bayeslin/model.hpp"
#include "bayeslin/tolerance.hpp"

namespace bayeslin {

struct SufficiencyVerdict {
  bool sufficient = false;
  bool complete = false;
  double residual_sufficient = 0.0;  // evidence against C(X) <= C(T F^T)
  double residual_complete = 0.0;    // evidence against C(F Omega) <= C(F X)
};

/// Projection residual for C(X) <= C(Omega F^T). T is fixed to Omega, which
/// is legitimate because Omega is PD here, so C(T) = C(X) + C(Omega) = R^n
/// without choosing an arbitrary W.
double sufficiency_residual(const Eigen::MatrixXd& f,
                            const GeneralLinearDesign& d,
                            const ToleranceConfig& tol = {});

/// Projection residual for C(F Omega) <= C(F X).
double completeness_residual(const Eigen::MatrixXd& f,
                             const GeneralLinearDesign& d,
                             const ToleranceConfig& tol = {});

/// Whether some L recovers the best linear unbiased estimator of X beta
/// from the transformed data F y.
bool is_linearly_sufficient(const Eigen::MatrixXd& f,
                            const GeneralLinearDesign& d,
                            const ToleranceConfig& tol = {});

/// Whether every zero-mean linear function of F y vanishes almost surely.
bool is_linearly_complete(const Eigen::MatrixXd& f,
                          const GeneralLinearDesign& d,
                          const ToleranceConfig& tol = {});

/// Classifies the Bayes linear map with weight Omega and regularizer K, and
/// asserts agreement with the predicted classification (sufficient iff K is
/// PD; complete always). Disagreement is an internal-consistency error.
SufficiencyVerdict classify_bayes_linear(const GeneralLinearDesign& d,
                                         const Eigen::MatrixXd& k,
                                         const ToleranceConfig& tol = {});

}  // namespace bayeslin
