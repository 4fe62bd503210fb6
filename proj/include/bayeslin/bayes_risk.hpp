#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "bayeslin/estimators.hpp"
#include "bayeslin/model.hpp"
#include "bayeslin/tolerance.hpp"

namespace bayeslin {

struct MonteCarloRisk {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::int64_t draws = 0;
};

struct RiskReport {
  double closed_form = 0.0;
  std::optional<MonteCarloRisk> monte_carlo;
  double efficiency_vs_optimal = 1.0;
};

/// tr(gamma L Omega L^T + (L X - I) W (L X - I)^T), the prior-averaged
/// expected squared error of the linear map L.
double closed_form_risk(const Eigen::MatrixXd& l, const GeneralLinearDesign& d,
                        const PriorMoments& prior,
                        const ToleranceConfig& tol = {});

/// The unique risk-minimizing map W* X^T (Omega + X W* X^T)^{-1} with
/// W* = W / gamma.
LinearEstimatorMap optimal_map(const GeneralLinearDesign& d,
                               const PriorMoments& prior,
                               const ToleranceConfig& tol = {});

/// 2 gamma L Omega + 2 (L X - I) W X^T, the derivative of the risk in L.
Eigen::MatrixXd risk_gradient(const Eigen::MatrixXd& l,
                              const GeneralLinearDesign& d,
                              const PriorMoments& prior,
                              const ToleranceConfig& tol = {});

/// Seeded Monte-Carlo estimate of the risk under one admissible prior with
/// the required moments: sigma2 fixed at gamma and beta zero-mean normal
/// with second moment W. Deterministic given the seed; draws >= 1000.
MonteCarloRisk monte_carlo_risk(const Eigen::MatrixXd& l,
                                const GeneralLinearDesign& d,
                                const PriorMoments& prior, std::int64_t draws,
                                std::uint64_t seed,
                                const ToleranceConfig& tol = {});

/// Bundles the closed form, the efficiency ratio against the optimal map,
/// and (when draws > 0) the Monte-Carlo cross-check.
RiskReport risk_report(const Eigen::MatrixXd& l, const GeneralLinearDesign& d,
                       const PriorMoments& prior, std::int64_t draws = 0,
                       std::uint64_t seed = 0,
                       const ToleranceConfig& tol = {});

}  // namespace bayeslin
