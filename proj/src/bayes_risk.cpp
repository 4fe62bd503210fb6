#include "bayeslin/bayes_risk.hpp"

#include <cmath>

#include "bayeslin/error.hpp"
#include "bayeslin/matrix_ops.hpp"
#include "bayeslin/random.hpp"

namespace bayeslin {

namespace {

void check_prior(const GeneralLinearDesign& d, const PriorMoments& prior,
                 const ToleranceConfig& tol) {
  if (!(prior.gamma > 0.0)) {
    throw invalid_input("gamma must be positive", "gamma");
  }
  if (prior.W.rows() != d.k() || prior.W.cols() != d.k()) {
    throw invalid_input("W must be k x k", "W");
  }
  if (!is_psd(prior.W, tol)) {
    throw invalid_input("W must be symmetric PSD", "W");
  }
}

}  // namespace

double closed_form_risk(const Eigen::MatrixXd& l, const GeneralLinearDesign& d,
                        const PriorMoments& prior, const ToleranceConfig& tol) {
  require_valid_design(d, tol);
  check_prior(d, prior, tol);
  if (l.rows() != d.k() || l.cols() != d.n()) {
    throw invalid_input("L must be k x n", "L");
  }
  const Eigen::MatrixXd bias = l * d.X - Eigen::MatrixXd::Identity(d.k(), d.k());
  const double noise_term = (l * d.Omega * l.transpose()).trace();
  const double bias_term = (bias * prior.W * bias.transpose()).trace();
  return prior.gamma * noise_term + bias_term;
}

LinearEstimatorMap optimal_map(const GeneralLinearDesign& d,
                               const PriorMoments& prior,
                               const ToleranceConfig& tol) {
  require_valid_design(d, tol);
  check_prior(d, prior, tol);
  return bayes_linear_map(d, d.Omega, prior_w_star(prior), tol);
}

Eigen::MatrixXd risk_gradient(const Eigen::MatrixXd& l,
                              const GeneralLinearDesign& d,
                              const PriorMoments& prior,
                              const ToleranceConfig& tol) {
  require_valid_design(d, tol);
  check_prior(d, prior, tol);
  const Eigen::MatrixXd bias = l * d.X - Eigen::MatrixXd::Identity(d.k(), d.k());
  return 2.0 * prior.gamma * l * d.Omega +
         2.0 * bias * prior.W * d.X.transpose();
}

MonteCarloRisk monte_carlo_risk(const Eigen::MatrixXd& l,
                                const GeneralLinearDesign& d,
                                const PriorMoments& prior, std::int64_t draws,
                                std::uint64_t seed,
                                const ToleranceConfig& tol) {
  require_valid_design(d, tol);
  check_prior(d, prior, tol);
  if (l.rows() != d.k() || l.cols() != d.n()) {
    throw invalid_input("L must be k x n", "L");
  }
  if (draws < 1000) {
    throw invalid_input("Monte-Carlo risk needs at least 1000 draws", "draws");
  }

  const Eigen::MatrixXd w_half = sqrt_psd(prior.W, tol, "W");
  const Eigen::MatrixXd omega_half = sqrt_psd(d.Omega, tol, "Omega");
  const double sigma = std::sqrt(prior.gamma);

  NormalSampler rng(seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t i = 0; i < draws; ++i) {
    const Eigen::VectorXd beta = w_half * rng.normal_vector(d.k());
    const Eigen::VectorXd eps = sigma * (omega_half * rng.normal_vector(d.n()));
    const Eigen::VectorXd y = d.X * beta + eps;
    const double loss = (l * y - beta).squaredNorm();
    const double delta = loss - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (loss - mean);
  }
  const double variance = m2 / static_cast<double>(draws - 1);
  return {mean, std::sqrt(variance / static_cast<double>(draws)), draws};
}

RiskReport risk_report(const Eigen::MatrixXd& l, const GeneralLinearDesign& d,
                       const PriorMoments& prior, std::int64_t draws,
                       std::uint64_t seed, const ToleranceConfig& tol) {
  RiskReport report;
  report.closed_form = closed_form_risk(l, d, prior, tol);
  const double optimal_risk =
      closed_form_risk(optimal_map(d, prior, tol).L, d, prior, tol);
  report.efficiency_vs_optimal =
      report.closed_form > 0.0 ? optimal_risk / report.closed_form : 1.0;
  if (draws > 0) {
    report.monte_carlo = monte_carlo_risk(l, d, prior, draws, seed, tol);
  }
  return report;
}

}  // namespace bayeslin
