#include "bayeslin/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "bayeslin/error.hpp"
#include "bayeslin/matrix_ops.hpp"

namespace bayeslin {

std::string to_string(EstimatorFamily family) {
  switch (family) {
    case EstimatorFamily::BayesLinear:
      return "bayes-linear";
    case EstimatorFamily::GeneralRidge:
      return "general-ridge";
    case EstimatorFamily::Ols:
      return "ols";
    case EstimatorFamily::Gls:
      return "gls";
    case EstimatorFamily::OrdinaryRidge:
      return "ordinary-ridge";
    case EstimatorFamily::Shrinkage:
      return "shrinkage";
    case EstimatorFamily::Custom:
      return "custom";
  }
  return "custom";
}

namespace {

struct CheckedInputs {
  Eigen::MatrixXd phi;  // symmetrized
  Eigen::MatrixXd k;    // symmetrized
};

CheckedInputs check_map_inputs(const GeneralLinearDesign& d,
                               const Eigen::MatrixXd& phi,
                               const Eigen::MatrixXd& k,
                               const ToleranceConfig& tol) {
  require_valid_design(d, tol);
  if (phi.rows() != d.n() || phi.cols() != d.n()) {
    throw invalid_input("Phi must be n x n", "Phi");
  }
  if (!is_spd(phi, tol)) throw invalid_input("Phi must be SPD", "Phi");
  if (k.rows() != d.k() || k.cols() != d.k()) {
    throw invalid_input("K must be k x k", "K");
  }
  const Eigen::MatrixXd k_sym = symmetrize_checked(k, tol, "K");
  if (!is_psd(k_sym, tol)) {
    throw invalid_input("K must be symmetric positive semidefinite", "K");
  }
  return {0.5 * (phi + phi.transpose()), k_sym};
}

}  // namespace

LinearEstimatorMap bayes_linear_map(const GeneralLinearDesign& d,
                                    const Eigen::MatrixXd& phi,
                                    const Eigen::MatrixXd& k,
                                    const ToleranceConfig& tol) {
  const CheckedInputs in = check_map_inputs(d, phi, k, tol);
  // Phi + X K X^T stays SPD for PSD K, so a single Cholesky solve suffices.
  Eigen::MatrixXd a = in.phi + d.X * in.k * d.X.transpose();
  a = 0.5 * (a + a.transpose());
  const Eigen::MatrixXd solved =
      Eigen::LLT<Eigen::MatrixXd>(a).solve(d.X * in.k);
  return {solved.transpose(), EstimatorFamily::BayesLinear, in.phi, in.k};
}

LinearEstimatorMap bayes_linear_alt_map(const GeneralLinearDesign& d,
                                        const Eigen::MatrixXd& phi,
                                        const Eigen::MatrixXd& k,
                                        const ToleranceConfig& tol) {
  const CheckedInputs in = check_map_inputs(d, phi, k, tol);
  const Eigen::MatrixXd phi_inv_x = solve_spd(in.phi, d.X, tol, "Phi");
  Eigen::MatrixXd gram = d.X.transpose() * phi_inv_x;
  gram = 0.5 * (gram + gram.transpose());
  const Eigen::MatrixXd gram_inv = inverse_spd(gram, tol, "XtPhiInvX");
  Eigen::MatrixXd mid = gram_inv + in.k;
  mid = 0.5 * (mid + mid.transpose());
  const Eigen::MatrixXd solved = Eigen::LLT<Eigen::MatrixXd>(mid).solve(
      gram_inv * phi_inv_x.transpose());
  return {in.k * solved, EstimatorFamily::BayesLinear, in.phi, in.k};
}

LinearEstimatorMap general_ridge_map(const GeneralLinearDesign& d,
                                     const Eigen::MatrixXd& phi,
                                     const Eigen::MatrixXd& k,
                                     const ToleranceConfig& tol) {
  const CheckedInputs in = check_map_inputs(d, phi, k, tol);
  const Eigen::MatrixXd phi_inv_x = solve_spd(in.phi, d.X, tol, "Phi");
  Eigen::MatrixXd a = d.X.transpose() * phi_inv_x + in.k;
  a = 0.5 * (a + a.transpose());
  const Eigen::MatrixXd l =
      Eigen::LLT<Eigen::MatrixXd>(a).solve(phi_inv_x.transpose());
  return {l, EstimatorFamily::GeneralRidge, in.phi, in.k};
}

Eigen::MatrixXd shrinkage_regularizer(const GeneralLinearDesign& d,
                                      const Eigen::MatrixXd& phi, double rho,
                                      const ToleranceConfig& tol) {
  if (!(rho > 0.0)) throw invalid_input("rho must be positive", "rho");
  require_valid_design(d, tol);
  if (!is_spd(phi, tol)) throw invalid_input("Phi must be SPD", "Phi");
  const Eigen::MatrixXd phi_inv_x = solve_spd(phi, d.X, tol, "Phi");
  Eigen::MatrixXd gram = d.X.transpose() * phi_inv_x;
  gram = 0.5 * (gram + gram.transpose());
  return rho * inverse_spd(gram, tol, "XtPhiInvX");
}

Eigen::VectorXd apply_map(const LinearEstimatorMap& m,
                          const Eigen::VectorXd& y) {
  if (y.size() != m.L.cols()) {
    throw invalid_input("y length must equal the map's column count", "y");
  }
  return m.L * y;
}

double generalized_rss(const GeneralLinearDesign& d, const Eigen::MatrixXd& phi,
                       const Eigen::MatrixXd& k, const Eigen::VectorXd& y,
                       const ToleranceConfig& tol) {
  if (y.size() != d.n()) throw invalid_input("y length must equal n", "y");
  const LinearEstimatorMap map = bayes_linear_map(d, phi, k, tol);
  const Eigen::VectorXd residual = y - d.X * (map.L * y);
  const Eigen::VectorXd weighted = solve_spd(map.Phi, residual, tol, "Phi");
  const double norm_form = residual.dot(weighted);

  Eigen::MatrixXd a = map.Phi + d.X * map.K * d.X.transpose();
  a = 0.5 * (a + a.transpose());
  const Eigen::VectorXd sy = Eigen::LLT<Eigen::MatrixXd>(a).solve(y);
  const double quad_form = sy.dot(map.Phi * sy);

  if (std::abs(norm_form - quad_form) >
      tol.equality_rel_tol * std::max({1.0, norm_form, quad_form})) {
    throw consistency_failure(
        "residual norm form and quadratic form disagree: " +
        std::to_string(norm_form) + " vs " + std::to_string(quad_form));
  }
  return std::max(norm_form, 0.0);
}

}  // namespace bayeslin
