#include "bayeslin/sufficiency.hpp"

#include <string>

#include "bayeslin/error.hpp"
#include "bayeslin/estimators.hpp"
#include "bayeslin/matrix_ops.hpp"

namespace bayeslin {

namespace {

void check_transform(const Eigen::MatrixXd& f, const GeneralLinearDesign& d) {
  if (f.cols() != d.n()) {
    throw invalid_input("F must have n columns", "F");
  }
}

}  // namespace

double sufficiency_residual(const Eigen::MatrixXd& f,
                            const GeneralLinearDesign& d,
                            const ToleranceConfig& tol) {
  require_valid_design(d, tol);
  check_transform(f, d);
  return containment_residual(d.X, d.Omega * f.transpose(), tol);
}

double completeness_residual(const Eigen::MatrixXd& f,
                             const GeneralLinearDesign& d,
                             const ToleranceConfig& tol) {
  require_valid_design(d, tol);
  check_transform(f, d);
  return containment_residual(f * d.Omega, f * d.X, tol);
}

bool is_linearly_sufficient(const Eigen::MatrixXd& f,
                            const GeneralLinearDesign& d,
                            const ToleranceConfig& tol) {
  return sufficiency_residual(f, d, tol) <= tol.equality_rel_tol;
}

bool is_linearly_complete(const Eigen::MatrixXd& f,
                          const GeneralLinearDesign& d,
                          const ToleranceConfig& tol) {
  return completeness_residual(f, d, tol) <= tol.equality_rel_tol;
}

SufficiencyVerdict classify_bayes_linear(const GeneralLinearDesign& d,
                                         const Eigen::MatrixXd& k,
                                         const ToleranceConfig& tol) {
  const LinearEstimatorMap map = bayes_linear_map(d, d.Omega, k, tol);

  SufficiencyVerdict verdict;
  verdict.residual_sufficient = sufficiency_residual(map.L, d, tol);
  verdict.residual_complete = completeness_residual(map.L, d, tol);
  verdict.sufficient = verdict.residual_sufficient <= tol.equality_rel_tol;
  verdict.complete = verdict.residual_complete <= tol.equality_rel_tol;

  const bool predicted_sufficient = is_spd(map.K, tol);
  if (verdict.sufficient != predicted_sufficient || !verdict.complete) {
    throw consistency_failure(
        "sufficiency classification disagrees with the predicted verdict: "
        "computed (sufficient=" +
        std::to_string(verdict.sufficient) +
        ", complete=" + std::to_string(verdict.complete) +
        "), predicted (sufficient=" + std::to_string(predicted_sufficient) +
        ", complete=1)");
  }
  return verdict;
}

}  // namespace bayeslin
