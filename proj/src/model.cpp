#include "bayeslin/model.hpp"

#include <cmath>

#include "bayeslin/error.hpp"
#include "bayeslin/matrix_ops.hpp"
#include "bayeslin/random.hpp"

namespace bayeslin {

Eigen::MatrixXd prior_w_star(const PriorMoments& prior) {
  if (!(prior.gamma > 0.0)) throw invalid_input("gamma must be positive", "gamma");
  if (prior.W.rows() != prior.W.cols()) {
    throw invalid_input("W must be square", "W");
  }
  return prior.W / prior.gamma;
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

void push(ValidationReport& report, std::string name, bool passed,
          double residual, std::string detail = {}) {
  report.valid = report.valid && passed;
  report.checks.push_back(
      {std::move(name), passed, residual, std::move(detail)});
}

}  // namespace

ValidationReport validate_design(const GeneralLinearDesign& d,
                                 const ToleranceConfig& tol) {
  tol.validate();
  ValidationReport report;

  const bool finite = d.X.size() > 0 && all_finite(d.X) &&
                      d.Omega.size() > 0 && all_finite(d.Omega) &&
                      (!d.Z || all_finite(*d.Z));
  push(report, "entries-finite", finite, finite ? 0.0 : 1.0);
  if (!finite) return report;

  const Eigen::Index n = d.n();
  const Eigen::Index k = d.k();

  push(report, "n-gt-k", n > k, n > k ? 0.0 : static_cast<double>(k - n + 1),
       "design needs more rows than columns");

  const bool omega_square = d.Omega.rows() == n && d.Omega.cols() == n;
  push(report, "omega-shape", omega_square, omega_square ? 0.0 : 1.0,
       "Omega must be n x n");
  if (!omega_square || n <= k) return report;

  const Eigen::Index rank = numeric_rank(d.X, tol);
  push(report, "x-rank", rank == k, static_cast<double>(k - rank),
       "X must have full column rank");

  const bool omega_sym = is_symmetric(d.Omega, tol);
  const double asym = (d.Omega - d.Omega.transpose()).norm() /
                      std::max(1.0, d.Omega.norm());
  push(report, "omega-symmetric", omega_sym, asym);
  double min_eig = 0.0;
  bool omega_pd = false;
  if (omega_sym) {
    min_eig = min_eigenvalue(d.Omega);
    omega_pd = is_spd(d.Omega, tol);
  }
  push(report, "omega-spd", omega_sym && omega_pd, omega_pd ? 0.0 : -min_eig,
       "Omega must be symmetric positive definite");

  if (d.Z) {
    const bool z_shape = d.Z->rows() == n && d.Z->cols() == n - k;
    push(report, "z-shape", z_shape, z_shape ? 0.0 : 1.0,
         "Z must be n x (n-k)");
    if (z_shape) {
      const double ann = (d.X.transpose() * (*d.Z)).norm() /
                         std::max(1.0, d.X.norm() * d.Z->norm());
      push(report, "z-annihilates-x", ann <= tol.equality_rel_tol, ann,
           "X^T Z must vanish");
      const Eigen::Index z_rank = numeric_rank(*d.Z, tol);
      push(report, "z-rank", z_rank == n - k,
           static_cast<double>(n - k - z_rank), "Z must have full column rank");
    }
  }

  if (d.sigma2) {
    push(report, "sigma2-nonnegative", *d.sigma2 >= 0.0,
         *d.sigma2 >= 0.0 ? 0.0 : -*d.sigma2);
  }

  return report;
}

std::string validation_failure_kind(const std::string& check_name) {
  if (check_name == "omega-spd" || check_name == "omega-symmetric") {
    return "omega-not-spd";
  }
  if (check_name == "x-rank") return "x-rank-deficient";
  if (check_name == "z-annihilates-x") return "z-not-annihilator";
  if (check_name == "z-rank") return "z-rank-deficient";
  if (check_name == "sigma2-nonnegative") return "sigma2-negative";
  if (check_name == "entries-finite") return "non-finite-entries";
  return "invalid-design";
}

void require_valid_design(const GeneralLinearDesign& d,
                          const ToleranceConfig& tol) {
  const ValidationReport report = validate_design(d, tol);
  if (report.valid) return;
  for (const auto& c : report.checks) {
    if (!c.passed) {
      throw Error(validation_failure_kind(c.name),
                  "design invariant failed: " + c.name, c.name);
    }
  }
}

Eigen::MatrixXd canonical_annihilator(const GeneralLinearDesign& d,
                                      const ToleranceConfig& tol) {
  return orthogonal_complement_basis(d.X, tol);
}

Eigen::VectorXd sample_observation(const GeneralLinearDesign& d,
                                   const Eigen::VectorXd& beta,
                                   std::uint64_t seed,
                                   const ToleranceConfig& tol) {
  require_valid_design(d, tol);
  if (!d.sigma2) {
    throw invalid_input("sampling requires sigma2", "sigma2");
  }
  if (beta.size() != d.k()) {
    throw invalid_input("beta length must equal k", "beta");
  }
  NormalSampler rng(seed);
  const Eigen::VectorXd u = rng.normal_vector(d.n());
  if (*d.sigma2 == 0.0) return d.X * beta;
  const Eigen::MatrixXd omega_half = sqrt_psd(d.Omega, tol, "Omega");
  return d.X * beta + std::sqrt(*d.sigma2) * (omega_half * u);
}

}  // namespace bayeslin
