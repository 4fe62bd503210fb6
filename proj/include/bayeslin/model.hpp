#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bayeslin/tolerance.hpp"

namespace bayeslin {

/// One instance of the general linear model y = X beta + eps with
/// E[eps] = 0 and Cov(eps) = sigma2 * Omega.
///
/// A user-supplied annihilator Z is kept verbatim as metadata; every
/// decomposition in the library works with the canonical orthonormal
/// annihilator derived from X instead (see canonical_annihilator). sigma2 is
/// optional because the equivalence results are scale-free in it; sampling
/// requires it.
struct GeneralLinearDesign {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Omega;
  std::optional<Eigen::MatrixXd> Z;
  std::optional<double> sigma2;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index k() const { return X.cols(); }
};

/// Second-moment summary of the prior on (sigma2, beta):
/// gamma = E[sigma2], W = E[beta beta^T].
struct PriorMoments {
  double gamma = 1.0;
  Eigen::MatrixXd W;
};

/// gamma^{-1} W, the regularizer of the risk-minimizing map.
Eigen::MatrixXd prior_w_star(const PriorMoments& prior);

struct ValidationCheck {
  std::string name;
  bool passed;
  double residual;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool valid = true;

  const ValidationCheck* find(const std::string& name) const;
};

/// Checks every design invariant and reports pass/fail with residual
/// magnitudes. Never throws on invalid designs; idempotent and side-effect
/// free.
ValidationReport validate_design(const GeneralLinearDesign& d,
                                 const ToleranceConfig& tol = {});

/// Throws an Error whose kind names the first failed invariant.
void require_valid_design(const GeneralLinearDesign& d,
                          const ToleranceConfig& tol = {});

/// Maps a failed validation check name to the error kind the CLI reports.
std::string validation_failure_kind(const std::string& check_name);

/// Orthonormal annihilator basis derived from X alone (never from d.Z):
/// n x (n-k), X^T Z = 0, Z^T Z = I.
Eigen::MatrixXd canonical_annihilator(const GeneralLinearDesign& d,
                                      const ToleranceConfig& tol = {});

/// X beta + sqrt(sigma2) * Omega^{1/2} u with u standard normal from the
/// seeded generator. Deterministic given the seed.
Eigen::VectorXd sample_observation(const GeneralLinearDesign& d,
                                   const Eigen::VectorXd& beta,
                                   std::uint64_t seed,
                                   const ToleranceConfig& tol = {});

}  // namespace bayeslin
