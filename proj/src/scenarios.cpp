#include "bayeslin/scenarios.hpp"

#include <cmath>
#include <string>

#include "bayeslin/error.hpp"
#include "bayeslin/matrix_ops.hpp"

namespace bayeslin {

Eigen::MatrixXd example_omega(double a) {
  Eigen::MatrixXd omega(3, 3);
  omega << 6 + a, -3 - a, 4 + 2 * a,
      -3 - a, 6 + a, -4 - 2 * a,
      4 + 2 * a, -4 - 2 * a, 4 * a;
  return omega;
}

ExampleFixture example_fixture(double a) {
  if (!(a > 8.0)) {
    throw precondition_failed(
        "Omega(a) is positive definite only for a > 8; got a = " +
            std::to_string(a),
        "a");
  }
  ExampleFixture fx;
  fx.a = a;
  fx.design.X = Eigen::MatrixXd::Zero(3, 2);
  fx.design.X(0, 0) = 1.0;
  fx.design.X(1, 1) = 1.0;
  fx.design.Omega = example_omega(a);

  fx.K1.resize(2, 2);
  fx.K1 << 3, 3, 3, 3;
  fx.K2.resize(2, 2);
  fx.K2 << 1, 1, 1, 1;

  fx.expected_map.resize(2, 3);
  fx.expected_map << 1.0 / 3.0, 1.0 / 3.0, 0.0, 1.0 / 3.0, 1.0 / 3.0, 0.0;

  fx.printed_Z.resize(3, 1);
  fx.printed_Z << 1, -1, 2;
  fx.printed_Gamma.resize(2, 2);
  fx.printed_Gamma << 2, 1, 1, 2;
  fx.printed_Xi.resize(2, 1);
  fx.printed_Xi << 2, -2;
  fx.printed_Delta.resize(1, 1);
  fx.printed_Delta << a;
  return fx;
}

Eigen::MatrixXd rao_mixed_effects_omega(const GeneralLinearDesign& d,
                                        const Eigen::MatrixXd& gamma_bar,
                                        const Eigen::MatrixXd& delta_bar,
                                        const ToleranceConfig& tol) {
  require_valid_design(d, tol);
  const Eigen::Index n = d.n();
  const Eigen::Index k = d.k();
  if (gamma_bar.rows() != k || gamma_bar.cols() != k) {
    throw invalid_input("GammaBar must be k x k", "GammaBar");
  }
  if (delta_bar.rows() != n - k || delta_bar.cols() != n - k) {
    throw invalid_input("DeltaBar must be (n-k) x (n-k)", "DeltaBar");
  }
  if (!is_psd(gamma_bar, tol)) {
    throw invalid_input("GammaBar must be symmetric PSD", "GammaBar");
  }
  if (!is_psd(delta_bar, tol)) {
    throw invalid_input("DeltaBar must be symmetric PSD", "DeltaBar");
  }
  const Eigen::MatrixXd z = canonical_annihilator(d, tol);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Identity(n, n) +
                          d.X * gamma_bar * d.X.transpose() +
                          z * delta_bar * z.transpose();
  return 0.5 * (omega + omega.transpose());
}

SpatialWeights row_normalized_weights(const Eigen::MatrixXd& c) {
  if (c.rows() != c.cols() || c.size() == 0) {
    throw invalid_input("contiguity matrix must be square", "C");
  }
  const Eigen::Index n = c.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (c(i, i) != 0.0) {
      throw invalid_input("contiguity matrix must have a zero diagonal", "C");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (c(i, j) != 0.0 && c(i, j) != 1.0) {
        throw invalid_input("contiguity matrix must be binary", "C");
      }
    }
  }

  SpatialWeights weights;
  weights.C = c;
  weights.W = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double degree = c.row(i).sum();
    if (degree == 0.0) {
      weights.zero_rows.push_back(i);
      continue;
    }
    weights.W.row(i) = c.row(i) / degree;
  }
  return weights;
}

Eigen::MatrixXd spatial_ar1_omega(const SpatialWeights& weights, double rho,
                                  const ToleranceConfig& tol) {
  const Eigen::Index n = weights.W.rows();
  if (weights.W.cols() != n || n == 0) {
    throw invalid_input("weight matrix must be square", "W");
  }
  const Eigen::MatrixXd b =
      Eigen::MatrixXd::Identity(n, n) - rho * weights.W;
  if (numeric_rank(b, tol) < n) {
    throw invalid_input(
        "I - rho W is singular at rho = " + std::to_string(rho), "rho");
  }
  Eigen::MatrixXd btb = b.transpose() * b;
  btb = 0.5 * (btb + btb.transpose());
  return inverse_spd(btb, tol, "I-rhoW");
}

SpatialNullInstance spatial_null_instance() {
  // Five regions in three merged groups {1,2}, {3,4}, {5}; the quotient
  // graph links group one to the other two. Row normalization keeps the
  // within-group difference directions in the null space of both W and W^T.
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(5, 5);
  const auto link = [&c](Eigen::Index i, Eigen::Index j) {
    c(i, j) = 1.0;
    c(j, i) = 1.0;
  };
  link(0, 2);
  link(0, 3);
  link(0, 4);
  link(1, 2);
  link(1, 3);
  link(1, 4);

  SpatialNullInstance instance;
  instance.weights = row_normalized_weights(c);
  instance.X = Eigen::MatrixXd::Zero(5, 2);
  instance.X(0, 0) = 1.0;
  instance.X(1, 0) = -1.0;
  instance.X(2, 1) = 1.0;
  instance.X(3, 1) = -1.0;
  instance.K = Eigen::MatrixXd::Identity(2, 2);
  return instance;
}

}  // namespace bayeslin
