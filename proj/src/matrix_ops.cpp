#include "bayeslin/matrix_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bayeslin/error.hpp"

namespace bayeslin {

namespace {

void require_nonempty_finite(const Eigen::MatrixXd& m, const char* name) {
  if (m.size() == 0) throw invalid_input("matrix is empty", name);
  if (!all_finite(m)) throw invalid_input("matrix has non-finite entries", name);
}

double rank_threshold(const Eigen::MatrixXd& m, double sigma_max,
                      const ToleranceConfig& tol) {
  const double dim = static_cast<double>(std::max(m.rows(), m.cols()));
  return tol.rank_rel_tol * dim * sigma_max;
}

}  // namespace

double frobenius(const Eigen::MatrixXd& m) { return m.norm(); }

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

Eigen::Index numeric_rank(const Eigen::MatrixXd& m,
                          const ToleranceConfig& tol) {
  tol.validate();
  require_nonempty_finite(m, "M");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double thresh = rank_threshold(m, sv(0), tol);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > thresh) ++rank;
  }
  return rank;
}

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& m,
                                  const ToleranceConfig& tol) {
  tol.validate();
  require_nonempty_finite(m, "M");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return Eigen::MatrixXd(m.rows(), 0);
  const double thresh = rank_threshold(m, sv(0), tol);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > thresh) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

Eigen::MatrixXd projector_onto(const Eigen::MatrixXd& m,
                               const ToleranceConfig& tol) {
  const Eigen::MatrixXd u = orthonormal_basis(m, tol);
  return u * u.transpose();
}

double containment_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            const ToleranceConfig& tol) {
  if (a.rows() != b.rows()) {
    throw invalid_input("column-space test needs equal row counts");
  }
  require_nonempty_finite(a, "A");
  require_nonempty_finite(b, "B");
  const Eigen::MatrixXd u = orthonormal_basis(b, tol);
  const Eigen::MatrixXd residual = a - u * (u.transpose() * a);
  return residual.norm() / std::max(1.0, a.norm());
}

bool column_space_contains(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                           const ToleranceConfig& tol) {
  return containment_residual(a, b, tol) <= tol.equality_rel_tol;
}

Eigen::MatrixXd orthogonal_complement_basis(const Eigen::MatrixXd& x,
                                            const ToleranceConfig& tol) {
  tol.validate();
  require_nonempty_finite(x, "X");
  const Eigen::Index n = x.rows();
  const Eigen::Index k = x.cols();
  if (n <= k) throw invalid_input("complement basis needs n > k", "X");
  if (numeric_rank(x, tol) != k) {
    throw rank_deficient("X does not have full column rank", "X");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(n - k);
}

bool is_symmetric(const Eigen::MatrixXd& m, const ToleranceConfig& tol) {
  if (m.rows() != m.cols()) return false;
  const double asym = (m - m.transpose()).norm();
  return asym <= tol.equality_rel_tol * std::max(1.0, m.norm());
}

Eigen::MatrixXd symmetrize_checked(const Eigen::MatrixXd& m,
                                   const ToleranceConfig& tol,
                                   const char* name) {
  if (m.rows() != m.cols()) {
    throw invalid_input("matrix declared symmetric is not square", name);
  }
  require_nonempty_finite(m, name);
  if (!is_symmetric(m, tol)) {
    throw invalid_input(
        "matrix declared symmetric has asymmetry above tolerance", name);
  }
  return 0.5 * (m + m.transpose());
}

bool is_spd(const Eigen::MatrixXd& m, const ToleranceConfig& tol) {
  tol.validate();
  if (m.rows() != m.cols() || m.size() == 0) {
    throw invalid_input("definiteness test needs a nonempty square matrix");
  }
  if (!all_finite(m)) throw invalid_input("matrix has non-finite entries");
  if (!is_symmetric(m, tol)) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()),
                                                    Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& eigs = es.eigenvalues();
  const double largest = eigs.cwiseAbs().maxCoeff();
  return eigs.minCoeff() > tol.psd_eig_tol * largest;
}

bool is_psd(const Eigen::MatrixXd& m, const ToleranceConfig& tol) {
  tol.validate();
  if (m.rows() != m.cols() || m.size() == 0) {
    throw invalid_input("definiteness test needs a nonempty square matrix");
  }
  if (!all_finite(m)) throw invalid_input("matrix has non-finite entries");
  if (!is_symmetric(m, tol)) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()),
                                                    Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& eigs = es.eigenvalues();
  const double largest = eigs.cwiseAbs().maxCoeff();
  return eigs.minCoeff() >= -tol.psd_eig_tol * std::max(1.0, largest);
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Eigen::MatrixXd inverse_sqrt_spd(const Eigen::MatrixXd& m,
                                 const ToleranceConfig& tol) {
  if (!is_spd(m, tol)) {
    throw invalid_input("inverse square root needs an SPD matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  const Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd s =
      es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (s + s.transpose());
}

Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& m, const ToleranceConfig& tol,
                         const char* name) {
  const Eigen::MatrixXd sym = symmetrize_checked(m, tol, name);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  Eigen::VectorXd eigs = es.eigenvalues();
  const double largest = std::max(1.0, eigs.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    if (eigs(i) < -tol.psd_eig_tol * largest) {
      throw invalid_input("square root needs a PSD matrix", name);
    }
    eigs(i) = std::max(eigs(i), 0.0);
  }
  Eigen::MatrixXd s = es.eigenvectors() * eigs.cwiseSqrt().asDiagonal() *
                      es.eigenvectors().transpose();
  return 0.5 * (s + s.transpose());
}

Eigen::MatrixXd woodbury_inverse(const Eigen::MatrixXd& phi,
                                 const Eigen::MatrixXd& x,
                                 const Eigen::MatrixXd& k,
                                 const ToleranceConfig& tol) {
  tol.validate();
  if (!is_spd(phi, tol)) throw invalid_input("Phi must be SPD", "Phi");
  if (x.rows() != phi.rows()) {
    throw invalid_input("X row count must match Phi", "X");
  }
  if (k.rows() != k.cols() || k.rows() != x.cols()) {
    throw invalid_input("K must be square with X's column count", "K");
  }
  const Eigen::MatrixXd k_sym = symmetrize_checked(k, tol, "K");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> kes(k_sym);
  const double k_max = kes.eigenvalues().cwiseAbs().maxCoeff();
  if (kes.eigenvalues().minCoeff() <= tol.psd_eig_tol * std::max(1.0, k_max)) {
    throw unsupported(
        "singular K requires the direct inversion path, not the low-rank "
        "update");
  }

  const Eigen::LLT<Eigen::MatrixXd> phi_llt(0.5 * (phi + phi.transpose()));
  const Eigen::MatrixXd phi_inv_x = phi_llt.solve(x);
  const Eigen::MatrixXd k_inv =
      kes.eigenvectors() * kes.eigenvalues().cwiseInverse().asDiagonal() *
      kes.eigenvectors().transpose();
  const Eigen::MatrixXd core = k_inv + x.transpose() * phi_inv_x;
  const Eigen::MatrixXd phi_inv =
      phi_llt.solve(Eigen::MatrixXd::Identity(phi.rows(), phi.rows()));
  const Eigen::MatrixXd update =
      phi_inv_x * Eigen::LLT<Eigen::MatrixXd>(0.5 * (core + core.transpose()))
                      .solve(phi_inv_x.transpose());
  Eigen::MatrixXd w = phi_inv - update;
  return 0.5 * (w + w.transpose());
}

Eigen::MatrixXd solve_spd(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                          const ToleranceConfig& tol, const char* name) {
  if (!is_spd(a, tol)) {
    throw invalid_input(std::string(name) + " must be SPD for this solve",
                        name);
  }
  if (a.cols() != b.rows()) {
    throw invalid_input("solve dimension mismatch", name);
  }
  return Eigen::LLT<Eigen::MatrixXd>(0.5 * (a + a.transpose())).solve(b);
}

Eigen::MatrixXd inverse_spd(const Eigen::MatrixXd& a,
                            const ToleranceConfig& tol, const char* name) {
  Eigen::MatrixXd inv =
      solve_spd(a, Eigen::MatrixXd::Identity(a.rows(), a.rows()), tol, name);
  return 0.5 * (inv + inv.transpose());
}

}  // namespace bayeslin
