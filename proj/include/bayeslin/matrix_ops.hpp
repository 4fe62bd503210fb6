#pragma once

#include <Eigen/Dense>

#include "bayeslin/tolerance.hpp"

namespace bayeslin {

double frobenius(const Eigen::MatrixXd& m);
bool all_finite(const Eigen::MatrixXd& m);

/// Number of singular values above rank_rel_tol * max(rows, cols) * sigma_max.
/// Zero matrices have rank 0. Throws on non-finite or empty input.
Eigen::Index numeric_rank(const Eigen::MatrixXd& m,
                          const ToleranceConfig& tol = {});

/// Orthonormal columns spanning C(m); may have zero columns.
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& m,
                                  const ToleranceConfig& tol = {});

/// Orthogonal projector onto C(m).
Eigen::MatrixXd projector_onto(const Eigen::MatrixXd& m,
                               const ToleranceConfig& tol = {});

/// ||(I - P_B) A||_F / max(1, ||A||_F), the normalized evidence against
/// C(A) being contained in C(B).
double containment_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            const ToleranceConfig& tol = {});

/// True iff every column of `a` lies in C(b), tested via the orthogonal
/// projector onto C(b). Symmetric in conditioning: no least-squares solves.
bool column_space_contains(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                           const ToleranceConfig& tol = {});

/// For full-column-rank x (n > k), an n x (n-k) matrix with orthonormal
/// columns spanning the orthogonal complement of C(x). Throws rank_deficient
/// when x does not have full column rank.
Eigen::MatrixXd orthogonal_complement_basis(const Eigen::MatrixXd& x,
                                            const ToleranceConfig& tol = {});

bool is_symmetric(const Eigen::MatrixXd& m, const ToleranceConfig& tol = {});

/// Returns (m + m^T)/2 when the asymmetry is below equality_rel_tol relative
/// to the matrix scale; larger asymmetry is an error, not a silent fix.
Eigen::MatrixXd symmetrize_checked(const Eigen::MatrixXd& m,
                                   const ToleranceConfig& tol = {},
                                   const char* name = "matrix");

/// Symmetric within tolerance with smallest eigenvalue strictly above
/// psd_eig_tol times the largest eigenvalue magnitude.
bool is_spd(const Eigen::MatrixXd& m, const ToleranceConfig& tol = {});

/// Symmetric within tolerance with eigenvalues >= -psd_eig_tol times the
/// largest eigenvalue magnitude.
bool is_psd(const Eigen::MatrixXd& m, const ToleranceConfig& tol = {});

/// Smallest eigenvalue of the symmetrized matrix.
double min_eigenvalue(const Eigen::MatrixXd& m);

/// Symmetric S with S * m * S = I, by eigendecomposition. Requires SPD input.
Eigen::MatrixXd inverse_sqrt_spd(const Eigen::MatrixXd& m,
                                 const ToleranceConfig& tol = {});

/// Symmetric PSD square root by eigendecomposition; eigenvalues within
/// -psd_eig_tol of zero are clipped, anything more negative throws.
Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& m,
                         const ToleranceConfig& tol = {},
                         const char* name = "matrix");

/// (Phi + X K X^T)^{-1} assembled from Phi^{-1} and a k x k solve. Requires
/// SPD Phi and SPD K; a singular K needs the direct inversion path and is
/// reported as unsupported here.
Eigen::MatrixXd woodbury_inverse(const Eigen::MatrixXd& phi,
                                 const Eigen::MatrixXd& x,
                                 const Eigen::MatrixXd& k,
                                 const ToleranceConfig& tol = {});

/// A^{-1} b for SPD a via Cholesky. Throws invalid_input when not SPD.
Eigen::MatrixXd solve_spd(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                          const ToleranceConfig& tol = {},
                          const char* name = "matrix");

Eigen::MatrixXd inverse_spd(const Eigen::MatrixXd& a,
                            const ToleranceConfig& tol = {},
                            const char* name = "matrix");

}  // namespace bayeslin
