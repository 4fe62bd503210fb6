#pragma once

namespace bayeslin {

/// Numerical thresholds shared by every predicate in the library. All three
/// are dimensionless; callers may override per call.
///
/// rank_rel_tol     singular values at or below rank_rel_tol * max(rows, cols)
///                  * sigma_max count as zero
/// equality_rel_tol relative matrix/vector equality threshold
/// psd_eig_tol      lower bound on eigenvalues, normalized by the largest
///                  eigenvalue magnitude
struct ToleranceConfig {
  double rank_rel_tol = 1e-10;
  double equality_rel_tol = 1e-9;
  double psd_eig_tol = 1e-10;

  /// Throws invalid_input unless all three lie in (0, 1e-3].
  void validate() const;
};

}  // namespace bayeslin
