#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace bayeslin {

/// Deterministic standard-normal stream: Box-Muller over mt19937_64, so a
/// given seed produces the same sequence on every platform and standard
/// library. All stochastic code in the library draws from this.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

  /// Uniform draw in [0, 1) with 53 random bits.
  double uniform();

  double normal();

  Eigen::VectorXd normal_vector(Eigen::Index n);
  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols);

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Haar-ish random orthogonal matrix via QR of a Gaussian matrix.
Eigen::MatrixXd random_orthogonal(Eigen::Index n, NormalSampler& rng);

/// SPD matrix with eigenvalues drawn uniformly from [eig_lo, eig_hi].
Eigen::MatrixXd random_spd(Eigen::Index n, NormalSampler& rng,
                           double eig_lo = 0.5, double eig_hi = 2.0);

/// Symmetric PSD matrix of exact rank `rank`; nonzero eigenvalues drawn
/// uniformly from [0.5, 2].
Eigen::MatrixXd random_psd_of_rank(Eigen::Index n, Eigen::Index rank,
                                   NormalSampler& rng);

/// Full-column-rank design with singular values drawn uniformly from
/// [sv_lo, sv_hi], so conditioning is controlled.
Eigen::MatrixXd random_design(Eigen::Index n, Eigen::Index k,
                              NormalSampler& rng, double sv_lo = 1.0,
                              double sv_hi = 2.0);

}  // namespace bayeslin
