#include "bayeslin/random.hpp"

#include <cmath>

#include "bayeslin/error.hpp"

namespace bayeslin {

double NormalSampler::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double NormalSampler::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Eigen::VectorXd NormalSampler::normal_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
  return v;
}

Eigen::MatrixXd NormalSampler::normal_matrix(Eigen::Index rows,
                                             Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal();
  return m;
}

Eigen::MatrixXd random_orthogonal(Eigen::Index n, NormalSampler& rng) {
  const Eigen::MatrixXd g = rng.normal_matrix(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  // Fix the sign convention so Q depends only on the Gaussian draw.
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Eigen::MatrixXd random_spd(Eigen::Index n, NormalSampler& rng, double eig_lo,
                           double eig_hi) {
  if (!(eig_lo > 0.0) || eig_hi < eig_lo) {
    throw invalid_input("eigenvalue range must satisfy 0 < lo <= hi");
  }
  const Eigen::MatrixXd q = random_orthogonal(n, rng);
  Eigen::VectorXd eigs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    eigs(i) = eig_lo + (eig_hi - eig_lo) * rng.uniform();
  }
  Eigen::MatrixXd m = q * eigs.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd random_psd_of_rank(Eigen::Index n, Eigen::Index rank,
                                   NormalSampler& rng) {
  if (rank < 0 || rank > n) throw invalid_input("rank out of range");
  if (rank == 0) return Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd q = random_orthogonal(n, rng);
  Eigen::VectorXd eigs = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < rank; ++i) {
    eigs(i) = 0.5 + 1.5 * rng.uniform();
  }
  Eigen::MatrixXd m = q * eigs.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd random_design(Eigen::Index n, Eigen::Index k,
                              NormalSampler& rng, double sv_lo, double sv_hi) {
  if (n <= k || k < 1) throw invalid_input("design requires n > k >= 1");
  const Eigen::MatrixXd g = rng.normal_matrix(n, k);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd sv(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    sv(i) = sv_lo + (sv_hi - sv_lo) * rng.uniform();
  }
  return svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
}

}  // namespace bayeslin
