#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "bayeslin/error.hpp"
#include "bayeslin/matrix_ops.hpp"
#include "bayeslin/random.hpp"
#include "bayeslin/scenarios.hpp"
#include "test_support.hpp"

using namespace bayeslin;
using testsupport::max_abs_diff;

namespace {

Eigen::MatrixXd example_x() {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 2);
  x(0, 0) = 1.0;
  x(1, 1) = 1.0;
  return x;
}

}  // namespace

TEST_CASE("tolerance validation rejects out-of-range values") {
  ToleranceConfig tol;
  CHECK_NOTHROW(tol.validate());
  tol.rank_rel_tol = 0.0;
  CHECK_THROWS_AS(tol.validate(), Error);
  tol.rank_rel_tol = 1e-2;
  CHECK_THROWS_AS(tol.validate(), Error);
}

TEST_CASE("numeric_rank on fixed matrices") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 0, 0, 0;
  CHECK(numeric_rank(m) == 1);
  CHECK(numeric_rank(example_x()) == 2);
  CHECK(numeric_rank(Eigen::MatrixXd::Zero(3, 3)) == 0);
}

TEST_CASE("numeric_rank of a constructed low-rank product") {
  NormalSampler rng(11);
  const Eigen::MatrixXd a = rng.normal_matrix(6, 2);
  const Eigen::MatrixXd b = rng.normal_matrix(2, 3);
  CHECK(numeric_rank(a * b) == 2);
}

TEST_CASE("numeric_rank rejects non-finite input") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(2, 2);
  m(0, 0) = std::nan("");
  CHECK_THROWS_AS(numeric_rank(m), Error);
}

TEST_CASE("numeric_rank is invariant under well-conditioned multiplication") {
  NormalSampler rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 5 + static_cast<Eigen::Index>(rng.uniform() * 3);
    const Eigen::Index m = 4;
    const Eigen::Index r = 1 + static_cast<Eigen::Index>(rng.uniform() * 3);
    const Eigen::MatrixXd low =
        rng.normal_matrix(n, r) * rng.normal_matrix(r, m);
    const Eigen::MatrixXd left = random_spd(n, rng, 0.05, 5.0);
    const Eigen::MatrixXd right = random_spd(m, rng, 0.05, 5.0);
    CHECK(numeric_rank(low) == r);
    CHECK(numeric_rank(left * low) == r);
    CHECK(numeric_rank(low * right) == r);
    CHECK(numeric_rank(left * low * right) == r);
  }
}

TEST_CASE("column_space_contains on block and coordinate examples") {
  const Eigen::MatrixXd x = example_x();
  const Eigen::MatrixXd z = orthogonal_complement_basis(x);
  Eigen::MatrixXd xz(3, 3);
  xz << x, z;
  CHECK(column_space_contains(x, xz));
  CHECK_FALSE(column_space_contains(Eigen::MatrixXd::Identity(3, 3), x));

  NormalSampler rng(23);
  const Eigen::MatrixXd g = random_spd(2, rng);
  CHECK(column_space_contains(x * g, x));
}

TEST_CASE("column_space_contains rejects row mismatch") {
  CHECK_THROWS_AS(column_space_contains(Eigen::MatrixXd::Ones(3, 1),
                                        Eigen::MatrixXd::Ones(2, 1)),
                  Error);
}

TEST_CASE("mutual containment coincides with projector equality") {
  NormalSampler rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd a = rng.normal_matrix(6, 2);
    const bool same_space = trial % 2 == 0;
    const Eigen::MatrixXd b =
        same_space ? Eigen::MatrixXd(a * random_spd(2, rng))
                   : rng.normal_matrix(6, 2);
    const bool both =
        column_space_contains(a, b) && column_space_contains(b, a);
    const double projector_gap =
        (projector_onto(a) - projector_onto(b)).norm();
    CHECK(both == (projector_gap <= ToleranceConfig{}.equality_rel_tol));
  }
}

TEST_CASE("orthogonal_complement_basis spans the annihilator") {
  const Eigen::MatrixXd z = orthogonal_complement_basis(example_x());
  REQUIRE(z.rows() == 3);
  REQUIRE(z.cols() == 1);
  CHECK(std::abs(std::abs(z(2, 0)) - 1.0) < 1e-14);
  CHECK(std::abs(z(0, 0)) < 1e-14);
  CHECK(std::abs(z(1, 0)) < 1e-14);

  Eigen::MatrixXd diag2(2, 1);
  diag2 << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const Eigen::MatrixXd z2 = orthogonal_complement_basis(diag2);
  CHECK(std::abs(std::abs(z2(0, 0)) - 1.0 / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(z2(0, 0) + z2(1, 0)) < 1e-14);
}

TEST_CASE("orthogonal_complement_basis identities for a random design") {
  NormalSampler rng(31);
  const Eigen::MatrixXd x = random_design(8, 3, rng);
  const Eigen::MatrixXd z = orthogonal_complement_basis(x);
  CHECK((x.transpose() * z).norm() <= 1e-12);
  CHECK(max_abs_diff(z.transpose() * z, Eigen::MatrixXd::Identity(5, 5)) <=
        1e-12);
  CHECK(numeric_rank(z) == 5);
}

TEST_CASE("orthogonal_complement_basis rejects rank-deficient designs") {
  Eigen::MatrixXd x(3, 2);
  x << 1, 2, 1, 2, 0, 0;
  CHECK_THROWS_AS(orthogonal_complement_basis(x), Error);
  try {
    orthogonal_complement_basis(x);
  } catch (const Error& e) {
    CHECK(e.kind() == "rank-deficient");
  }
}

TEST_CASE("projector split: P_X + P_Z = I") {
  NormalSampler rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd x = random_design(7, 3, rng);
    const Eigen::MatrixXd z = orthogonal_complement_basis(x);
    const Eigen::MatrixXd sum = projector_onto(x) + projector_onto(z);
    CHECK(max_abs_diff(sum, Eigen::MatrixXd::Identity(7, 7)) <= 1e-12);
  }
}

TEST_CASE("woodbury_inverse diagonal examples") {
  Eigen::MatrixXd x1(2, 1);
  x1 << 1, 0;
  const Eigen::MatrixXd w1 = woodbury_inverse(
      Eigen::MatrixXd::Identity(2, 2), x1, Eigen::MatrixXd::Ones(1, 1));
  Eigen::MatrixXd expected1(2, 2);
  expected1 << 0.5, 0, 0, 1;
  CHECK(max_abs_diff(w1, expected1) <= 1e-14);

  const Eigen::MatrixXd w2 =
      woodbury_inverse(Eigen::MatrixXd::Identity(3, 3), example_x(),
                       Eigen::MatrixXd::Identity(2, 2));
  Eigen::MatrixXd expected2 = Eigen::MatrixXd::Zero(3, 3);
  expected2.diagonal() << 0.5, 0.5, 1.0;
  CHECK(max_abs_diff(w2, expected2) <= 1e-14);
}

TEST_CASE("woodbury_inverse matches the dense inverse oracle") {
  NormalSampler rng(41);
  const Eigen::MatrixXd phi = random_spd(6, rng);
  const Eigen::MatrixXd x = rng.normal_matrix(6, 2);
  const Eigen::MatrixXd k = random_spd(2, rng);
  const Eigen::MatrixXd direct = (phi + x * k * x.transpose()).inverse();
  const double rel =
      (woodbury_inverse(phi, x, k) - direct).norm() / direct.norm();
  CHECK(rel <= 1e-9);
}

TEST_CASE("woodbury_inverse product residual over random instances") {
  NormalSampler rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform() * 9);
    const Eigen::Index k =
        1 + static_cast<Eigen::Index>(
                rng.uniform() * static_cast<double>(
                                    std::min<Eigen::Index>(4, n - 1)));
    const Eigen::MatrixXd phi = random_spd(n, rng);
    const Eigen::MatrixXd x = rng.normal_matrix(n, k);
    const Eigen::MatrixXd kk = random_spd(k, rng);
    const Eigen::MatrixXd w = woodbury_inverse(phi, x, kk);
    const Eigen::MatrixXd product = (phi + x * kk * x.transpose()) * w;
    CHECK((product - Eigen::MatrixXd::Identity(n, n)).norm() <=
          ToleranceConfig{}.equality_rel_tol);
  }
}

TEST_CASE("woodbury_inverse error paths") {
  const Eigen::MatrixXd x = example_x();
  CHECK_THROWS_AS(woodbury_inverse(Eigen::MatrixXd::Identity(3, 3), x,
                                   Eigen::MatrixXd::Zero(2, 2)),
                  Error);
  Eigen::MatrixXd not_spd = -Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(
      woodbury_inverse(not_spd, x, Eigen::MatrixXd::Identity(2, 2)), Error);
  try {
    woodbury_inverse(Eigen::MatrixXd::Identity(3, 3), x,
                     Eigen::MatrixXd::Zero(2, 2));
  } catch (const Error& e) {
    CHECK(e.kind() == "unsupported");
  }
}

TEST_CASE("is_spd checked against exact integer minors") {
  const Eigen::MatrixXd good = example_omega(9.0);
  CHECK(std::llround(good(0, 0)) == 15);
  CHECK(testsupport::int_det2(good.topLeftCorner(2, 2)) == 81);
  CHECK(testsupport::int_det3(good) == 12);
  CHECK(is_spd(good));

  const Eigen::MatrixXd bad = example_omega(1.0);
  CHECK(testsupport::int_det3(bad) == -84);
  CHECK_FALSE(is_spd(bad));

  CHECK(is_spd(Eigen::MatrixXd::Identity(5, 5)));
  CHECK_FALSE(is_spd(Eigen::MatrixXd::Zero(3, 3)));
}

TEST_CASE("is_psd accepts the boundary and rejects indefinite") {
  CHECK(is_psd(Eigen::MatrixXd::Zero(2, 2)));
  Eigen::MatrixXd m(2, 2);
  m << 1, 0, 0, -0.5;
  CHECK_FALSE(is_psd(m));
}

TEST_CASE("symmetrize_checked repairs roundoff but rejects real asymmetry") {
  Eigen::MatrixXd nearly(2, 2);
  nearly << 1.0, 0.5, 0.5 + 1e-13, 2.0;
  const Eigen::MatrixXd fixed = symmetrize_checked(nearly);
  CHECK(fixed(0, 1) == fixed(1, 0));

  Eigen::MatrixXd skew(2, 2);
  skew << 1.0, 0.5, 0.7, 2.0;
  CHECK_THROWS_AS(symmetrize_checked(skew), Error);
}

TEST_CASE("inverse_sqrt_spd on diagonal and random inputs") {
  Eigen::MatrixXd d(2, 2);
  d << 4, 0, 0, 9;
  Eigen::MatrixXd expected(2, 2);
  expected << 0.5, 0, 0, 1.0 / 3.0;
  CHECK(max_abs_diff(inverse_sqrt_spd(d), expected) <= 1e-14);
  CHECK(max_abs_diff(inverse_sqrt_spd(Eigen::MatrixXd::Identity(4, 4)),
                     Eigen::MatrixXd::Identity(4, 4)) <= 1e-14);

  NormalSampler rng(47);
  const Eigen::MatrixXd m = random_spd(5, rng);
  const Eigen::MatrixXd s = inverse_sqrt_spd(m);
  CHECK((s * m * s - Eigen::MatrixXd::Identity(5, 5)).norm() <= 1e-10);
  CHECK((s - s.transpose()).norm() <= 1e-14);

  CHECK_THROWS_AS(inverse_sqrt_spd(example_omega(1.0)), Error);
}

TEST_CASE("sqrt_psd squares back to the input") {
  NormalSampler rng(53);
  const Eigen::MatrixXd m = random_psd_of_rank(5, 3, rng);
  const Eigen::MatrixXd s = sqrt_psd(m);
  CHECK((s * s - m).norm() <= 1e-10);
}
