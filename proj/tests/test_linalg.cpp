#include "doctest.h"
#include "support.hpp"

#include "induced/error.hpp"
#include "induced/linalg.hpp"
#include "induced/oracle.hpp"

#include <cmath>

using namespace induced;

namespace {
constexpr Complex I{0.0, 1.0};

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an induced::Error");
  return ErrorKind::Io;
}
}  // namespace

TEST_CASE("kernel of Gamma(0) is a rank-2 orthonormal frame") {
  const ComplexMatrix gamma = oracle::example_gamma(0.0);
  const Frame f = orthonormal_kernel_basis(gamma, 2);
  CHECK(f.ambient_dim() == 4);
  CHECK(f.rank() == 2);
  CHECK(test::max_abs(gamma * f.basis()) < 1e-12);
  CHECK(orthonormality_defect(f.basis()) < 1e-12);
}

TEST_CASE("kernel of the row (1 0) is e2 up to phase") {
  ComplexMatrix row(1, 2);
  row << 1.0, 0.0;
  const Frame f = orthonormal_kernel_basis(row, 1);
  CHECK(std::abs(f.basis()(0, 0)) < 1e-15);
  CHECK(std::abs(std::abs(f.basis()(1, 0)) - 1.0) < 1e-15);
}

TEST_CASE("kernel of random wide matrices matches the normal-equation projector") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix a = test::random_complex(2, 4, rng);
    const Frame f = orthonormal_kernel_basis(a, 2);
    CHECK((a * f.basis()).norm() <= 1e-10);
    CHECK(orthonormality_defect(f.basis()) <= 1e-11);
    // Independent route: P = Id - A^dagger (A A^dagger)^{-1} A.
    const ComplexMatrix gram = a * a.adjoint();
    const ComplexMatrix oracle_projector =
        ComplexMatrix::Identity(4, 4) - a.adjoint() * gram.inverse() * a;
    CHECK(test::max_abs(f.projector() - oracle_projector) < 1e-12);
  }
}

TEST_CASE("kernel dimension mismatch is reported") {
  std::mt19937_64 rng(3);
  const ComplexMatrix a = test::random_complex(2, 4, rng);
  CHECK(kind_of([&] { (void)orthonormal_kernel_basis(a, 1); }) == ErrorKind::KernelDimensionMismatch);
  CHECK(kind_of([&] { (void)orthonormal_kernel_basis(a, 3); }) == ErrorKind::KernelDimensionMismatch);
  // Rank-deficient square matrix with a 2-dimensional kernel.
  ComplexMatrix b = ComplexMatrix::Zero(3, 3);
  b(0, 0) = 5.0;
  CHECK(orthonormal_kernel_basis(b, 2).rank() == 2);
}

TEST_CASE("kernel rank decision is scale invariant") {
  const ComplexMatrix gamma = oracle::example_gamma(0.3);
  const Frame small = orthonormal_kernel_basis(1e-9 * gamma, 2);
  const Frame large = orthonormal_kernel_basis(1e9 * gamma, 2);
  CHECK(test::max_abs(small.projector() - large.projector()) < 1e-12);
}

TEST_CASE("frame construction validates shape and orthonormality") {
  ComplexMatrix not_orthonormal = ComplexMatrix::Identity(3, 2);
  not_orthonormal(2, 0) = 0.1;
  CHECK(kind_of([&] { Frame f(not_orthonormal); }) == ErrorKind::NotOrthonormal);
  CHECK(kind_of([&] { Frame f(ComplexMatrix::Identity(2, 3)); }) == ErrorKind::DimensionMismatch);
  const Frame ok(ComplexMatrix::Identity(3, 2));
  CHECK(ok.rank() == 2);
}

TEST_CASE("gram-schmidt") {
  SUBCASE("(e1, e1+e2, e3) -> (e1, e2, e3)") {
    const auto out = gram_schmidt({Vec3::UnitX(), Vec3(1, 1, 0), Vec3::UnitZ()});
    CHECK((out[0] - Vec3::UnitX()).norm() < 1e-15);
    CHECK((out[1] - Vec3::UnitY()).norm() < 1e-15);
    CHECK((out[2] - Vec3::UnitZ()).norm() < 1e-15);
  }
  SUBCASE("collinear input is degenerate") {
    CHECK(kind_of([] { (void)gram_schmidt({Vec3::UnitX(), Vec3::UnitX()}); }) ==
          ErrorKind::DegenerateFrame);
    CHECK(kind_of([] { (void)gram_schmidt({Vec3::Zero()}); }) == ErrorKind::DegenerateFrame);
  }
  SUBCASE("random independent triples give orthogonal matrices") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Vec3> in;
      for (int i = 0; i < 3; ++i) in.emplace_back(normal(rng), normal(rng), normal(rng));
      const auto out = gram_schmidt(in);
      Eigen::Matrix3d r;
      for (int i = 0; i < 3; ++i) r.col(i) = out[static_cast<std::size_t>(i)];
      CHECK((r.transpose() * r - Eigen::Matrix3d::Identity()).norm() < 1e-12);
      CHECK(out[0].cross(in[0]).norm() < 1e-12 * in[0].norm());
      CHECK(out[0].dot(in[0]) > 0.0);
    }
  }
}

TEST_CASE("quaternion realization uses the fixed basis") {
  CHECK(test::max_abs(quat_realize({1, 0, 0, 0}) - Eigen::Matrix2cd::Identity()) == 0.0);
  Eigen::Matrix2cd i_mat;
  i_mat << 0.0, -I, -I, 0.0;
  CHECK(test::max_abs(quat_realize({0, 1, 0, 0}) - i_mat) == 0.0);
  Eigen::Matrix2cd j_mat;
  j_mat << 0.0, -1.0, 1.0, 0.0;
  CHECK(test::max_abs(quat_realize({0, 0, 1, 0}) - j_mat) == 0.0);
  Eigen::Matrix2cd k_mat;
  k_mat << -I, 0.0, 0.0, I;
  CHECK(test::max_abs(quat_realize({0, 0, 0, 1}) - k_mat) == 0.0);
  // Hamilton relations.
  const Quaternion qi{0, 1, 0, 0}, qj{0, 0, 1, 0}, qk{0, 0, 0, 1};
  CHECK(qi * qj == qk);
  CHECK(qj * qk == qi);
  CHECK(qk * qi == qj);
  CHECK(qi * qj * qk == Quaternion::real(-1.0));
}

TEST_CASE("quaternion realization is an algebra homomorphism") {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Quaternion p = test::random_quaternion(rng);
    const Quaternion q = test::random_quaternion(rng);
    const Eigen::Matrix2cd rp = quat_realize(p);
    const Eigen::Matrix2cd rq = quat_realize(q);
    const double scale = std::sqrt(p.norm2() * q.norm2()) + 1.0;
    worst = std::max(worst, test::max_abs(rp * rq - quat_realize(p * q)) / scale);
    CHECK(test::max_abs(rp + rq - quat_realize(p + q)) < 1e-15);
    CHECK(test::max_abs(rp.adjoint() - quat_realize(p.conj())) == 0.0);
    CHECK(test::max_abs(quat_realize(p.conj()) * rp - p.norm2() * Eigen::Matrix2cd::Identity()) <
          1e-13 * (p.norm2() + 1.0));
    const Quaternion back = quat_from_matrix(rp);
    CHECK(std::abs(back.w - p.w) + std::abs(back.x - p.x) + std::abs(back.y - p.y) +
              std::abs(back.z - p.z) <
          1e-15 * scale);
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("quaternion matrices realize blockwise") {
  std::mt19937_64 rng(5);
  QuatMatrix a(2, 3), b(3, 2);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 3; ++c) {
      a(r, c) = test::random_quaternion(rng);
      b(c, r) = test::random_quaternion(rng);
    }
  }
  CHECK(test::max_abs((a * b).realize() - a.realize() * b.realize()) < 1e-13);
  CHECK(test::max_abs(a.adjoint().realize() - a.realize().adjoint()) == 0.0);
}

TEST_CASE("random unitaries and polar factors are unitary") {
  std::mt19937_64 rng(9);
  for (int m = 1; m <= 4; ++m) {
    const ComplexMatrix u = random_unitary(m, rng);
    CHECK(orthonormality_defect(u) < 1e-13);
    const ComplexMatrix p = unitary_polar_factor(test::random_complex(m, m, rng));
    CHECK(orthonormality_defect(p) < 1e-13);
  }
}
