#pragma once

// Test-only generators and independent oracles.

#include "induced/linalg.hpp"
#include "induced/oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <random>

namespace induced::test {

inline ComplexMatrix random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix z(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) z(r, c) = Complex(normal(rng), normal(rng));
  }
  return z;
}

inline Frame random_frame(int n, int m, std::mt19937_64& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_complex(n, m, rng));
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, m);
  return Frame(std::move(q), 1e-12);
}

inline Quaternion random_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  return {normal(rng), normal(rng), normal(rng), normal(rng)};
}

/// v(t) = exp(tK) V0 with K anti-hermitian. In this gauge A = V0^dagger K V0
/// is constant, so Omega(t1, t0) = exp(-(t1 - t0) V0^dagger K V0) exactly.
struct AnalyticFamily {
  ComplexMatrix generator;  // K, n x n
  ComplexMatrix base;       // V0, n x m

  static AnalyticFamily random(int n, int m, std::mt19937_64& rng) {
    const ComplexMatrix z = random_complex(n, n, rng);
    AnalyticFamily f;
    f.generator = 0.5 * (z - z.adjoint());
    f.base = random_frame(n, m, rng).basis();
    return f;
  }

  Frame at(double t) const {
    const ComplexMatrix e = (t * generator).exp();
    return Frame(e * base, 1e-11);
  }

  ComplexMatrix exact(double t1, double t0) const {
    const ComplexMatrix a = base.adjoint() * generator * base;
    return (-(t1 - t0) * a).exp();
  }

  oracle::FrameFamily family(double begin, double end) const {
    return oracle::FrameFamily{[self = *this](double t) { return self.at(t); }, begin, end};
  }
};

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace induced::test
