#include "induced/linalg.hpp"

#include "induced/error.hpp"

#include <cmath>
#include <string>

namespace induced {

namespace {
constexpr Complex kI{0.0, 1.0};
}

double Quaternion::imag_norm() const { return std::sqrt(x * x + y * y + z * z); }

Eigen::Matrix2cd quat_realize(const Quaternion& q) {
  Eigen::Matrix2cd m;
  m(0, 0) = Complex(q.w, -q.z);
  m(0, 1) = -q.y - kI * q.x;
  m(1, 0) = q.y - kI * q.x;
  m(1, 1) = Complex(q.w, q.z);
  return m;
}

Quaternion quat_from_matrix(const Eigen::Matrix2cd& m) {
  // Inner products against the basis; the basis is orthogonal with norm^2 = 2.
  const double w = 0.5 * (m(0, 0) + m(1, 1)).real();
  const double z = 0.5 * (m(1, 1) - m(0, 0)).imag();
  const double y = 0.5 * (m(1, 0) - m(0, 1)).real();
  const double x = -0.5 * (m(0, 1) + m(1, 0)).imag();
  return {w, x, y, z};
}

QuatMatrix::QuatMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {
  if (rows < 1 || cols < 1) {
    throw Error(ErrorKind::DimensionMismatch, "quaternion matrix needs positive dimensions");
  }
}

QuatMatrix QuatMatrix::adjoint() const {
  QuatMatrix out(cols_, rows_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c).conj();
  }
  return out;
}

QuatMatrix QuatMatrix::operator*(const QuatMatrix& rhs) const {
  if (cols_ != rhs.rows_) {
    throw Error(ErrorKind::DimensionMismatch, "quaternion matrix product shape");
  }
  QuatMatrix out(rows_, rhs.cols_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < rhs.cols_; ++c) {
      Quaternion acc{};
      for (int k = 0; k < cols_; ++k) acc = acc + (*this)(r, k) * rhs(k, c);
      out(r, c) = acc;
    }
  }
  return out;
}

ComplexMatrix QuatMatrix::realize() const {
  ComplexMatrix out(2 * rows_, 2 * cols_);
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) out.block<2, 2>(2 * r, 2 * c) = quat_realize((*this)(r, c));
  }
  return out;
}

double orthonormality_defect(const ComplexMatrix& basis) {
  const auto m = basis.cols();
  return (basis.adjoint() * basis - ComplexMatrix::Identity(m, m)).norm();
}

Frame::Frame(ComplexMatrix basis, double tolerance) : basis_(std::move(basis)) {
  if (basis_.cols() < 1 || basis_.rows() < basis_.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "frame must be n x m with 1 <= m <= n, got " + std::to_string(basis_.rows()) +
                    "x" + std::to_string(basis_.cols()));
  }
  if (!basis_.allFinite()) throw Error(ErrorKind::NotOrthonormal, "frame has non-finite entries");
  const double defect = orthonormality_defect(basis_);
  if (defect > tolerance) {
    throw Error(ErrorKind::NotOrthonormal,
                "||v^dagger v - Id|| = " + std::to_string(defect));
  }
}

Frame Frame::gauged(const ComplexMatrix& g) const {
  if (g.rows() != rank() || g.cols() != rank()) {
    throw Error(ErrorKind::DimensionMismatch, "gauge must be rank x rank");
  }
  return Frame(basis_ * g, 1e-11);
}

Frame Frame::from_real(const Eigen::MatrixXd& basis, double tolerance) {
  return Frame(basis.cast<Complex>(), tolerance);
}

Frame orthonormal_kernel_basis(const ComplexMatrix& matrix, int expected_rank) {
  const auto cols = matrix.cols();
  if (expected_rank < 1 || expected_rank > cols) {
    throw Error(ErrorKind::DimensionMismatch, "expected kernel rank out of range");
  }
  if (!matrix.allFinite()) {
    throw Error(ErrorKind::KernelDimensionMismatch, "matrix has non-finite entries");
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(matrix, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double threshold = kKernelRelativeThreshold * sigma_max;
  Eigen::Index numerical_rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > threshold) ++numerical_rank;
  }
  const auto kernel_dim = cols - numerical_rank;
  if (kernel_dim != expected_rank) {
    throw Error(ErrorKind::KernelDimensionMismatch,
                "kernel dimension " + std::to_string(kernel_dim) + ", expected " +
                    std::to_string(expected_rank));
  }
  ComplexMatrix kernel = svd.matrixV().rightCols(expected_rank);
  return Frame(std::move(kernel), 1e-11);
}

std::vector<Vec3> gram_schmidt(const std::vector<Vec3>& vectors) {
  std::vector<Vec3> out;
  out.reserve(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    Vec3 r = vectors[i];
    const double scale = r.norm();
    for (const auto& q : out) r -= q.dot(r) * q;
    // Second pass keeps orthogonality at machine precision.
    for (const auto& q : out) r -= q.dot(r) * q;
    const double residual = r.norm();
    if (!(scale > 0.0) || residual < 1e-10 * scale) {
      throw Error(ErrorKind::DegenerateFrame,
                  "vector " + std::to_string(i) + " is dependent on its predecessors");
    }
    out.push_back(r / residual);
  }
  return out;
}

ComplexMatrix random_unitary(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix z(m, m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) z(r, c) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(m, m);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases of R's diagonal so that Q is Haar distributed.
  for (int c = 0; c < m; ++c) {
    const Complex d = r(c, c);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(c) *= d / mag;
  }
  return q;
}

ComplexMatrix unitary_polar_factor(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace induced
