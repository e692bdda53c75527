#pragma once

// Small dense complex linear algebra, quaternions and orthonormal frames.

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <vector>

namespace induced {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kOrthonormalTolerance = 1e-12;
inline constexpr double kKernelRelativeThreshold = 1e-8;

/// Quaternion w + x i + y j + z k with Hamilton's product (ij = k).
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static constexpr Quaternion real(double r) { return {r, 0.0, 0.0, 0.0}; }

  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
  constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
  double imag_norm() const;

  friend constexpr Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr Quaternion operator-(const Quaternion& a, const Quaternion& b) {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend constexpr Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
  friend constexpr Quaternion operator*(double s, const Quaternion& a) {
    return {s * a.w, s * a.x, s * a.y, s * a.z};
  }
  friend constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// 2x2 complex realization using the basis
///   1 = [[1,0],[0,1]], i = [[0,-i],[-i,0]], j = [[0,-1],[1,0]], k = [[-i,0],[0,i]].
/// realize(p*q) == realize(p)*realize(q) and realize(conj q) == realize(q)^dagger.
Eigen::Matrix2cd quat_realize(const Quaternion& q);

/// Inverse of quat_realize on matrices in the real span of {1,i,j,k}.
Quaternion quat_from_matrix(const Eigen::Matrix2cd& m);

/// Dense matrix of quaternions, row-major.
class QuatMatrix {
 public:
  QuatMatrix() = default;
  QuatMatrix(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Quaternion& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  const Quaternion& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r * cols_ + c)];
  }

  QuatMatrix adjoint() const;
  QuatMatrix operator*(const QuatMatrix& rhs) const;

  /// 2*rows x 2*cols complex matrix, one quat_realize block per entry.
  ComplexMatrix realize() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Quaternion> data_;
};

/// Orthonormal basis of a fibre: an n x m matrix v with v^dagger v = Id_m.
class Frame {
 public:
  /// Throws NotOrthonormal if ||v^dagger v - Id||_F exceeds tolerance and
  /// DimensionMismatch unless 1 <= m <= n.
  explicit Frame(ComplexMatrix basis, double tolerance = kOrthonormalTolerance);

  const ComplexMatrix& basis() const { return basis_; }
  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int rank() const { return static_cast<int>(basis_.cols()); }

  /// v -> v g for a unitary g (a change of gauge).
  Frame gauged(const ComplexMatrix& g) const;

  /// Orthogonal projector v v^dagger onto the fibre; gauge independent.
  ComplexMatrix projector() const { return basis_ * basis_.adjoint(); }

  static Frame from_real(const Eigen::MatrixXd& basis, double tolerance = kOrthonormalTolerance);

 private:
  ComplexMatrix basis_;
};

/// Orthonormal basis of the numerical kernel of `matrix`. The rank decision
/// uses singular values below kKernelRelativeThreshold * sigma_max. Throws
/// KernelDimensionMismatch when the kernel dimension differs from
/// expected_rank. The returned gauge is whatever the factorization produces.
Frame orthonormal_kernel_basis(const ComplexMatrix& matrix, int expected_rank);

/// Gram-Schmidt on real 3-vectors; output[0] is parallel to vectors[0].
/// Throws DegenerateFrame when a residual falls below 1e-10 of its input norm.
std::vector<Vec3> gram_schmidt(const std::vector<Vec3>& vectors);

/// Haar-distributed unitary m x m matrix.
ComplexMatrix random_unitary(int m, std::mt19937_64& rng);

/// Unitary polar factor of a square matrix (closest unitary in Frobenius norm).
ComplexMatrix unitary_polar_factor(const ComplexMatrix& a);

double orthonormality_defect(const ComplexMatrix& basis);

}  // namespace induced
