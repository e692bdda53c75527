#pragma once

// Gauge-covariant approximations to the parallel transport operator of the
// connection induced on a sub-bundle of a trivial hermitian bundle.
//
// Every scheme is a rational function of the overlap matrices v(b)^dagger v(a)
// of sampled orthonormal frames, so under v(x) -> v(x) g(x) the result
// transforms as Omega(b,a) -> g(b)^dagger Omega(b,a) g(a) and frames at
// interior sample points drop out of any composition.

#include "induced/linalg.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace induced::transport {

/// Weights of Omega^3 = a1 Omega^2(h/2) Omega^2(h/2) + a2 Omega^2(h).
inline constexpr std::array<double, 2> kOrder3Weights{4.0 / 3.0, -1.0 / 3.0};

/// Weights of Omega^4 over the products
/// (h/3,h/3,h/3), (h/3 after 2h/3), (2h/3 after h/3), (h).
inline constexpr std::array<double, 4> kOrder4Weights{90.0 / 44.0, -27.0 / 44.0, -27.0 / 44.0,
                                                      8.0 / 44.0};

/// Overlaps with reciprocal condition number below this are rejected.
inline constexpr double kOverlapConditionLimit = 1e8;

class TransportOp {
 public:
  TransportOp(ComplexMatrix matrix, int order, bool normalized);

  const ComplexMatrix& matrix() const { return matrix_; }
  int order() const { return order_; }
  bool normalized() const { return normalized_; }
  int rank() const { return static_cast<int>(matrix_.rows()); }

 private:
  ComplexMatrix matrix_;
  int order_;
  bool normalized_;
};

/// Omega^1(b,a) = v(b)^dagger v(a).
TransportOp omega1(const Frame& a, const Frame& b);

/// Omega^2(b,a) = (v(b)^dagger v(a) + [v(a)^dagger v(b)]^{-1}) / 2.
TransportOp omega2(const Frame& a, const Frame& b);

/// Order 3 from frames at x, x+h/2, x+h.
TransportOp omega3(const Frame& a, const Frame& mid, const Frame& b);

/// Order 4 from frames at x, x+h/3, x+2h/3, x+h.
TransportOp omega4(const Frame& a, const Frame& third, const Frame& two_thirds, const Frame& b);

/// Rescales by |det|^{-1/m}. Throws SingularOperator for a zero determinant.
TransportOp normalize(const TransportOp& op);

/// Samples of frames along a path, optionally with their parameter values.
class FramePath {
 public:
  explicit FramePath(std::vector<Frame> samples, std::vector<double> parameters = {});

  const std::vector<Frame>& samples() const { return samples_; }
  const std::vector<double>& parameters() const { return parameters_; }
  std::size_t intervals() const { return samples_.size() - 1; }
  int rank() const { return samples_.front().rank(); }
  int ambient_dim() const { return samples_.front().ambient_dim(); }

 private:
  std::vector<Frame> samples_;
  std::vector<double> parameters_;
};

struct ComposeOptions {
  int order = 2;
  bool normalized = false;
  /// Normalize every step instead of the product; same result up to rounding.
  bool per_step_normalization = false;
};

/// One step of order k consumes k-1 consecutive intervals (k = 1 uses one).
int intervals_per_step(int order);

/// Throws IncompatiblePartition unless `intervals` splits into order-k steps,
/// and InvalidInput for k outside 1..4.
void check_partition(std::size_t intervals, int order);

/// Single step of order k over frames[0..k-1] (two frames for k = 1).
TransportOp step(std::span<const Frame> frames, int order);

/// U = Omega^k(t_N, t_{N-k+1}) ... Omega^k(t_{k-1}, t_0).
TransportOp compose_path(const FramePath& path, const ComposeOptions& options);

/// Partial products H_j = step_j ... step_0 for every step boundary, starting
/// with the identity at sample 0. Entry s corresponds to sample s*(k-1)
/// (sample s for k = 1). Unnormalized.
std::vector<ComplexMatrix> partial_products(const FramePath& path, int order);

/// E = Tr(Delta Delta^dagger) / 2 with Delta = u - reference.
double error_metric(const TransportOp& u, const ComplexMatrix& reference);
double error_metric(const ComplexMatrix& u, const ComplexMatrix& reference);

/// sqrt(error_metric): the Frobenius distance scaled by 1/sqrt(2), which is
/// the quantity reported by convergence tables.
double error_norm(const TransportOp& u, const ComplexMatrix& reference);
double error_norm(const ComplexMatrix& u, const ComplexMatrix& reference);

struct CoefficientReport {
  double order3_residual = 0.0;
  double order4_residual = 0.0;
  /// Least-squares solutions of the two systems, for uniqueness checks.
  std::array<double, 2> order3_solution{};
  std::array<double, 4> order4_solution{};
  int order3_rank = 0;
  int order4_rank = 0;
  bool ok = false;
};

/// Max-norm residuals of the 7x2 (order 3) and 14x4 (order 4) matching
/// conditions at the given weights; defaults to the weights used by omega3/4.
CoefficientReport verify_coefficient_systems(std::array<double, 2> order3 = kOrder3Weights,
                                             std::array<double, 4> order4 = kOrder4Weights,
                                             double tolerance = 1e-14);

}  // namespace induced::transport
