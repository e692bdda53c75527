#include "induced/transport.hpp"

#include "induced/error.hpp"

#include <cmath>
#include <string>

namespace induced::transport {

namespace {

void require_same_shape(const Frame& a, const Frame& b) {
  if (a.ambient_dim() != b.ambient_dim() || a.rank() != b.rank()) {
    throw Error(ErrorKind::DimensionMismatch,
                "frames of shape " + std::to_string(a.ambient_dim()) + "x" +
                    std::to_string(a.rank()) + " and " + std::to_string(b.ambient_dim()) + "x" +
                    std::to_string(b.rank()));
  }
}

// Omega^2 as a bare matrix; the higher orders are built from these.
ComplexMatrix omega2_matrix(const Frame& a, const Frame& b) {
  require_same_shape(a, b);
  const ComplexMatrix overlap = a.basis().adjoint() * b.basis();
  Eigen::PartialPivLU<ComplexMatrix> lu(overlap);
  const double rcond = lu.rcond();
  if (!(rcond * kOverlapConditionLimit >= 1.0)) {
    throw Error(ErrorKind::SingularOverlap,
                "overlap reciprocal condition " + std::to_string(rcond) +
                    "; fibres nearly orthogonal, refine the sampling");
  }
  return 0.5 * (overlap.adjoint() + lu.inverse());
}

// Order-3 and order-4 matching conditions, entries as (numerator, denominator).
struct Rational {
  int num;
  int den;
  double value() const { return static_cast<double>(num) / den; }
};

constexpr Rational kOrder3System[7][3] = {
    // a1 column, a2 column, right-hand side
    {{1, 1}, {1, 1}, {1, 1}},       {{-1, 1}, {-1, 1}, {-1, 1}}, {{1, 2}, {1, 2}, {1, 2}},
    {{-1, 24}, {-1, 6}, {0, 1}},    {{1, 16}, {1, 4}, {0, 1}},   {{1, 16}, {1, 4}, {0, 1}},
    {{-1, 4}, {-1, 2}, {-1, 6}},
};

constexpr Rational kOrder4System[14][5] = {
    {{1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}},
    {{-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}, {-1, 1}},
    {{1, 2}, {1, 2}, {1, 2}, {1, 2}, {1, 2}},
    {{-1, 54}, {-1, 18}, {-1, 18}, {-1, 6}, {0, 1}},
    {{1, 36}, {1, 12}, {1, 12}, {1, 4}, {0, 1}},
    {{1, 36}, {1, 12}, {1, 12}, {1, 4}, {0, 1}},
    {{-11, 54}, {-5, 18}, {-5, 18}, {-1, 2}, {-1, 6}},
    {{1, 108}, {7, 324}, {11, 324}, {1, 12}, {0, 1}},
    {{1, 216}, {17, 648}, {17, 648}, {1, 8}, {0, 1}},
    {{1, 108}, {11, 324}, {7, 324}, {1, 12}, {0, 1}},
    {{-1, 54}, {-19, 324}, {-25, 324}, {-1, 4}, {0, 1}},
    {{-1, 36}, {-1, 12}, {-1, 12}, {-1, 4}, {0, 1}},
    {{-1, 54}, {-25, 324}, {-19, 324}, {-1, 4}, {0, 1}},
    {{1, 12}, {29, 162}, {29, 162}, {1, 2}, {1, 24}},
};

template <std::size_t Rows, std::size_t Cols>
void load_system(const Rational (&table)[Rows][Cols + 1], Eigen::MatrixXd& a, Eigen::VectorXd& b) {
  a.resize(Rows, Cols);
  b.resize(Rows);
  for (std::size_t r = 0; r < Rows; ++r) {
    for (std::size_t c = 0; c < Cols; ++c) {
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = table[r][c].value();
    }
    b(static_cast<Eigen::Index>(r)) = table[r][Cols].value();
  }
}

}  // namespace

TransportOp::TransportOp(ComplexMatrix matrix, int order, bool normalized)
    : matrix_(std::move(matrix)), order_(order), normalized_(normalized) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1) {
    throw Error(ErrorKind::DimensionMismatch, "transport operator must be square");
  }
}

TransportOp omega1(const Frame& a, const Frame& b) {
  require_same_shape(a, b);
  return TransportOp(b.basis().adjoint() * a.basis(), 1, false);
}

TransportOp omega2(const Frame& a, const Frame& b) { return TransportOp(omega2_matrix(a, b), 2, false); }

TransportOp omega3(const Frame& a, const Frame& mid, const Frame& b) {
  const ComplexMatrix two_halves = omega2_matrix(mid, b) * omega2_matrix(a, mid);
  return TransportOp(kOrder3Weights[0] * two_halves + kOrder3Weights[1] * omega2_matrix(a, b), 3,
                     false);
}

TransportOp omega4(const Frame& a, const Frame& third, const Frame& two_thirds, const Frame& b) {
  const ComplexMatrix s01 = omega2_matrix(a, third);
  const ComplexMatrix s12 = omega2_matrix(third, two_thirds);
  const ComplexMatrix s23 = omega2_matrix(two_thirds, b);
  const ComplexMatrix s02 = omega2_matrix(a, two_thirds);
  const ComplexMatrix s13 = omega2_matrix(third, b);
  const ComplexMatrix s03 = omega2_matrix(a, b);
  ComplexMatrix result = kOrder4Weights[0] * (s23 * s12 * s01);
  result += kOrder4Weights[1] * (s23 * s02);
  result += kOrder4Weights[2] * (s13 * s01);
  result += kOrder4Weights[3] * s03;
  return TransportOp(std::move(result), 4, false);
}

TransportOp normalize(const TransportOp& op) {
  const double det = std::abs(op.matrix().determinant());
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw Error(ErrorKind::SingularOperator, "|det| = " + std::to_string(det));
  }
  const double scale = std::pow(det, -1.0 / op.rank());
  return TransportOp(scale * op.matrix(), op.order(), true);
}

FramePath::FramePath(std::vector<Frame> samples, std::vector<double> parameters)
    : samples_(std::move(samples)), parameters_(std::move(parameters)) {
  if (samples_.size() < 2) throw Error(ErrorKind::InvalidInput, "a path needs at least 2 samples");
  for (const auto& f : samples_) require_same_shape(samples_.front(), f);
  if (!parameters_.empty()) {
    if (parameters_.size() != samples_.size()) {
      throw Error(ErrorKind::DimensionMismatch, "one parameter value per sample required");
    }
    for (std::size_t i = 1; i < parameters_.size(); ++i) {
      if (!(parameters_[i] > parameters_[i - 1])) {
        throw Error(ErrorKind::InvalidInput, "path parameters must increase strictly");
      }
    }
  }
}

int intervals_per_step(int order) { return order == 1 ? 1 : order - 1; }

void check_partition(std::size_t intervals, int order) {
  if (order < 1 || order > 4) {
    throw Error(ErrorKind::InvalidInput, "order must be 1..4, got " + std::to_string(order));
  }
  const auto per_step = static_cast<std::size_t>(intervals_per_step(order));
  if (intervals == 0 || intervals % per_step != 0) {
    throw Error(ErrorKind::IncompatiblePartition,
                std::to_string(intervals) + " intervals do not split into order-" +
                    std::to_string(order) + " steps of " + std::to_string(per_step));
  }
}

TransportOp step(std::span<const Frame> frames, int order) {
  const auto needed = static_cast<std::size_t>(intervals_per_step(order) + 1);
  if (frames.size() != needed) {
    throw Error(ErrorKind::DimensionMismatch, "order-" + std::to_string(order) + " step needs " +
                                                  std::to_string(needed) + " frames");
  }
  switch (order) {
    case 1: return omega1(frames[0], frames[1]);
    case 2: return omega2(frames[0], frames[1]);
    case 3: return omega3(frames[0], frames[1], frames[2]);
    case 4: return omega4(frames[0], frames[1], frames[2], frames[3]);
    default: throw Error(ErrorKind::InvalidInput, "order must be 1..4");
  }
}

TransportOp compose_path(const FramePath& path, const ComposeOptions& options) {
  check_partition(path.intervals(), options.order);
  const auto per_step = static_cast<std::size_t>(intervals_per_step(options.order));
  const auto& frames = path.samples();
  const int m = path.rank();
  ComplexMatrix product = ComplexMatrix::Identity(m, m);
  for (std::size_t start = 0; start + per_step < frames.size(); start += per_step) {
    TransportOp s = step(std::span<const Frame>(frames).subspan(start, per_step + 1), options.order);
    if (options.normalized && options.per_step_normalization) s = normalize(s);
    product = s.matrix() * product;
  }
  TransportOp result(std::move(product), options.order, false);
  if (options.normalized && !options.per_step_normalization) return normalize(result);
  return TransportOp(result.matrix(), options.order, options.normalized);
}

std::vector<ComplexMatrix> partial_products(const FramePath& path, int order) {
  check_partition(path.intervals(), order);
  const auto per_step = static_cast<std::size_t>(intervals_per_step(order));
  const auto& frames = path.samples();
  const int m = path.rank();
  std::vector<ComplexMatrix> out;
  out.reserve(frames.size() / per_step + 1);
  out.push_back(ComplexMatrix::Identity(m, m));
  for (std::size_t start = 0; start + per_step < frames.size(); start += per_step) {
    const TransportOp s = step(std::span<const Frame>(frames).subspan(start, per_step + 1), order);
    out.push_back(s.matrix() * out.back());
  }
  return out;
}

double error_metric(const ComplexMatrix& u, const ComplexMatrix& reference) {
  if (u.rows() != reference.rows() || u.cols() != reference.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "error metric operands differ in shape");
  }
  const ComplexMatrix delta = u - reference;
  return 0.5 * (delta * delta.adjoint()).trace().real();
}

double error_metric(const TransportOp& u, const ComplexMatrix& reference) {
  return error_metric(u.matrix(), reference);
}

double error_norm(const ComplexMatrix& u, const ComplexMatrix& reference) {
  return std::sqrt(error_metric(u, reference));
}

double error_norm(const TransportOp& u, const ComplexMatrix& reference) {
  return error_norm(u.matrix(), reference);
}

CoefficientReport verify_coefficient_systems(std::array<double, 2> order3,
                                             std::array<double, 4> order4, double tolerance) {
  CoefficientReport report;

  Eigen::MatrixXd a3;
  Eigen::VectorXd b3;
  load_system<7, 2>(kOrder3System, a3, b3);
  const Eigen::Vector2d w3(order3[0], order3[1]);
  report.order3_residual = (a3 * w3 - b3).cwiseAbs().maxCoeff();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr3(a3);
  const Eigen::VectorXd s3 = qr3.solve(b3);
  report.order3_solution = {s3(0), s3(1)};
  report.order3_rank = static_cast<int>(qr3.rank());

  Eigen::MatrixXd a4;
  Eigen::VectorXd b4;
  load_system<14, 4>(kOrder4System, a4, b4);
  const Eigen::Vector4d w4(order4[0], order4[1], order4[2], order4[3]);
  report.order4_residual = (a4 * w4 - b4).cwiseAbs().maxCoeff();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr4(a4);
  const Eigen::VectorXd s4 = qr4.solve(b4);
  report.order4_solution = {s4(0), s4(1), s4(2), s4(3)};
  report.order4_rank = static_cast<int>(qr4.rank());

  report.ok = report.order3_residual <= tolerance && report.order4_residual <= tolerance;
  return report;
}

}  // namespace induced::transport
