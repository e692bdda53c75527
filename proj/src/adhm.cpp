#include "induced/adhm.hpp"

#include "induced/error.hpp"
#include "induced/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <random>

namespace induced::adhm {

using transport::FramePath;
using transport::TransportOp;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double quat_distance(const Quaternion& a, const Quaternion& b) { return std::sqrt((a - b).norm2()); }

bool finite(const Quaternion& q) {
  return std::isfinite(q.w) && std::isfinite(q.x) && std::isfinite(q.y) && std::isfinite(q.z);
}

double symmetry_residual(const QuatMatrix& m) {
  double worst = 0.0;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = r + 1; c < m.cols(); ++c) worst = std::max(worst, quat_distance(m(r, c), m(c, r)));
  }
  return worst;
}

/// c * (L; M - x_s) - s * (0; Id) with x_s = x1 i + x2 j + x3 k. With
/// c = 1, s = x4 this is Delta(x); with (cos t, sin t) it is cos t Delta at
/// x4 = tan t, finite up to the endpoints.
QuatMatrix scaled_delta(const ADHMData& data, const Vec3& x3, double c, double s) {
  const int n = data.charge;
  const Quaternion spatial{0.0, x3.x(), x3.y(), x3.z()};
  QuatMatrix d(n + 1, n);
  for (int col = 0; col < n; ++col) d(0, col) = c * data.L(0, col);
  for (int r = 0; r < n; ++r) {
    for (int col = 0; col < n; ++col) {
      Quaternion q = data.M(r, col);
      if (r == col) q = q - spatial;
      d(r + 1, col) = c * q;
      if (r == col) d(r + 1, col).w -= s;
    }
  }
  return d;
}

Frame frame_at(const ADHMData& data, const Vec3& x3, double t, std::mt19937_64* rng) {
  const ComplexMatrix op =
      scaled_delta(data, x3, std::cos(t), std::sin(t)).realize().adjoint();
  Frame f = orthonormal_kernel_basis(op, 2);
  if (rng != nullptr) f = f.gauged(random_unitary(2, *rng));
  return f;
}

/// Frames at t_i = -pi/2 + i (t_end + pi/2) / N, boundary frame at -pi/2 and,
/// when `end_at_infinity`, at t_N = pi/2.
FramePath sample_line(const ADHMData& data, const Vec3& x3, double t_end, std::size_t intervals,
                      bool end_at_infinity, std::optional<std::uint64_t> gauge_seed) {
  std::optional<std::mt19937_64> rng;
  if (gauge_seed) rng.emplace(*gauge_seed);
  const Frame boundary = boundary_frame(data.charge);
  const double width = t_end + kHalfPi;
  std::vector<Frame> frames;
  std::vector<double> params;
  frames.reserve(intervals + 1);
  params.reserve(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double t = i == intervals ? t_end
                                    : -kHalfPi + width * static_cast<double>(i) /
                                                     static_cast<double>(intervals);
    params.push_back(t);
    if (i == 0 || (i == intervals && end_at_infinity)) {
      frames.push_back(boundary);
    } else {
      frames.push_back(frame_at(data, x3, t, rng ? &*rng : nullptr));
    }
  }
  return FramePath(std::move(frames), std::move(params));
}

ComplexMatrix finish(const ComplexMatrix& product, const HolonomySettings& settings) {
  const TransportOp op(product, settings.order, false);
  return settings.normalized ? transport::normalize(op).matrix() : op.matrix();
}

Error with_grid_index(const Error& e, const GridSpec& grid, std::size_t linear) {
  const auto [i, j, k] = grid.unravel(linear);
  return Error(e.kind(), "grid point (" + std::to_string(i) + "," + std::to_string(j) + "," +
                             std::to_string(k) + "): " + e.what());
}

Eigen::Matrix2cd anti_hermitian_part(const ComplexMatrix& b) {
  return 0.5 * (b - b.adjoint());
}

}  // namespace

void ADHMData::check(double tolerance) const {
  if (charge < 1) throw Error(ErrorKind::InvalidInput, "ADHM charge must be at least 1");
  if (L.rows() != 1 || L.cols() != charge) {
    throw Error(ErrorKind::InvalidInput, "ADHM L must be a 1 x charge quaternion row");
  }
  if (M.rows() != charge || M.cols() != charge) {
    throw Error(ErrorKind::InvalidInput, "ADHM M must be charge x charge");
  }
  for (int c = 0; c < charge; ++c) {
    if (!finite(L(0, c))) throw Error(ErrorKind::InvalidInput, "ADHM L has a non-finite entry");
    for (int r = 0; r < charge; ++r) {
      if (!finite(M(r, c))) throw Error(ErrorKind::InvalidInput, "ADHM M has a non-finite entry");
    }
  }
  const double residual = symmetry_residual(M);
  if (residual > tolerance) {
    throw Error(ErrorKind::InvalidInput,
                "ADHM M is not symmetric (residual " + std::to_string(residual) + ")");
  }
}

ADHMData ADHMData::charge_one() {
  ADHMData d;
  d.charge = 1;
  d.L = QuatMatrix(1, 1);
  d.L(0, 0) = Quaternion::real(1.0);
  d.M = QuatMatrix(1, 1);
  return d;
}

void GridSpec::check() const {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw Error(ErrorKind::InvalidInput, "grid spacing must be positive and finite");
  }
  if (!origin.allFinite()) throw Error(ErrorKind::InvalidInput, "grid origin must be finite");
  for (std::size_t extent : shape) {
    if (extent < 1) throw Error(ErrorKind::InvalidInput, "grid extents must be at least 1");
  }
}

std::size_t GridSpec::index(std::size_t i, std::size_t j, std::size_t k) const {
  return (i * shape[1] + j) * shape[2] + k;
}

std::array<std::size_t, 3> GridSpec::unravel(std::size_t linear) const {
  const std::size_t k = linear % shape[2];
  const std::size_t rest = linear / shape[2];
  return {rest / shape[1], rest % shape[1], k};
}

Vec3 GridSpec::point(std::size_t linear) const {
  const auto [i, j, k] = unravel(linear);
  return origin + spacing * Vec3(static_cast<double>(i), static_cast<double>(j),
                                 static_cast<double>(k));
}

void HolonomySettings::check() const {
  if (intervals < 1) throw Error(ErrorKind::InvalidInput, "need at least one interval");
  transport::check_partition(intervals, order);
}

ComplexMatrix build_delta(const ADHMData& data, const Vec4& x) {
  return scaled_delta(data, x.head<3>(), 1.0, x(3)).realize();
}

Frame boundary_frame(int charge) {
  if (charge < 1) throw Error(ErrorKind::InvalidInput, "ADHM charge must be at least 1");
  ComplexMatrix v = ComplexMatrix::Zero(2 * (charge + 1), 2);
  v(0, 0) = 1.0;
  v(1, 1) = 1.0;
  return Frame(std::move(v));
}

FramePath line_frames(const ADHMData& data, const Vec3& x3, const HolonomySettings& settings) {
  settings.check();
  return sample_line(data, x3, kHalfPi, settings.intervals, true, settings.gauge_seed);
}

TransportOp line_holonomy(const ADHMData& data, const Vec3& x3, const HolonomySettings& settings) {
  const GaugeTrack track = sutcliffe_track(data, x3, settings);
  return TransportOp(track.gauge.back(), settings.order, settings.normalized);
}

GaugeTrack sutcliffe_track(const ADHMData& data, const Vec3& x3, const HolonomySettings& settings) {
  FramePath frames = line_frames(data, x3, settings);
  const std::vector<ComplexMatrix> partial = transport::partial_products(frames, settings.order);
  const auto per_step = static_cast<std::size_t>(transport::intervals_per_step(settings.order));
  GaugeTrack track{std::move(frames), {}, {}};
  track.t.reserve(partial.size());
  track.gauge.reserve(partial.size());
  for (std::size_t s = 0; s < partial.size(); ++s) {
    track.t.push_back(track.frames.parameters()[s * per_step]);
    track.gauge.push_back(finish(partial[s], settings));
  }
  return track;
}

ComplexMatrix sutcliffe_gauge(const ADHMData& data, const Vec3& x3, double t,
                              const HolonomySettings& settings) {
  settings.check();
  if (!(t >= -kHalfPi - 1e-15) || !(t <= kHalfPi + 1e-15)) {
    throw Error(ErrorKind::InvalidInput, "t must lie in [-pi/2, pi/2]");
  }
  if (t <= -kHalfPi) return ComplexMatrix::Identity(2, 2);

  const auto per_step = static_cast<double>(transport::intervals_per_step(settings.order));
  const double h = std::numbers::pi / static_cast<double>(settings.intervals);
  const double position = (t + kHalfPi) / (h * per_step);
  const double nearest = std::round(position);
  if (std::abs(position - nearest) < 1e-9) {
    const GaugeTrack track = sutcliffe_track(data, x3, settings);
    return track.gauge[static_cast<std::size_t>(nearest)];
  }
  const auto steps = static_cast<std::size_t>(std::ceil(position));
  const auto intervals = steps * static_cast<std::size_t>(per_step);
  const FramePath path = sample_line(data, x3, t, intervals, false, settings.gauge_seed);
  return transport::compose_path(path, {.order = settings.order, .normalized = settings.normalized})
      .matrix();
}

SkyrmeField skyrme_field(const ADHMData& data, const GridSpec& grid,
                         const HolonomySettings& settings, unsigned jobs) {
  data.check();
  grid.check();
  settings.check();
  SkyrmeField field{grid, std::vector<Eigen::Matrix2cd>(grid.size())};
  parallel_for(grid.size(), jobs, [&](std::size_t linear) {
    try {
      field.u[linear] = line_holonomy(data, grid.point(linear), settings).matrix();
    } catch (const Error& e) {
      throw with_grid_index(e, grid, linear);
    }
  });
  return field;
}

Profile gaussian_profile() {
  return {[](double x4) { return std::exp(-x4 * x4) / std::sqrt(std::numbers::pi); }, "gaussian"};
}

Profile zero_profile() {
  return {[](double) { return 0.0; }, "zero"};
}

Profile tabulated_profile(std::vector<double> x4, std::vector<double> phi, std::string name) {
  if (x4.empty() || x4.size() != phi.size()) {
    throw Error(ErrorKind::InvalidInput, "profile needs matching, non-empty x4 and phi columns");
  }
  for (std::size_t i = 0; i < x4.size(); ++i) {
    if (!std::isfinite(x4[i])) throw Error(ErrorKind::InvalidInput, "profile x4 must be finite");
    if (i > 0 && !(x4[i] > x4[i - 1])) {
      throw Error(ErrorKind::InvalidInput, "profile x4 values must be strictly increasing");
    }
  }
  auto fn = [x = std::move(x4), y = std::move(phi)](double at) {
    if (at < x.front() || at > x.back()) return 0.0;
    if (x.size() == 1) return y.front();
    const auto hi = std::upper_bound(x.begin(), x.end(), at);
    if (hi == x.end()) return y.back();
    const auto i = static_cast<std::size_t>(hi - x.begin());
    const double w = (at - x[i - 1]) / (x[i] - x[i - 1]);
    return (1.0 - w) * y[i - 1] + w * y[i];
  };
  return {std::move(fn), std::move(name)};
}

std::array<Eigen::Matrix2cd, 3> vector_meson(const ADHMData& data, const Vec3& x3,
                                             const Profile& profile, double fd_step,
                                             const HolonomySettings& settings) {
  if (!(fd_step > 0.0) || !std::isfinite(fd_step)) {
    throw Error(ErrorKind::InvalidInput, "finite-difference step must be positive");
  }
  settings.check();
  const auto per_step = static_cast<std::size_t>(transport::intervals_per_step(settings.order));
  const std::size_t steps = settings.intervals / per_step;
  if (steps % 2 != 0) {
    throw Error(ErrorKind::IncompatiblePartition,
                "Simpson quadrature over step boundaries needs an even number of steps");
  }

  // Transported frames v~ = v g at the step boundaries of one line.
  auto transported = [&](const Vec3& at) {
    const GaugeTrack track = sutcliffe_track(data, at, settings);
    std::vector<ComplexMatrix> out;
    out.reserve(track.gauge.size());
    for (std::size_t s = 0; s < track.gauge.size(); ++s) {
      out.push_back(track.frames.samples()[s * per_step].basis() * track.gauge[s]);
    }
    return std::pair{std::move(out), track.t};
  };

  const auto [centre, t] = transported(x3);
  std::array<Eigen::Matrix2cd, 3> w;
  for (auto& m : w) m.setZero();

  // Profile weights; the end samples at x4 = +-inf contribute zero.
  std::vector<double> weight(centre.size(), 0.0);
  const double dt = std::numbers::pi / static_cast<double>(settings.intervals) *
                    static_cast<double>(per_step);
  for (std::size_t s = 1; s + 1 < centre.size(); ++s) {
    const double x4 = std::tan(t[s]);
    const double phi = profile.phi(x4);
    if (!std::isfinite(phi)) {
      throw Error(ErrorKind::ProfileDomainError,
                  "profile is not finite at x4 = " + std::to_string(x4));
    }
    const double sec = 1.0 / std::cos(t[s]);
    const double simpson = (s % 2 == 1) ? 4.0 : 2.0;
    weight[s] = simpson * dt / 3.0 * phi * sec * sec;
  }
  if (std::all_of(weight.begin(), weight.end(), [](double v) { return v == 0.0; })) return w;

  for (int axis = 0; axis < 3; ++axis) {
    Vec3 shift = Vec3::Zero();
    shift(axis) = fd_step;
    const auto plus = transported(x3 + shift).first;
    const auto minus = transported(x3 - shift).first;
    for (std::size_t s = 1; s + 1 < centre.size(); ++s) {
      if (weight[s] == 0.0) continue;
      const ComplexMatrix b =
          centre[s].adjoint() * (plus[s] - minus[s]) / (2.0 * fd_step);
      w[static_cast<std::size_t>(axis)] += weight[s] * anti_hermitian_part(b);
    }
  }
  return w;
}

VectorMesonField vector_meson_field(const ADHMData& data, const GridSpec& grid,
                                    const Profile& profile, const HolonomySettings& settings,
                                    const MesonSettings& meson, unsigned jobs) {
  data.check();
  grid.check();
  settings.check();
  const double fd_step = meson.fd_step > 0.0 ? meson.fd_step : grid.spacing / 10.0;
  VectorMesonField field{grid, std::vector<std::array<Eigen::Matrix2cd, 3>>(grid.size())};
  parallel_for(grid.size(), jobs, [&](std::size_t linear) {
    try {
      field.w[linear] = vector_meson(data, grid.point(linear), profile, fd_step, settings);
    } catch (const Error& e) {
      throw with_grid_index(e, grid, linear);
    }
  });
  return field;
}

ValidationReport validate_adhm(const ADHMData& data, std::size_t audit_points, std::uint64_t seed,
                               double tolerance) {
  ValidationReport report;
  const int n = data.charge;
  if (n < 1 || data.L.rows() != 1 || data.L.cols() != n || data.M.rows() != n ||
      data.M.cols() != n) {
    report.symmetry_residual = std::numeric_limits<double>::infinity();
    report.worst_imaginary = std::numeric_limits<double>::infinity();
    return report;
  }
  report.symmetry_residual = symmetry_residual(data.M);
  report.symmetric = report.symmetry_residual <= tolerance;
  report.min_abs_det = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (std::size_t p = 0; p <= audit_points; ++p) {
    Vec4 x = Vec4::Zero();
    if (p > 0) x = Vec4(normal(rng), normal(rng), normal(rng), normal(rng));
    const QuatMatrix d = scaled_delta(data, x.head<3>(), 1.0, x(3));
    const QuatMatrix gram = d.adjoint() * d;
    Eigen::MatrixXd real_part(n, n);
    double largest = 1.0;
    double imaginary = 0.0;
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const Quaternion& q = gram(r, c);
        real_part(r, c) = q.w;
        largest = std::max(largest, std::sqrt(q.norm2()));
        imaginary = std::max(imaginary, q.imag_norm());
      }
    }
    report.worst_imaginary = std::max(report.worst_imaginary, imaginary / largest);
    report.min_abs_det = std::min(report.min_abs_det, std::abs(real_part.determinant()));
    ++report.points_checked;
  }
  report.ok = report.symmetric && report.worst_imaginary <= tolerance &&
              report.min_abs_det > tolerance && std::isfinite(report.min_abs_det);
  return report;
}

}  // namespace induced::adhm
