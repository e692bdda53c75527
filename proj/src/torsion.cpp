#include "induced/torsion.hpp"

#include "induced/error.hpp"
#include "induced/transport.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace induced::torsion {

namespace {

constexpr double kCrossingTolerance = 1e-9;

long wrap(long i, std::size_t n) {
  const auto size = static_cast<long>(n);
  return ((i % size) + size) % size;
}

Frame to_frame(const NormalFrame& v) { return Frame::from_real(v); }

}  // namespace

SampledCurve::SampledCurve(std::vector<Vec3> points) : points_(std::move(points)) {
  if (points_.size() < 4 || points_.size() % 2 != 0) {
    throw Error(ErrorKind::InvalidInput,
                "curve needs an even number (at least 4) of samples, got " +
                    std::to_string(points_.size()));
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!points_[i].allFinite()) {
      throw Error(ErrorKind::InvalidInput, "non-finite curve sample " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (edge(static_cast<long>(i)).norm() == 0.0) {
      throw Error(ErrorKind::DegenerateFrame, "zero-length edge " + std::to_string(i));
    }
  }
}

const Vec3& SampledCurve::point(long i) const {
  return points_[static_cast<std::size_t>(wrap(i, points_.size()))];
}

Vec3 SampledCurve::edge(long i) const { return point(i + 1) - point(i); }

SampledCurve SampledCurve::reversed() const {
  return SampledCurve(std::vector<Vec3>(points_.rbegin(), points_.rend()));
}

Vec3 edge_tangent(const SampledCurve& curve, long i, TangentEstimate estimate) {
  Vec3 t = curve.edge(i);
  if (estimate == TangentEstimate::FourthOrder) {
    t = (-curve.point(i + 2) + 27.0 * curve.point(i + 1) - 27.0 * curve.point(i) +
         curve.point(i - 1)) /
        24.0;
  }
  const double norm = t.norm();
  if (norm == 0.0) throw Error(ErrorKind::DegenerateFrame, "zero tangent at edge " + std::to_string(i));
  return t / norm;
}

std::vector<NormalFrame> build_normal_frames(const SampledCurve& curve, const FrameOptions& options) {
  std::vector<NormalFrame> frames(curve.size());
  for (std::size_t e = 0; e < curve.size(); ++e) {
    const auto i = static_cast<long>(e);
    const Vec3 t = edge_tangent(curve, i, options.tangent);
    NormalFrame v;
    if (options.mode == FrameMode::Frenet) {
      const Vec3 bend = curve.edge(i + 1) - curve.edge(i - 1);
      std::vector<Vec3> basis;
      try {
        basis = gram_schmidt({t, bend, t.cross(bend)});
      } catch (const Error&) {
        throw Error(ErrorKind::DegenerateFrame,
                    "no discrete normal at edge " + std::to_string(e) + " (straight segment)");
      }
      v.col(0) = basis[1];
      v.col(1) = basis[2];
    } else {
      // Helper axis least aligned with the tangent.
      Eigen::Index axis = 0;
      t.cwiseAbs().minCoeff(&axis);
      const Vec3 helper = Vec3::Unit(axis);
      const Vec3 n = (helper - helper.dot(t) * t).normalized();
      v.col(0) = n;
      v.col(1) = t.cross(n);
    }
    frames[e] = v;
  }
  return frames;
}

std::vector<Eigen::Matrix2d> partial_holonomies(const SampledCurve& curve,
                                                const std::vector<NormalFrame>& frames) {
  if (frames.size() != curve.size()) {
    throw Error(ErrorKind::DimensionMismatch, "need one normal frame per edge");
  }
  const std::size_t pairs = curve.size() / 2;
  std::vector<Eigen::Matrix2d> h;
  h.reserve(pairs + 1);
  h.push_back(Eigen::Matrix2d::Identity());
  for (std::size_t j = 0; j < pairs; ++j) {
    const Frame a = to_frame(frames[2 * j]);
    const Frame mid = to_frame(frames[2 * j + 1]);
    const Frame b = to_frame(frames[(2 * j + 2) % frames.size()]);
    const Eigen::Matrix2d step = transport::omega3(a, mid, b).matrix().real();
    h.push_back(step * h.back());
  }
  return h;
}

double holonomy_angle(const Eigen::Matrix2d& u, ThetaExtraction extraction) {
  double theta = extraction == ThetaExtraction::FirstRow
                     ? std::atan2(u(0, 1), u(0, 0))
                     : std::atan2(u(0, 1) - u(1, 0), u(0, 0) + u(1, 1));
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  if (theta >= 2.0 * std::numbers::pi) theta = 0.0;
  return theta;
}

TorsionResult fractional_torsion(const SampledCurve& curve, const std::vector<NormalFrame>& frames,
                                 ThetaExtraction extraction) {
  TorsionResult r;
  r.theta = holonomy_angle(partial_holonomies(curve, frames).back(), extraction);
  r.fractional = r.theta / (2.0 * std::numbers::pi);
  return r;
}

TorsionResult total_torsion(const SampledCurve& curve, TangentEstimate tangent,
                            ThetaExtraction extraction) {
  const auto frames = build_normal_frames(curve, {.mode = FrameMode::Frenet, .tangent = tangent});
  const auto h = partial_holonomies(curve, frames);
  TorsionResult r;
  r.theta = holonomy_angle(h.back(), extraction);
  r.fractional = r.theta / (2.0 * std::numbers::pi);
  long plus = 0;
  long minus = 0;
  for (std::size_t j = 0; j + 1 < h.size(); ++j) {
    const bool before = h[j](0, 1) >= 0.0;
    const bool after = h[j + 1](0, 1) >= 0.0;
    if (before == after) continue;
    if (std::abs(h[j](0, 0)) < kCrossingTolerance) {
      throw Error(ErrorKind::AmbiguousCrossing,
                  "partial holonomy crosses near a quarter turn at step " + std::to_string(j) +
                      "; refine the sampling");
    }
    if (h[j](0, 0) <= 0.0) continue;
    if (after) {
      ++plus;
    } else {
      ++minus;
    }
  }
  r.n_plus = plus;
  r.n_minus = minus;
  r.total = 2.0 * std::numbers::pi * static_cast<double>(plus - minus) + r.theta;
  return r;
}

double writhe(const TorsionResult& result, long self_linking) {
  if (!result.total) throw Error(ErrorKind::InvalidInput, "writhe needs the total torsion");
  return static_cast<double>(self_linking) - *result.total / (2.0 * std::numbers::pi);
}

}  // namespace induced::torsion
