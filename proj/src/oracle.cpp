#include "induced/oracle.hpp"

#include "induced/error.hpp"

#include <cmath>
#include <numbers>

namespace induced::oracle {

using transport::FramePath;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

Frame standard_pair() {
  ComplexMatrix e = ComplexMatrix::Zero(4, 2);
  e(0, 0) = 1.0;
  e(1, 1) = 1.0;
  return Frame(std::move(e));
}

bool at_endpoint(double t) { return std::abs(std::abs(t) - kHalfPi) < 1e-15; }

}  // namespace

ComplexMatrix example_gamma(double t) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  ComplexMatrix g(2, 4);
  g << c, 0.0, s, c,  //
      0.0, c, -c, s;
  return g;
}

ComplexMatrix example_exact_holonomy() {
  const double angle = std::numbers::pi / std::numbers::sqrt2;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  ComplexMatrix u(2, 2);
  u << -c, -s,  //
      s, -c;
  return u;
}

Frame example_frame(double t, bool endpoint_gauge, std::mt19937_64* rng) {
  if (endpoint_gauge && at_endpoint(t)) return standard_pair();
  Frame f = orthonormal_kernel_basis(example_gamma(t), 2);
  if (rng != nullptr) return f.gauged(random_unitary(2, *rng));
  return f;
}

FrameFamily example_family() {
  return FrameFamily{[](double t) { return example_frame(t, true); }, -kHalfPi, kHalfPi};
}

FramePath sample_family(const FrameFamily& family, std::size_t intervals, GaugeMode mode,
                        std::uint64_t seed) {
  if (intervals < 1) throw Error(ErrorKind::InvalidInput, "need at least one interval");
  std::mt19937_64 rng(seed);
  std::vector<Frame> frames;
  std::vector<double> params;
  frames.reserve(intervals + 1);
  params.reserve(intervals + 1);
  const double width = family.end - family.begin;
  for (std::size_t i = 0; i <= intervals; ++i) {
    // Hit both endpoints exactly so endpoint gauges are recognized.
    const double t = i == intervals ? family.end
                                    : family.begin + width * static_cast<double>(i) /
                                                         static_cast<double>(intervals);
    Frame f = family.frame(t);
    if (mode == GaugeMode::Randomized && i != 0 && i != intervals) {
      f = f.gauged(random_unitary(f.rank(), rng));
    }
    frames.push_back(std::move(f));
    params.push_back(t);
  }
  FramePath path(std::move(frames), std::move(params));
  if (mode == GaugeMode::Smooth) return smooth_gauge(path);
  return path;
}

FramePath example_path(std::size_t intervals, GaugeMode mode, std::uint64_t seed) {
  return sample_family(example_family(), intervals, mode, seed);
}

FramePath smooth_gauge(const FramePath& path) {
  const auto& in = path.samples();
  std::vector<Frame> out;
  out.reserve(in.size());
  out.push_back(in.front());
  for (std::size_t i = 1; i < in.size(); ++i) {
    const ComplexMatrix overlap = in[i].basis().adjoint() * out.back().basis();
    out.push_back(in[i].gauged(unitary_polar_factor(overlap)));
  }
  return FramePath(std::move(out), path.parameters());
}

ComplexMatrix dense_reference(const FrameFamily& family, std::size_t n_fine) {
  const FramePath path = sample_family(family, n_fine, GaugeMode::Kernel);
  return transport::compose_path(path, {.order = 2, .normalized = true}).matrix();
}

ComplexMatrix naive_rk4(const FramePath& path, const std::optional<Frame>& end_frame) {
  const auto& v = path.samples();
  if (v.size() < 3 || v.size() % 2 == 0) {
    throw Error(ErrorKind::IncompatiblePartition,
                "naive RK4 needs 2n+1 samples (stage points at half steps)");
  }
  const std::size_t nodes = v.size();
  const double delta = path.parameters().empty()
                           ? 1.0 / static_cast<double>(nodes - 1)
                           : (path.parameters().back() - path.parameters().front()) /
                                 static_cast<double>(nodes - 1);

  std::vector<ComplexMatrix> a(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    ComplexMatrix dv;
    if (j == 0) {
      dv = (-3.0 * v[0].basis() + 4.0 * v[1].basis() - v[2].basis()) / (2.0 * delta);
    } else if (j == nodes - 1) {
      dv = (3.0 * v[j].basis() - 4.0 * v[j - 1].basis() + v[j - 2].basis()) / (2.0 * delta);
    } else {
      dv = (v[j + 1].basis() - v[j - 1].basis()) / (2.0 * delta);
    }
    a[j] = v[j].basis().adjoint() * dv;
  }

  const int m = path.rank();
  const double h = 2.0 * delta;
  ComplexMatrix y = ComplexMatrix::Identity(m, m);
  for (std::size_t j = 0; j + 2 < nodes; j += 2) {
    const ComplexMatrix k1 = -a[j] * y;
    const ComplexMatrix k2 = -a[j + 1] * (y + 0.5 * h * k1);
    const ComplexMatrix k3 = -a[j + 1] * (y + 0.5 * h * k2);
    const ComplexMatrix k4 = -a[j + 2] * (y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (end_frame) {
    if (end_frame->ambient_dim() != path.ambient_dim() || end_frame->rank() != m) {
      throw Error(ErrorKind::DimensionMismatch, "end frame shape differs from the path");
    }
    y = end_frame->basis().adjoint() * v.back().basis() * y;
  }
  return y;
}

}  // namespace induced::oracle
