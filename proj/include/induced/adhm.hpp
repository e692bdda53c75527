#pragma once

// ADHM instantons and the holonomy pipeline built on them: the operator
// Delta(x), its kernel frames along x4-lines, the Skyrme field U(x1,x2,x3)
// as the transport from x4 = -inf to +inf, and vector-meson integrals in the
// gauge where the x4 component of the connection vanishes.
//
// Lines are parametrized by x4 = tan t with t in [-pi/2, pi/2]; the end
// samples use the fixed boundary frame (1; 0; ...; 0).

#include "induced/linalg.hpp"
#include "induced/transport.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace induced::adhm {

using Vec4 = Eigen::Vector4d;  // (x1, x2, x3, x4)

struct ADHMData {
  int charge = 0;
  QuatMatrix L;  // 1 x n
  QuatMatrix M;  // n x n, symmetric

  /// Checks shapes, finiteness and symmetry of M (to `tolerance`).
  /// Throws InvalidInput.
  void check(double tolerance = 1e-12) const;

  /// L = 1, M = 0.
  static ADHMData charge_one();
};

struct GridSpec {
  Vec3 origin = Vec3::Zero();
  double spacing = 1.0;
  std::array<std::size_t, 3> shape{1, 1, 1};

  /// Throws InvalidInput unless spacing > 0 (finite) and every extent >= 1.
  void check() const;
  std::size_t size() const { return shape[0] * shape[1] * shape[2]; }
  /// Linear index with k fastest: (i * ny + j) * nz + k.
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const;
  std::array<std::size_t, 3> unravel(std::size_t linear) const;
  Vec3 point(std::size_t linear) const;
};

struct HolonomySettings {
  int order = 2;
  bool normalized = true;
  std::size_t intervals = 96;
  /// When set, every interior kernel frame is multiplied by an independent
  /// random unitary drawn from this seed. Results must not change.
  std::optional<std::uint64_t> gauge_seed;

  /// Throws InvalidInput / IncompatiblePartition.
  void check() const;
};

/// Delta(x) realized as a 2(n+1) x 2n complex matrix.
ComplexMatrix build_delta(const ADHMData& data, const Vec4& x);

/// (1; 0; ...; 0) as a 2(n+1) x 2 frame.
Frame boundary_frame(int charge);

/// Samples t_i = -pi/2 + i pi/N with frames spanning ker Delta(x3, tan t)^dagger
/// (computed from cos t Delta^dagger); boundary_frame at both ends.
/// Throws KernelDimensionMismatch where the data is not a valid instanton.
transport::FramePath line_frames(const ADHMData& data, const Vec3& x3,
                                 const HolonomySettings& settings);

/// U(x1, x2, x3) in the boundary-frame basis.
transport::TransportOp line_holonomy(const ADHMData& data, const Vec3& x3,
                                     const HolonomySettings& settings);

/// Transport from x4 = -inf to every step boundary of the line grid, each
/// expressed in that sample's frame (normalized when the settings say so).
/// Entry s sits at sample s*(k-1) (sample s for k = 1); the last entry is
/// bit-identical to line_holonomy.
struct GaugeTrack {
  transport::FramePath frames;
  std::vector<double> t;             // parameter at each step boundary
  std::vector<ComplexMatrix> gauge;  // g at each step boundary
};
GaugeTrack sutcliffe_track(const ADHMData& data, const Vec3& x3, const HolonomySettings& settings);

/// g(x3, x4 = tan t): transport from -inf to t, in the kernel frame at t.
/// When t is a step boundary of the settings' grid the value is read from
/// sutcliffe_track; otherwise [-pi/2, t] is sampled with a step no coarser
/// than the settings' one. t = -pi/2 gives the identity.
ComplexMatrix sutcliffe_gauge(const ADHMData& data, const Vec3& x3, double t,
                              const HolonomySettings& settings);

/// The field U on a grid, entries in GridSpec::index order.
struct SkyrmeField {
  GridSpec grid;
  std::vector<Eigen::Matrix2cd> u;
};

/// Evaluates line_holonomy at every grid point on `jobs` workers. A failure
/// is rethrown with the grid index prepended (same error kind).
SkyrmeField skyrme_field(const ADHMData& data, const GridSpec& grid,
                         const HolonomySettings& settings, unsigned jobs = 1);

/// Real profile phi(x4) for the vector-meson integral.
struct Profile {
  std::function<double(double)> phi;
  std::string name;
};

/// exp(-x4^2)/sqrt(pi). A smoke-test profile with no physical meaning.
Profile gaussian_profile();
Profile zero_profile();
/// Piecewise-linear through (x4, phi) nodes with strictly increasing x4,
/// zero outside the node range. Throws InvalidInput.
Profile tabulated_profile(std::vector<double> x4, std::vector<double> phi, std::string name);

struct MesonSettings {
  /// Central-difference step in x1, x2, x3. Zero means spacing / 10.
  double fd_step = 0.0;
};

/// W_i = integral of phi(x4) A~_i dx4 over the line, i = 1..3, with
/// A~_i = anti-hermitian part of v~^dagger dv~/dx^i and v~ = v g. The x4
/// integral becomes an integral over t with the sec^2 t Jacobian, evaluated
/// by composite Simpson on the step boundaries (their count minus one must
/// be even). The end samples contribute zero, so phi must decay at infinity.
/// Throws ProfileDomainError if phi is not finite at a node.
std::array<Eigen::Matrix2cd, 3> vector_meson(const ADHMData& data, const Vec3& x3,
                                             const Profile& profile, double fd_step,
                                             const HolonomySettings& settings);

struct VectorMesonField {
  GridSpec grid;
  std::vector<std::array<Eigen::Matrix2cd, 3>> w;
};

VectorMesonField vector_meson_field(const ADHMData& data, const GridSpec& grid,
                                    const Profile& profile, const HolonomySettings& settings,
                                    const MesonSettings& meson = {}, unsigned jobs = 1);

struct ValidationReport {
  bool symmetric = false;
  double symmetry_residual = 0.0;
  /// Largest quaternion-imaginary magnitude of an entry of Delta^dagger Delta,
  /// divided by max(1, largest entry magnitude) at that point.
  double worst_imaginary = 0.0;
  /// Smallest |det| of the real part of Delta^dagger Delta.
  double min_abs_det = 0.0;
  std::size_t points_checked = 0;
  bool ok = false;
};

/// Checks symmetry of M and that Delta^dagger Delta is real and invertible at
/// the origin plus `audit_points` random points. Never throws for bad data.
ValidationReport validate_adhm(const ADHMData& data, std::size_t audit_points = 16,
                               std::uint64_t seed = 1, double tolerance = 1e-10);

}  // namespace induced::adhm
