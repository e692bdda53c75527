#pragma once

// Total torsion of a closed polygonal space curve from the transport of its
// normal bundle. The fractional part of T/2pi comes from the order-3
// holonomy of any normal frame field; the integer part needs frames close to
// (normal, binormal) and counts how often the partial holonomy winds past 0.

#include "induced/linalg.hpp"

#include <optional>
#include <vector>

namespace induced::torsion {

using NormalFrame = Eigen::Matrix<double, 3, 2>;

/// Closed curve x_0 .. x_{2N-1}; indices wrap modulo 2N.
class SampledCurve {
 public:
  /// Throws InvalidInput for fewer than 4 or an odd number of points or a
  /// non-finite coordinate, DegenerateFrame for repeated consecutive points.
  explicit SampledCurve(std::vector<Vec3> points);

  const std::vector<Vec3>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Vec3& point(long i) const;
  /// u_i = x_{i+1} - x_i.
  Vec3 edge(long i) const;
  /// Same points in the opposite order, starting from x_{2N-1}.
  SampledCurve reversed() const;

 private:
  std::vector<Vec3> points_;
};

enum class FrameMode {
  Arbitrary,  // any orthonormal pair orthogonal to the tangent estimate
  Frenet,     // Gram-Schmidt of (tangent, u_{i+1} - u_{i-1}, cross product)
};

enum class TangentEstimate {
  Chord,        // u_i itself
  FourthOrder,  // derivative at the edge midpoint from x_{i-1} .. x_{i+2}
};

struct FrameOptions {
  FrameMode mode = FrameMode::Arbitrary;
  TangentEstimate tangent = TangentEstimate::FourthOrder;
};

/// Unit tangent estimate attached to edge i.
Vec3 edge_tangent(const SampledCurve& curve, long i, TangentEstimate estimate);

/// One 3x2 frame per edge, orthonormal and orthogonal to the edge tangent
/// estimate. Frenet columns approximate (n, b) with (t, n, b) right-handed.
/// Throws DegenerateFrame (message names the edge) where the curve is
/// locally straight in Frenet mode.
std::vector<NormalFrame> build_normal_frames(const SampledCurve& curve,
                                             const FrameOptions& options = {});

/// How theta is read off U = H_{N-1}.
enum class ThetaExtraction {
  /// cos, sin proportional to (U11 + U22, U12 - U21). Invariant under
  /// rotations of the normal frames; error O(N^-4) with fourth-order tangents.
  RotationPart,
  /// cos, sin proportional to (U11, U12). Equal to the above for an exact
  /// rotation; otherwise picks up the O(N^-3) non-rotational part of U, which
  /// depends on the frame at edge 0.
  FirstRow,
};

struct TorsionResult {
  double theta = 0.0;       // in [0, 2pi)
  double fractional = 0.0;  // theta / 2pi
  std::optional<long> n_plus;
  std::optional<long> n_minus;
  std::optional<double> total;  // 2pi (n_plus - n_minus) + theta
  int order = 3;
};

/// H_j = Omega^3_j ... Omega^3_0 for j = -1 .. N-1 (entry 0 is the identity),
/// with Omega^3_j built from the frames of edges 2j, 2j+1, 2j+2.
/// Throws SingularOverlap for adjacent normal planes that are nearly
/// orthogonal.
std::vector<Eigen::Matrix2d> partial_holonomies(const SampledCurve& curve,
                                                const std::vector<NormalFrame>& frames);

/// theta in [0, 2pi) from U = H_{N-1}.
double holonomy_angle(const Eigen::Matrix2d& u, ThetaExtraction extraction);

TorsionResult fractional_torsion(const SampledCurve& curve, const std::vector<NormalFrame>& frames,
                                 ThetaExtraction extraction = ThetaExtraction::RotationPart);

/// Fractional part plus the winding count from Frenet-type frames.
/// Throws AmbiguousCrossing when a sign change of (H_j)12 happens with
/// |(H_j)11| below 1e-9.
TorsionResult total_torsion(const SampledCurve& curve,
                            TangentEstimate tangent = TangentEstimate::FourthOrder,
                            ThetaExtraction extraction = ThetaExtraction::RotationPart);

/// Wr = L - T / 2pi. Requires `result.total`.
double writhe(const TorsionResult& result, long self_linking);

}  // namespace induced::torsion
