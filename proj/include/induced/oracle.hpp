#pragma once

// Ground truth for the transport schemes: the rank-2 example bundle
// E_t = ker Gamma(t) in C^4 with closed-form holonomy, a self-convergent
// dense reference, and the naive finite-difference + RK4 integrator.

#include "induced/linalg.hpp"
#include "induced/transport.hpp"

#include <functional>
#include <optional>
#include <random>

namespace induced::oracle {

/// How interior frames of a sampled path are chosen.
enum class GaugeMode {
  Kernel,      // whatever the kernel factorization returns
  Randomized,  // kernel basis times an independent Haar unitary per sample
  Smooth,      // kernel bases aligned sample to sample (polar projection)
};

/// Gamma(t) = [[cos t, 0, sin t, cos t], [0, cos t, -cos t, sin t]].
ComplexMatrix example_gamma(double t);

/// Exact Omega(pi/2, -pi/2) of the example bundle in the (e1, e2) endpoint basis.
ComplexMatrix example_exact_holonomy();

/// Orthonormal kernel frame of Gamma(t). At t = +-pi/2 with endpoint_gauge
/// set, returns exactly (e1 e2). A non-null rng applies a random unitary gauge.
Frame example_frame(double t, bool endpoint_gauge = true, std::mt19937_64* rng = nullptr);

/// N+1 equispaced samples t_i = -pi/2 + i pi/N with the (e1 e2) endpoint basis.
transport::FramePath example_path(std::size_t intervals, GaugeMode mode = GaugeMode::Kernel,
                                  std::uint64_t seed = 0);

/// A frame-valued function on [begin, end]; endpoint frames fix the gauge in
/// which a transport operator is expressed.
struct FrameFamily {
  std::function<Frame(double)> frame;
  double begin = 0.0;
  double end = 1.0;
};

FrameFamily example_family();

transport::FramePath sample_family(const FrameFamily& family, std::size_t intervals,
                                   GaugeMode mode = GaugeMode::Kernel, std::uint64_t seed = 0);

/// Re-gauges every sample after the first by the unitary polar factor of its
/// overlap with the previous one, so the result varies smoothly with the
/// parameter. The first sample is unchanged; the last one generally is not.
transport::FramePath smooth_gauge(const transport::FramePath& path);

/// Normalized order-2 self-composition at n_fine intervals; error O(n_fine^-2).
ComplexMatrix dense_reference(const FrameFamily& family, std::size_t n_fine);

/// Classical RK4 on Omega' = -A Omega with A = v^dagger v' from central
/// differences of the sampled frames (one-sided at the ends). The path must
/// hold 2n+1 samples: RK4 stage points at spacing h/2. The result is expressed
/// in the path's first frame and in `end_frame` (default: the path's last
/// frame, which must span the same fibre). It depends on the interior gauge.
ComplexMatrix naive_rk4(const transport::FramePath& path,
                        const std::optional<Frame>& end_frame = std::nullopt);

}  // namespace induced::oracle
