// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "curves.hpp"

#include "induced/adhm.hpp"
#include "induced/oracle.hpp"
#include "induced/parallel.hpp"
#include "induced/torsion.hpp"
#include "induced/transport.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace induced;
using transport::compose_path;
using transport::error_norm;

namespace {

const std::vector<std::size_t> kN{6, 12, 24, 48, 96};

// Reference tables, rows k = 1..4, columns kN.
const double kPlain[4][5] = {
    {3.56e-1, 1.96e-1, 1.03e-1, 5.31e-2, 2.69e-2},
    {1.25e-1, 3.04e-2, 7.55e-3, 1.88e-3, 4.71e-4},
    {5.61e-3, 2.28e-3, 3.78e-4, 5.01e-5, 6.36e-6},
    {2.79e-2, 2.23e-3, 7.94e-5, 3.08e-6, 1.51e-7},
};
const double kNormalized[4][5] = {
    {1.23e-1, 3.03e-3, 7.54e-3, 1.88e-3, 4.71e-4},
    {1.23e-1, 3.03e-3, 7.54e-3, 1.88e-3, 4.71e-4},
    {4.30e-5, 6.50e-4, 4.27e-5, 2.64e-6, 1.65e-7},
    {9.80e-3, 4.39e-4, 3.52e-5, 2.19e-6, 1.36e-7},
};
constexpr double kOrder4At192 = 8.70e-9;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

double slope(const std::vector<double>& n, const std::vector<double>& e) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    mx += std::log(n[i]) / static_cast<double>(n.size());
    my += std::log(e[i]) / static_cast<double>(n.size());
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    sxy += (std::log(n[i]) - mx) * (std::log(e[i]) - my);
    sxx += (std::log(n[i]) - mx) * (std::log(n[i]) - mx);
  }
  return sxy / sxx;
}

double table_error(int k, bool normalized, std::size_t n) {
  return error_norm(compose_path(oracle::example_path(n), {.order = k, .normalized = normalized}),
                    oracle::example_exact_holonomy());
}

/// Compares every cell; returns the failing cells as text.
std::string compare_table(const double (&table)[4][5], bool normalized, std::size_t& checked) {
  std::ostringstream bad;
  for (int k = 1; k <= 4; ++k) {
    for (std::size_t j = 0; j < kN.size(); ++j) {
      const double e = table_error(k, normalized, kN[j]);
      const double ref = table[k - 1][j];
      ++checked;
      if (std::abs(e / ref - 1.0) > 0.02) {
        bad << " k=" << k << ",N=" << kN[j] << ":" << e << " vs " << ref;
      }
    }
  }
  return bad.str();
}

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome criterion1() {
  const auto t0 = Clock::now();
  std::size_t checked = 0;
  const std::string bad = compare_table(kPlain, false, checked);
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << checked << " cells, " << secs << " s";
  if (!bad.empty()) d << "; off by >2%:" << bad;
  return {bad.empty() && secs < 1.0, d.str()};
}

Outcome criterion2() {
  std::size_t checked = 0;
  const std::string bad = compare_table(kNormalized, true, checked);
  double worst = 0.0;
  for (std::size_t n : kN) {
    const auto path = oracle::example_path(n, oracle::GaugeMode::Randomized, n);
    const auto u1 = compose_path(path, {.order = 1, .normalized = true});
    const auto u2 = compose_path(path, {.order = 2, .normalized = true});
    worst = std::max(worst, max_abs(u1.matrix() - u2.matrix()));
  }
  std::ostringstream d;
  d << checked << " cells; max |U1^ - U2^| = " << worst;
  if (!bad.empty()) d << "; off by >2%:" << bad;
  return {bad.empty() && worst <= 1e-13, d.str()};
}

Outcome criterion3() {
  const std::vector<std::size_t> ns{12, 24, 48, 96};
  std::vector<double> x(ns.begin(), ns.end());
  bool ok = true;
  std::ostringstream d;
  for (int k = 1; k <= 4; ++k) {
    std::vector<double> e;
    for (std::size_t n : ns) e.push_back(table_error(k, false, n));
    const double s = slope(x, e);
    ok = ok && std::abs(s + k) <= 0.3;
    d << "Omega^" << k << " " << s << "; ";
  }
  std::vector<double> e;
  for (std::size_t n : ns) e.push_back(table_error(3, true, n));
  const double s = slope(x, e);
  ok = ok && std::abs(s + 4) <= 0.4;
  d << "Omega_hat^3 " << s;
  return {ok, d.str()};
}

Outcome criterion4() {
  const double e = table_error(4, true, 192);
  std::ostringstream d;
  d << "E = " << e << " vs " << kOrder4At192 << " (" << 100 * (e / kOrder4At192 - 1) << "%)";
  return {e <= 1e-8 && std::abs(e / kOrder4At192 - 1.0) <= 0.05, d.str()};
}

Outcome criterion5() {
  const auto t0 = Clock::now();
  const auto base = oracle::example_path(48);
  std::mt19937_64 rng(2024);
  double interior = 0.0;
  double covariant = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + trial % 4;
    const bool normalized = (trial / 4) % 2 == 1;
    const transport::ComposeOptions opts{.order = k, .normalized = normalized};
    const ComplexMatrix reference = compose_path(base, opts).matrix();
    std::vector<Frame> frames = base.samples();
    for (std::size_t i = 1; i + 1 < frames.size(); ++i) {
      frames[i] = frames[i].gauged(random_unitary(2, rng));
    }
    interior = std::max(
        interior, max_abs(compose_path(transport::FramePath(frames), opts).matrix() - reference));
    const ComplexMatrix g0 = random_unitary(2, rng);
    const ComplexMatrix g1 = random_unitary(2, rng);
    frames.front() = frames.front().gauged(g0);
    frames.back() = frames.back().gauged(g1);
    covariant = std::max(covariant, max_abs(compose_path(transport::FramePath(frames), opts).matrix() -
                                            g1.adjoint() * reference * g0));
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "100 trials, interior " << interior << ", endpoint " << covariant << ", " << secs << " s";
  return {interior <= 1e-12 && covariant <= 1e-12 && secs < 5.0, d.str()};
}

Outcome criterion6() {
  const auto r = transport::verify_coefficient_systems();
  std::ostringstream d;
  d << "7x2 residual " << r.order3_residual << ", 14x4 residual " << r.order4_residual;
  return {r.ok && r.order3_residual <= 1e-14 && r.order4_residual <= 1e-14, d.str()};
}

Outcome criterion7() {
  const auto data = adhm::ADHMData::charge_one();
  double worst = 0.0;
  for (int k = 1; k <= 4; ++k) {
    for (bool normalized : {false, true}) {
      adhm::HolonomySettings s;
      s.order = k;
      s.normalized = normalized;
      s.intervals = 96;
      const auto u = adhm::line_holonomy(data, Vec3(0, 1, 0), s);
      const auto ref = compose_path(oracle::example_path(96), {.order = k, .normalized = normalized});
      worst = std::max(worst, max_abs(u.matrix() - ref.matrix()));
    }
  }
  std::ostringstream d;
  d << "N=96, k=1..4, plain and normalized: max deviation " << worst;
  return {worst <= 1e-12, d.str()};
}

Outcome criterion8() {
  const auto t0 = Clock::now();
  adhm::GridSpec grid;
  grid.origin = Vec3(-2, -2, -2);
  grid.spacing = 1.0;
  grid.shape = {5, 5, 5};
  adhm::HolonomySettings s;
  s.intervals = 96;
  const auto field = adhm::skyrme_field(adhm::ADHMData::charge_one(), grid, s, default_jobs());
  double unitarity = 0.0;
  double det = 0.0;
  for (const auto& u : field.u) {
    unitarity = std::max(unitarity, (u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm());
    det = std::max(det, std::abs(u.determinant() - 1.0));
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << field.u.size() << " points, |U^dag U - Id| " << unitarity << ", |det U - 1| " << det << ", "
    << secs << " s";
  return {field.u.size() == 125 && unitarity <= 1e-8 && det <= 1e-8 && secs < 10.0, d.str()};
}

Outcome criterion9() {
  using namespace torsion;
  const auto circle = test::circle(1.0).sample(256);
  const double circle_theta = test::angle_distance(
      fractional_torsion(circle, build_normal_frames(circle)).theta, 0.0);

  const auto sphere = test::spherical_curve(256);
  const double f = fractional_torsion(sphere, build_normal_frames(sphere)).fractional;
  const double sphere_frac = std::min(f, 1.0 - f);

  const auto knot = test::torus_curve(2.0, 0.7, 2, 3);
  const double exact = test::mod_two_pi(knot.total_torsion(100000));
  std::vector<double> counts, first_row, rotation;
  for (std::size_t n : {64u, 128u, 256u, 512u}) {
    const auto c = knot.sample(n);
    const auto frames = build_normal_frames(c);
    counts.push_back(static_cast<double>(n));
    first_row.push_back(test::angle_distance(
        fractional_torsion(c, frames, ThetaExtraction::FirstRow).theta, exact));
    rotation.push_back(test::angle_distance(fractional_torsion(c, frames).theta, exact));
  }
  const double s3 = slope(counts, first_row);
  const double s_rot = slope(counts, rotation);
  std::ostringstream d;
  d << "circle " << circle_theta << ", sphere " << sphere_frac << ", knot slope (first-row) " << s3
    << " [rotation-part " << s_rot << ", error at 2N=512 " << rotation.back() << "]";
  return {circle_theta <= 1e-10 && sphere_frac <= 1e-3 && std::abs(s3 + 3.0) <= 0.4, d.str()};
}

Outcome criterion10() {
  const auto path = oracle::example_path(96, oracle::GaugeMode::Randomized, 10);
  const ComplexMatrix exact = oracle::example_exact_holonomy();
  const double naive = error_norm(oracle::naive_rk4(path, oracle::example_frame(M_PI / 2)), exact);
  const double omega2 = error_norm(compose_path(path, {.order = 2}), exact);
  std::ostringstream d;
  d << "naive " << naive << ", Omega^2 " << omega2 << ", ratio " << naive / omega2;
  return {naive >= 10 * omega2, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{
      criterion1, criterion2, criterion3, criterion4,  criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %zu: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
