#include "induced/cli.hpp"

#include "induced/adhm.hpp"
#include "induced/error.hpp"
#include "induced/io.hpp"
#include "induced/oracle.hpp"
#include "induced/parallel.hpp"
#include "induced/torsion.hpp"
#include "induced/transport.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

namespace induced::cli {

namespace {

using io::Config;
using io::format_double;

constexpr double kAuditTolerance = 1e-10;

struct Common {
  std::string output;
  unsigned jobs = 0;
};

struct ConvergenceArgs {
  std::vector<std::size_t> intervals{6, 12, 24, 48, 96};
  std::vector<int> orders{1, 2, 3, 4};
  bool only_normalized = false;
  bool only_plain = false;
  std::string gauge = "kernel";
  std::uint64_t seed = 0;
  std::size_t fit_min = 12;
  std::string metric = "root";
};

struct AdhmArgs {
  std::string input;
  std::string grid;
  int order = 2;
  std::size_t intervals = 96;
  bool unnormalized = false;
  std::string profile;
  double fd_step = 0.0;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::size_t audit = 16;
};

struct TorsionArgs {
  std::string input;
  bool frenet = false;
  std::string tangent = "fourth";
  std::string extraction = "rotation";
  std::optional<long> self_linking;
  bool audit = false;
  std::uint64_t seed = 1;
};

struct BenchArgs {
  int order = 2;
  std::vector<std::size_t> intervals{24, 48, 96, 192};
  std::string gauge = "both";
  std::uint64_t seed = 0;
  unsigned repeats = 3;
  bool unnormalized = false;
  bool no_timing = false;
};

std::string join(const std::vector<std::size_t>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(values[i]);
  }
  return s;
}

bool compatible(std::size_t intervals, int order) {
  try {
    transport::check_partition(intervals, order);
    return true;
  } catch (const Error&) {
    return false;
  }
}

/// Least-squares slope of log(err) against log(N); nullopt with fewer than
/// two usable points.
std::optional<double> fit_slope(const std::vector<std::size_t>& n,
                                const std::vector<std::optional<double>>& err, std::size_t n_min) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < n_min || !err[i] || !(*err[i] > 0.0) || !std::isfinite(*err[i])) continue;
    xs.push_back(std::log(static_cast<double>(n[i])));
    ys.push_back(std::log(*err[i]));
  }
  if (xs.size() < 2) return std::nullopt;
  const double count = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / count;
    my += ys[i] / count;
  }
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

oracle::GaugeMode gauge_mode(const std::string& name) {
  if (name == "randomized") return oracle::GaugeMode::Randomized;
  if (name == "smooth") return oracle::GaugeMode::Smooth;
  return oracle::GaugeMode::Kernel;
}

/// Rewrites an operator expressed in the path's last frame into the fixed
/// (e1 e2) basis at t = pi/2. Identity for paths that end in that basis.
ComplexMatrix to_endpoint_basis(const transport::FramePath& path, const ComplexMatrix& u) {
  const Frame endpoint = oracle::example_frame(std::numbers::pi / 2);
  return endpoint.basis().adjoint() * path.samples().back().basis() * u;
}

void run_convergence(const ConvergenceArgs& a, unsigned jobs, std::ostream& out) {
  for (std::size_t n : a.intervals) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "--intervals entries must be positive");
  }
  struct Row {
    int order;
    bool normalized;
  };
  std::vector<Row> rows;
  for (int k : a.orders) {
    if (!a.only_normalized) rows.push_back({k, false});
    if (!a.only_plain) rows.push_back({k, true});
  }
  const std::size_t cols = a.intervals.size();
  std::vector<std::optional<double>> cells(rows.size() * cols);
  const ComplexMatrix exact = oracle::example_exact_holonomy();
  const oracle::GaugeMode mode = gauge_mode(a.gauge);
  const bool root = a.metric == "root";

  parallel_for(cells.size(), jobs, [&](std::size_t idx) {
    const Row& row = rows[idx / cols];
    const std::size_t n = a.intervals[idx % cols];
    if (!compatible(n, row.order)) return;
    const auto path = oracle::example_path(n, mode, a.seed);
    const auto op = transport::compose_path(path, {.order = row.order, .normalized = row.normalized});
    const ComplexMatrix u = to_endpoint_basis(path, op.matrix());
    cells[idx] = root ? transport::error_norm(u, exact) : transport::error_metric(u, exact);
  });

  Config config{{"command", "convergence"},
                {"intervals", join(a.intervals)},
                {"gauge", a.gauge},
                {"seed", std::to_string(a.seed)},
                {"metric", root ? "sqrt(Tr(D D^dagger)/2)" : "Tr(D D^dagger)/2"},
                {"fit_min", std::to_string(a.fit_min)}};
  io::write_header(out, "convergence", config);
  out << "method,order,normalized";
  for (std::size_t n : a.intervals) out << ",err_" << n;
  out << ",slope\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    out << (row.normalized ? "Omega_hat" : "Omega") << ',' << row.order << ','
        << (row.normalized ? "yes" : "no");
    std::vector<std::optional<double>> line(cells.begin() + static_cast<long>(r * cols),
                                            cells.begin() + static_cast<long>((r + 1) * cols));
    for (const auto& c : line) out << ',' << (c ? format_double(*c) : "");
    const auto slope = fit_slope(a.intervals, line, a.fit_min);
    out << ',' << (slope ? format_double(*slope) : "") << '\n';
  }
}

adhm::Profile select_profile(const std::string& spec) {
  if (spec == "gaussian") return adhm::gaussian_profile();
  if (spec == "zero") return adhm::zero_profile();
  return io::load_profile_csv(spec);
}

int run_adhm(const AdhmArgs& a, unsigned jobs, std::ostream& out, std::ostream& err) {
  const adhm::GridSpec grid = io::parse_grid(a.grid);
  adhm::HolonomySettings settings;
  settings.order = a.order;
  settings.intervals = a.intervals;
  settings.normalized = !a.unnormalized;
  settings.gauge_seed = a.seed;
  settings.check();
  std::optional<adhm::Profile> profile;
  if (!a.profile.empty()) profile = select_profile(a.profile);
  const adhm::ADHMData data = io::load_adhm_json(a.input);

  const auto report = adhm::validate_adhm(data, a.audit, a.seed.value_or(1));
  err << "adhm validation: symmetric=" << (report.symmetric ? "yes" : "no")
      << " symmetry_residual=" << format_double(report.symmetry_residual)
      << " worst_imaginary=" << format_double(report.worst_imaginary)
      << " min_abs_det=" << format_double(report.min_abs_det)
      << " points=" << report.points_checked << '\n';
  if (!report.ok) {
    err << "error: ADHM data fails validation\n";
    return kUsage;
  }

  const auto field = adhm::skyrme_field(data, grid, settings, jobs);
  std::optional<adhm::VectorMesonField> mesons;
  if (profile) {
    mesons = adhm::vector_meson_field(data, grid, *profile, settings, {.fd_step = a.fd_step}, jobs);
  }

  Config config{{"command", "adhm"},
                {"input", a.input},
                {"charge", std::to_string(data.charge)},
                {"order", std::to_string(settings.order)},
                {"normalized", settings.normalized ? "yes" : "no"},
                {"intervals", std::to_string(settings.intervals)},
                {"gauge_seed", a.seed ? std::to_string(*a.seed) : "none"},
                {"profile", profile ? profile->name : "none"}};
  if (profile) {
    config.emplace_back("fd_step", format_double(a.fd_step > 0.0 ? a.fd_step : grid.spacing / 10));
  }
  const adhm::VectorMesonField* w = mesons ? &*mesons : nullptr;
  if (a.format == "binary") {
    io::write_field_binary(out, config, field, w);
  } else {
    io::write_field_csv(out, config, field, w);
  }
  return kOk;
}

torsion::TorsionResult torsion_with_rotations(const torsion::SampledCurve& curve,
                                              std::vector<torsion::NormalFrame> frames,
                                              std::uint64_t seed,
                                              torsion::ThetaExtraction extraction) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (auto& f : frames) {
    const double a = angle(rng);
    Eigen::Matrix2d r;
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    f = f * r;
  }
  return torsion::fractional_torsion(curve, frames, extraction);
}

int run_torsion(const TorsionArgs& a, std::ostream& out, std::ostream& err) {
  if (a.self_linking && !a.frenet) {
    throw Error(ErrorKind::InvalidInput, "--self-linking needs --frenet (total torsion)");
  }
  const auto tangent = a.tangent == "chord" ? torsion::TangentEstimate::Chord
                                            : torsion::TangentEstimate::FourthOrder;
  const auto extraction = a.extraction == "first-row" ? torsion::ThetaExtraction::FirstRow
                                                      : torsion::ThetaExtraction::RotationPart;
  const torsion::SampledCurve curve = io::load_curve_csv(a.input);
  const torsion::FrameOptions options{
      .mode = a.frenet ? torsion::FrameMode::Frenet : torsion::FrameMode::Arbitrary,
      .tangent = tangent};
  const auto frames = torsion::build_normal_frames(curve, options);
  const torsion::TorsionResult result = a.frenet ? torsion::total_torsion(curve, tangent, extraction)
                                                 : torsion::fractional_torsion(curve, frames, extraction);

  Config config{{"command", "torsion"},
                {"input", a.input},
                {"samples", std::to_string(curve.size())},
                {"frames", a.frenet ? "frenet" : "arbitrary"},
                {"tangent", a.tangent},
                {"extraction", a.extraction}};
  std::optional<double> w;
  if (a.self_linking) {
    w = torsion::writhe(result, *a.self_linking);
    config.emplace_back("self_linking", std::to_string(*a.self_linking));
  }
  bool audit_failed = false;
  if (a.audit) {
    const auto rerun = torsion_with_rotations(curve, frames, a.seed, extraction);
    const double d = std::abs(std::remainder(rerun.theta - result.theta, 2.0 * std::numbers::pi));
    config.emplace_back("audit_seed", std::to_string(a.seed));
    config.emplace_back("audit_difference", format_double(d));
    if (!(d <= kAuditTolerance)) {
      err << "error: gauge audit changed theta by " << format_double(d) << '\n';
      audit_failed = true;
    }
  }
  io::write_torsion_result(out, config, result, w);
  return audit_failed ? kNumerical : kOk;
}

void run_bench(const BenchArgs& a, std::ostream& out) {
  for (std::size_t n : a.intervals) {
    if (n < 2 || n % 2 != 0) {
      throw Error(ErrorKind::IncompatiblePartition,
                  "N=" + std::to_string(n) + " must be even (RK4 uses half-step stage points)");
    }
    transport::check_partition(n, a.order);
  }
  std::vector<std::string> gauges;
  if (a.gauge == "both" || a.gauge == "smooth") gauges.emplace_back("smooth");
  if (a.gauge == "both" || a.gauge == "randomized") gauges.emplace_back("randomized");

  const ComplexMatrix exact = oracle::example_exact_holonomy();
  const Frame endpoint = oracle::example_frame(std::numbers::pi / 2);
  const bool normalized = !a.unnormalized;
  using Clock = std::chrono::steady_clock;

  // Wall time of the best repeat; frame sampling is shared by both methods
  // and excluded.
  auto timed = [&](auto&& body) {
    ComplexMatrix result;
    double best = 0.0;
    for (unsigned r = 0; r < std::max(1u, a.repeats); ++r) {
      const auto t0 = Clock::now();
      result = body();
      const double s = std::chrono::duration<double>(Clock::now() - t0).count();
      if (r == 0 || s < best) best = s;
    }
    return std::pair{result, best};
  };

  Config config{{"command", "bench"},
                {"order", std::to_string(a.order)},
                {"normalized", normalized ? "yes" : "no"},
                {"intervals", join(a.intervals)},
                {"gauge", a.gauge},
                {"seed", std::to_string(a.seed)},
                {"repeats", std::to_string(a.repeats)},
                {"timing", a.no_timing ? "off" : "wall seconds, best repeat"}};
  io::write_header(out, "bench", config);
  out << "method,order,gauge,intervals,error,seconds\n";
  const std::string method = normalized ? "Omega_hat" : "Omega";
  for (const auto& g : gauges) {
    for (std::size_t n : a.intervals) {
      const auto path = oracle::example_path(n, gauge_mode(g), a.seed);
      const auto [u, tu] = timed([&] {
        return to_endpoint_basis(
            path, transport::compose_path(path, {.order = a.order, .normalized = normalized}).matrix());
      });
      const auto [v, tv] = timed([&] { return oracle::naive_rk4(path, endpoint); });
      auto secs = [&](double s) { return a.no_timing ? std::string() : format_double(s); };
      out << method << ',' << a.order << ',' << g << ',' << n << ','
          << format_double(transport::error_norm(u, exact)) << ',' << secs(tu) << '\n';
      out << "naive_rk4,4," << g << ',' << n << ','
          << format_double(transport::error_norm(v, exact)) << ',' << secs(tv) << '\n';
    }
  }
}

int exit_code_for(ErrorKind kind) {
  if (kind == ErrorKind::Io) return kIo;
  if (is_numerical(kind)) return kNumerical;
  return kUsage;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parallel transport of induced connections: convergence tables, ADHM "
               "holonomy fields, total torsion of curves and a naive-integrator benchmark."};
  app.name("induced-transport");
  app.require_subcommand(1);

  Common common;
  common.jobs = default_jobs();
  auto add_common = [&](CLI::App* sub, bool with_jobs) {
    sub->add_option("--output,-o", common.output, "Output file (default: stdout)");
    if (with_jobs) {
      sub->add_option("--jobs,-j", common.jobs, "Worker threads (env INDUCED_TRANSPORT_JOBS)")
          ->check(CLI::Range(1u, 4096u));
    }
  };

  ConvergenceArgs conv;
  auto* c = app.add_subcommand("convergence", "Error of every scheme on the example bundle");
  c->add_option("--intervals", conv.intervals, "Comma-separated N values")->delimiter(',');
  c->add_option("--order", conv.orders, "Orders to include (comma-separated)")
      ->delimiter(',')
      ->check(CLI::Range(1, 4));
  auto* only_norm =
      c->add_flag("--normalized", conv.only_normalized, "Only the normalized schemes");
  c->add_flag("--unnormalized", conv.only_plain, "Only the unnormalized schemes")
      ->excludes(only_norm);
  c->add_option("--gauge", conv.gauge, "Interior frame gauge")
      ->check(CLI::IsMember({"kernel", "randomized", "smooth"}));
  c->add_option("--seed", conv.seed, "Seed for randomized gauges");
  c->add_option("--fit-min", conv.fit_min, "Smallest N entering the slope fit");
  c->add_option("--metric", conv.metric, "root: sqrt(Tr/2), half-trace: Tr/2")
      ->check(CLI::IsMember({"root", "half-trace"}));
  add_common(c, true);

  AdhmArgs adhm_args;
  auto* ad = app.add_subcommand("adhm", "Skyrme field (and vector mesons) from ADHM data");
  ad->add_option("--input,-i", adhm_args.input, "ADHM data (JSON)")->required();
  ad->add_option("--grid", adhm_args.grid, "ox,oy,oz:spacing:nx,ny,nz")->required();
  ad->add_option("--order", adhm_args.order)->check(CLI::Range(1, 4));
  ad->add_option("--intervals", adhm_args.intervals, "Intervals along each x4 line");
  ad->add_flag("--unnormalized", adhm_args.unnormalized, "Skip determinant normalization");
  ad->add_flag("--normalized", "Determinant-normalized transports (default)");
  ad->add_option("--profile", adhm_args.profile, "gaussian, zero or a CSV of x4,phi");
  ad->add_option("--fd-step", adhm_args.fd_step, "Finite-difference step (default spacing/10)")
      ->check(CLI::NonNegativeNumber);
  ad->add_option("--format", adhm_args.format)->check(CLI::IsMember({"csv", "binary"}));
  ad->add_option("--seed", adhm_args.seed, "Randomize interior kernel gauges with this seed");
  ad->add_option("--audit", adhm_args.audit, "Random points for the ADHM validity check");
  add_common(ad, true);

  TorsionArgs tor;
  auto* to = app.add_subcommand("torsion", "Total torsion of a closed sampled curve");
  to->add_option("--input,-i", tor.input, "Curve samples (CSV x,y,z)")->required();
  to->add_flag("--frenet", tor.frenet, "Frenet-type frames; also reports the integer part");
  to->add_option("--tangent", tor.tangent)->check(CLI::IsMember({"fourth", "chord"}));
  to->add_option("--extraction", tor.extraction)->check(CLI::IsMember({"rotation", "first-row"}));
  to->add_option("--self-linking", tor.self_linking, "Self-linking number L; reports writhe");
  to->add_flag("--audit", tor.audit, "Rerun with randomly rotated frames and compare");
  to->add_option("--seed", tor.seed, "Seed for the audit rotations");
  add_common(to, false);

  BenchArgs bench;
  auto* be = app.add_subcommand("bench", "Omega^k against the naive RK4 integrator");
  be->add_option("--order", bench.order)->check(CLI::Range(1, 4));
  be->add_option("--intervals", bench.intervals, "Comma-separated even N values")->delimiter(',');
  be->add_option("--gauge", bench.gauge)->check(CLI::IsMember({"smooth", "randomized", "both"}));
  be->add_option("--seed", bench.seed);
  be->add_option("--repeats", bench.repeats)->check(CLI::Range(1u, 1000u));
  be->add_flag("--unnormalized", bench.unnormalized);
  be->add_flag("--normalized", "Determinant-normalized Omega^k (default)");
  be->add_flag("--no-timing", bench.no_timing, "Leave the seconds column empty");
  add_common(be, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  std::ostringstream buffer;
  int code = kOk;
  try {
    if (*c) {
      run_convergence(conv, common.jobs, buffer);
    } else if (*ad) {
      code = run_adhm(adhm_args, common.jobs, buffer, err);
    } else if (*to) {
      code = run_torsion(tor, buffer, err);
    } else if (*be) {
      run_bench(bench, buffer);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  }
  if (code == kUsage) return code;

  if (common.output.empty() || common.output == "-") {
    out << buffer.str();
  } else {
    std::ofstream file(common.output, std::ios::binary);
    file << buffer.str();
    file.flush();
    if (!file) {
      err << "error: cannot write " << common.output << '\n';
      return kIo;
    }
  }
  return code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"induced-transport"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace induced::cli
