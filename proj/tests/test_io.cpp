#include "induced/error.hpp"
#include "induced/io.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <sstream>

using namespace induced;

namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Io;
}

adhm::ADHMData charge_two(std::mt19937_64& rng) {
  adhm::ADHMData d;
  d.charge = 2;
  d.L = QuatMatrix(1, 2);
  d.M = QuatMatrix(2, 2);
  d.L(0, 0) = test::random_quaternion(rng);
  d.L(0, 1) = test::random_quaternion(rng);
  d.M(0, 0) = test::random_quaternion(rng);
  d.M(1, 1) = test::random_quaternion(rng);
  d.M(0, 1) = d.M(1, 0) = test::random_quaternion(rng);
  return d;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("format_double round-trips exactly") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 1000; ++i) {
    const double v = normal(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(same_bits(std::stod(io::format_double(v)), v));
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(-0.0) == "-0");
}

TEST_CASE("grid specifications") {
  const auto g = io::parse_grid(" -1.5,0,2 : 0.25 : 3,1,4 ");
  CHECK(g.origin == Vec3(-1.5, 0, 2));
  CHECK(g.spacing == 0.25);
  CHECK(g.shape == std::array<std::size_t, 3>{3, 1, 4});
  CHECK(io::format_grid(g) == "-1.5,0,2:0.25:3,1,4");
  CHECK(io::format_grid(io::parse_grid(io::format_grid(g))) == io::format_grid(g));

  for (const char* bad : {"0,0,0:1:0,1,1", "0,0,0:0:1,1,1", "0,0,0:-1:1,1,1", "0,0:1:1,1,1",
                          "0,0,0:1:1,1", "0,0,0:1", "a,0,0:1:1,1,1", "0,0,0:1:1.5,1,1",
                          "0,0,0:1:-1,1,1"}) {
    CAPTURE(bad);
    CHECK(kind_of([&] { (void)io::parse_grid(bad); }) == ErrorKind::InvalidInput);
  }
}

TEST_CASE("ADHM JSON") {
  SUBCASE("charge one") {
    const auto d = io::parse_adhm_json(R"({"charge": 1, "L": [[1,0,0,0]], "M": [[[0,0,0,0]]]})");
    CHECK(d.charge == 1);
    CHECK(d.L(0, 0).w == 1.0);
    CHECK(d.M(0, 0).norm2() == 0.0);
  }
  SUBCASE("round trip is exact") {
    std::mt19937_64 rng(5);
    const auto d = charge_two(rng);
    const auto back = io::parse_adhm_json(io::adhm_to_json(d));
    CHECK(back.charge == 2);
    CHECK(test::max_abs(back.L.realize() - d.L.realize()) == 0.0);
    CHECK(test::max_abs(back.M.realize() - d.M.realize()) == 0.0);
  }
  SUBCASE("rejections") {
    std::mt19937_64 rng(6);
    auto d = charge_two(rng);
    d.M(0, 1) = d.M(0, 1) + Quaternion::real(1e-3);
    const std::string asymmetric = io::adhm_to_json(d);
    for (const std::string& bad :
         {std::string("{"), std::string("[]"), std::string(R"({"charge": 1, "L": [[1,0,0,0]]})"),
          std::string(R"({"charge": 0, "L": [], "M": []})"),
          std::string(R"({"charge": 2, "L": [[1,0,0,0]], "M": [[[0,0,0,0]]]})"),
          std::string(R"({"charge": 1, "L": [[1,0,0]], "M": [[[0,0,0,0]]]})"),
          std::string(R"({"charge": 1, "L": [["a",0,0,0]], "M": [[[0,0,0,0]]]})"), asymmetric}) {
      CAPTURE(bad);
      CHECK(kind_of([&] { (void)io::parse_adhm_json(bad); }) == ErrorKind::InvalidInput);
    }
  }
  SUBCASE("missing file is an I/O error") {
    CHECK(kind_of([] { (void)io::load_adhm_json("/nonexistent/adhm.json"); }) == ErrorKind::Io);
  }
}

TEST_CASE("curve CSV") {
  SUBCASE("header, comments and blank lines") {
    std::istringstream in("# a square\nx,y,z\n0,0,0\n\n1,0,0\n1,1,0.5\n# note\n0,1,0\n");
    const auto c = io::parse_curve_csv(in);
    REQUIRE(c.size() == 4);
    CHECK(c.points()[2] == Vec3(1, 1, 0.5));
  }
  SUBCASE("written curves read back bit-exactly") {
    std::vector<Vec3> pts;
    for (int i = 0; i < 16; ++i) {
      const double s = 2 * M_PI * i / 16;
      pts.emplace_back(std::cos(s) / 3, std::sin(s) / 7, std::sin(2 * s) * 1e-9);
    }
    std::stringstream buf;
    io::write_curve_csv(buf, pts);
    const auto c = io::parse_curve_csv(buf);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(c.points()[i] == pts[i]);
  }
  SUBCASE("malformed rows") {
    for (const char* bad : {"0,0,0\n1,0\n1,1,0\n0,1,0\n", "0,0,0\n1,0,0\nx,1,0\n0,1,0\n",
                            "0,0,0\n1,0,0\n1,1,0\n", "0,0,0\n1,0,0\n1,1,nan\n0,1,0\n"}) {
      CAPTURE(bad);
      std::istringstream in(bad);
      CHECK(kind_of([&] { (void)io::parse_curve_csv(in); }) == ErrorKind::InvalidInput);
    }
  }
}

TEST_CASE("profile CSV") {
  std::istringstream in("x4,phi\n-1,0\n0,2\n1,0\n");
  const auto p = io::parse_profile_csv(in, "tent");
  CHECK(p.name == "tent");
  CHECK(p.phi(0.0) == 2.0);
  CHECK(p.phi(0.5) == doctest::Approx(1.0));
  CHECK(p.phi(3.0) == 0.0);

  std::istringstream unsorted("0,1\n0,2\n");
  CHECK(kind_of([&] { (void)io::parse_profile_csv(unsorted, "u"); }) == ErrorKind::InvalidInput);
}

TEST_CASE("field files") {
  std::mt19937_64 rng(9);
  adhm::SkyrmeField field;
  field.grid = io::parse_grid("-0.1,0.2,1e-3:0.3:2,3,1");
  adhm::VectorMesonField w;
  w.grid = field.grid;
  for (std::size_t n = 0; n < field.grid.size(); ++n) {
    field.u.push_back(test::random_complex(2, 2, rng));
    w.w.push_back({test::random_complex(2, 2, rng), test::random_complex(2, 2, rng),
                   test::random_complex(2, 2, rng)});
  }
  const io::Config config{{"command", "adhm"}, {"order", "2"}};

  auto check_same = [&](const io::FieldFile& f, bool with_w) {
    CHECK(io::format_grid(f.grid) == io::format_grid(field.grid));
    CHECK(f.config == config);
    REQUIRE(f.u.size() == field.u.size());
    for (std::size_t n = 0; n < f.u.size(); ++n) CHECK(f.u[n] == field.u[n]);
    CHECK(f.w.has_value() == with_w);
    if (with_w) {
      for (std::size_t n = 0; n < f.u.size(); ++n) {
        for (int a = 0; a < 3; ++a) CHECK((*f.w)[n][static_cast<std::size_t>(a)] == w.w[n][static_cast<std::size_t>(a)]);
      }
    }
  };

  SUBCASE("CSV") {
    for (bool with_w : {false, true}) {
      std::stringstream buf;
      io::write_field_csv(buf, config, field, with_w ? &w : nullptr);
      const std::string text = buf.str();
      CHECK(text.rfind("# induced-transport field format 1\n", 0) == 0);
      CHECK(text.find("# has_w: " + std::string(with_w ? "yes" : "no")) != std::string::npos);
      check_same(io::read_field_csv(buf), with_w);
    }
  }
  SUBCASE("binary") {
    for (bool with_w : {false, true}) {
      std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
      io::write_field_binary(buf, config, field, with_w ? &w : nullptr);
      const std::string bytes = buf.str();
      CHECK(bytes.substr(0, 8) == "ITFIELD1");
      const std::size_t header = static_cast<unsigned char>(bytes[8]) |
                                 static_cast<unsigned char>(bytes[9]) << 8 |
                                 static_cast<unsigned char>(bytes[10]) << 16 |
                                 static_cast<unsigned char>(bytes[11]) << 24;
      const std::size_t record = 3 * 4 + (3 + 8 + (with_w ? 24 : 0)) * 8;
      CHECK(bytes.size() == 12 + header + field.grid.size() * record);
      check_same(io::read_field_binary(buf), with_w);
    }
  }
  SUBCASE("mismatched meson grid") {
    adhm::VectorMesonField short_w = w;
    short_w.w.pop_back();
    std::ostringstream out;
    CHECK_THROWS_AS(io::write_field_csv(out, config, field, &short_w), Error);
  }
  SUBCASE("truncated input") {
    std::stringstream buf;
    io::write_field_csv(buf, config, field);
    std::string text = buf.str();
    text.resize(text.rfind('\n', text.size() - 2) + 1);
    std::istringstream in(text);
    CHECK(kind_of([&] { (void)io::read_field_csv(in); }) == ErrorKind::InvalidInput);

    std::stringstream bin(std::ios::in | std::ios::out | std::ios::binary);
    io::write_field_binary(bin, config, field);
    std::string bytes = bin.str();
    bytes.resize(bytes.size() - 5);
    std::istringstream bin_in(bytes);
    CHECK(kind_of([&] { (void)io::read_field_binary(bin_in); }) == ErrorKind::InvalidInput);
  }
}

TEST_CASE("torsion record") {
  torsion::TorsionResult r;
  r.theta = 1.25;
  r.fractional = 1.25 / (2 * M_PI);
  std::ostringstream partial;
  io::write_torsion_result(partial, {{"frames", "arbitrary"}}, r);
  CHECK(partial.str() ==
        "# induced-transport torsion format 1\n# frames: arbitrary\n"
        "theta,fractional,n_plus,n_minus,total,writhe\n1.25," +
            io::format_double(r.fractional) + ",,,,\n");

  r.n_plus = 2;
  r.n_minus = 0;
  r.total = 4 * M_PI + 1.25;
  std::ostringstream full;
  io::write_torsion_result(full, {}, r, 0.5);
  CHECK(full.str().substr(full.str().rfind('\n', full.str().size() - 2) + 1) ==
        "1.25," + io::format_double(r.fractional) + ",2,0," + io::format_double(*r.total) +
            ",0.5\n");
}
