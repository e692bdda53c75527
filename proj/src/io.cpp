#include "induced/io.hpp"

#include "induced/error.hpp"

#include <json.hpp>

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace induced::io {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'I', 'T', 'F', 'I', 'E', 'L', 'D', '1'};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(s);
  while (std::getline(in, cell, sep)) out.push_back(trim(cell));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::optional<double> to_double(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  double v = 0.0;
  const char* begin = t.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

double require_double(const std::string& s, const std::string& what) {
  const auto v = to_double(s);
  if (!v) throw Error(ErrorKind::InvalidInput, "cannot parse " + what + " from '" + s + "'");
  return *v;
}

std::size_t require_count(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw Error(ErrorKind::InvalidInput, "cannot parse " + what + " from '" + s + "'");
  }
  return v;
}

/// Numeric rows with a fixed column count; skips comments, blanks and a
/// leading non-numeric header row.
std::vector<std::vector<double>> numeric_rows(std::istream& in, std::size_t columns,
                                              const std::string& what) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cells = split(t, ',');
    std::vector<double> row;
    bool numeric = cells.size() == columns;
    for (const auto& c : cells) {
      const auto v = to_double(c);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (!numeric) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw Error(ErrorKind::InvalidInput, what + " line " + std::to_string(line_no) +
                                               ": expected " + std::to_string(columns) +
                                               " numeric columns");
    }
    header_allowed = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  return in;
}

Quaternion quaternion_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) {
    throw Error(ErrorKind::InvalidInput, where + " must be a quaternion [w, x, y, z]");
  }
  std::array<double, 4> c{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j[i].is_number()) throw Error(ErrorKind::InvalidInput, where + " has a non-numeric entry");
    c[i] = j[i].get<double>();
  }
  return {c[0], c[1], c[2], c[3]};
}

json quaternion_json(const Quaternion& q) { return json::array({q.w, q.x, q.y, q.z}); }

// Little-endian primitives.
void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(b.data(), 4);
}

void put_f64(std::ostream& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xffu);
  out.write(b.data(), 8);
}

std::uint64_t get_bytes(std::istream& in, int count) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), count);
  if (in.gcount() != count) throw Error(ErrorKind::InvalidInput, "truncated binary field file");
  std::uint64_t v = 0;
  for (int i = count - 1; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
  return v;
}

std::uint32_t get_u32(std::istream& in) { return static_cast<std::uint32_t>(get_bytes(in, 4)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_bytes(in, 8)); }

const std::array<std::pair<int, int>, 4> kEntries{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};

std::vector<double> matrix_values(const Eigen::Matrix2cd& m) {
  std::vector<double> out;
  for (const auto& [r, c] : kEntries) {
    out.push_back(m(r, c).real());
    out.push_back(m(r, c).imag());
  }
  return out;
}

Eigen::Matrix2cd matrix_from(const double* v) {
  Eigen::Matrix2cd m;
  for (std::size_t e = 0; e < 4; ++e) {
    m(kEntries[e].first, kEntries[e].second) = Complex(v[2 * e], v[2 * e + 1]);
  }
  return m;
}

void check_mesons(const adhm::SkyrmeField& field, const adhm::VectorMesonField* mesons) {
  if (mesons != nullptr && mesons->w.size() != field.u.size()) {
    throw Error(ErrorKind::DimensionMismatch, "meson field and Skyrme field sizes differ");
  }
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

adhm::GridSpec parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) {
    throw Error(ErrorKind::InvalidInput, "grid must look like 'ox,oy,oz:spacing:nx,ny,nz'");
  }
  const auto origin = split(parts[0], ',');
  const auto shape = split(parts[2], ',');
  if (origin.size() != 3 || shape.size() != 3) {
    throw Error(ErrorKind::InvalidInput, "grid origin and shape need three components each");
  }
  adhm::GridSpec g;
  for (int i = 0; i < 3; ++i) {
    g.origin(i) = require_double(origin[static_cast<std::size_t>(i)], "grid origin");
    g.shape[static_cast<std::size_t>(i)] = require_count(shape[static_cast<std::size_t>(i)], "grid shape");
  }
  g.spacing = require_double(parts[1], "grid spacing");
  g.check();
  return g;
}

std::string format_grid(const adhm::GridSpec& g) {
  return format_double(g.origin.x()) + "," + format_double(g.origin.y()) + "," +
         format_double(g.origin.z()) + ":" + format_double(g.spacing) + ":" +
         std::to_string(g.shape[0]) + "," + std::to_string(g.shape[1]) + "," +
         std::to_string(g.shape[2]);
}

adhm::ADHMData parse_adhm_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, std::string("ADHM file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("charge") || !doc.contains("L") || !doc.contains("M")) {
    throw Error(ErrorKind::InvalidInput, "ADHM file needs 'charge', 'L' and 'M'");
  }
  if (!doc["charge"].is_number_integer() || doc["charge"].get<long>() < 1) {
    throw Error(ErrorKind::InvalidInput, "ADHM 'charge' must be a positive integer");
  }
  const int n = doc["charge"].get<int>();
  const json& l = doc["L"];
  const json& m = doc["M"];
  if (!l.is_array() || l.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorKind::InvalidInput, "ADHM 'L' must hold 'charge' quaternions");
  }
  if (!m.is_array() || m.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorKind::InvalidInput, "ADHM 'M' must have 'charge' rows");
  }
  adhm::ADHMData d;
  d.charge = n;
  d.L = QuatMatrix(1, n);
  d.M = QuatMatrix(n, n);
  for (int c = 0; c < n; ++c) {
    d.L(0, c) = quaternion_from(l[static_cast<std::size_t>(c)], "L[" + std::to_string(c) + "]");
  }
  for (int r = 0; r < n; ++r) {
    const json& row = m[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n)) {
      throw Error(ErrorKind::InvalidInput, "ADHM 'M' must be charge x charge");
    }
    for (int c = 0; c < n; ++c) {
      d.M(r, c) = quaternion_from(row[static_cast<std::size_t>(c)],
                                  "M[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  d.check();
  return d;
}

adhm::ADHMData load_adhm_json(const std::filesystem::path& path) {
  return parse_adhm_json(read_text(path));
}

std::string adhm_to_json(const adhm::ADHMData& data) {
  json doc;
  doc["charge"] = data.charge;
  doc["L"] = json::array();
  for (int c = 0; c < data.L.cols(); ++c) doc["L"].push_back(quaternion_json(data.L(0, c)));
  doc["M"] = json::array();
  for (int r = 0; r < data.M.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < data.M.cols(); ++c) row.push_back(quaternion_json(data.M(r, c)));
    doc["M"].push_back(row);
  }
  return doc.dump(2) + "\n";
}

torsion::SampledCurve parse_curve_csv(std::istream& in) {
  std::vector<Vec3> pts;
  for (const auto& row : numeric_rows(in, 3, "curve")) pts.emplace_back(row[0], row[1], row[2]);
  return torsion::SampledCurve(std::move(pts));
}

torsion::SampledCurve load_curve_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_curve_csv(in);
}

void write_curve_csv(std::ostream& out, const std::vector<Vec3>& points) {
  out << "x,y,z\n";
  for (const Vec3& p : points) {
    out << format_double(p.x()) << ',' << format_double(p.y()) << ',' << format_double(p.z())
        << '\n';
  }
}

adhm::Profile parse_profile_csv(std::istream& in, std::string name) {
  std::vector<double> x, phi;
  for (const auto& row : numeric_rows(in, 2, "profile")) {
    x.push_back(row[0]);
    phi.push_back(row[1]);
  }
  return adhm::tabulated_profile(std::move(x), std::move(phi), std::move(name));
}

adhm::Profile load_profile_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_profile_csv(in, path.filename().string());
}

void write_header(std::ostream& out, const std::string& kind, const Config& config) {
  out << "# induced-transport " << kind << " format " << kFormatVersion << '\n';
  for (const auto& [key, value] : config) out << "# " << key << ": " << value << '\n';
}

void write_field_csv(std::ostream& out, const Config& config, const adhm::SkyrmeField& field,
                     const adhm::VectorMesonField* mesons) {
  check_mesons(field, mesons);
  Config full{{"grid", format_grid(field.grid)}, {"has_w", mesons ? "yes" : "no"}};
  full.insert(full.end(), config.begin(), config.end());
  write_header(out, "field", full);

  out << "i,j,k,x,y,z";
  for (const auto& [r, c] : kEntries) {
    out << ",U" << r << c << "_re,U" << r << c << "_im";
  }
  if (mesons) {
    for (int a = 1; a <= 3; ++a) {
      for (const auto& [r, c] : kEntries) {
        out << ",W" << a << '_' << r << c << "_re,W" << a << '_' << r << c << "_im";
      }
    }
  }
  out << '\n';
  for (std::size_t n = 0; n < field.u.size(); ++n) {
    const auto [i, j, k] = field.grid.unravel(n);
    const Vec3 p = field.grid.point(n);
    out << i << ',' << j << ',' << k << ',' << format_double(p.x()) << ','
        << format_double(p.y()) << ',' << format_double(p.z());
    for (double v : matrix_values(field.u[n])) out << ',' << format_double(v);
    if (mesons) {
      for (const auto& w : mesons->w[n]) {
        for (double v : matrix_values(w)) out << ',' << format_double(v);
      }
    }
    out << '\n';
  }
}

void write_field_binary(std::ostream& out, const Config& config, const adhm::SkyrmeField& field,
                        const adhm::VectorMesonField* mesons) {
  check_mesons(field, mesons);
  json header;
  header["format_version"] = kFormatVersion;
  header["grid"] = format_grid(field.grid);
  header["has_w"] = mesons != nullptr;
  header["config"] = json::array();
  for (const auto& [key, value] : config) header["config"].push_back({key, value});
  const std::string text = header.dump();

  out.write(kMagic, sizeof kMagic);
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (std::size_t n = 0; n < field.u.size(); ++n) {
    const auto [i, j, k] = field.grid.unravel(n);
    put_u32(out, static_cast<std::uint32_t>(i));
    put_u32(out, static_cast<std::uint32_t>(j));
    put_u32(out, static_cast<std::uint32_t>(k));
    const Vec3 p = field.grid.point(n);
    for (int a = 0; a < 3; ++a) put_f64(out, p(a));
    for (double v : matrix_values(field.u[n])) put_f64(out, v);
    if (mesons) {
      for (const auto& w : mesons->w[n]) {
        for (double v : matrix_values(w)) put_f64(out, v);
      }
    }
  }
}

FieldFile read_field_csv(std::istream& in) {
  FieldFile file;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# induced-transport field format ", 0) != 0) {
    throw Error(ErrorKind::InvalidInput, "not an induced-transport field file");
  }
  bool has_grid = false;
  bool has_w = false;
  while (in.peek() == '#' && std::getline(in, line)) {
    const auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    const std::string key = trim(line.substr(1, colon - 1));
    const std::string value = line.substr(colon + 2);
    if (key == "grid") {
      file.grid = parse_grid(value);
      has_grid = true;
    } else if (key == "has_w") {
      has_w = value == "yes";
    } else {
      file.config.emplace_back(key, value);
    }
  }
  if (!has_grid) throw Error(ErrorKind::InvalidInput, "field file header has no grid");
  std::getline(in, line);  // column names
  const std::size_t columns = 6 + 8 + (has_w ? 24 : 0);
  const auto rows = numeric_rows(in, columns, "field");
  if (rows.size() != file.grid.size()) {
    throw Error(ErrorKind::InvalidInput, "field file row count does not match its grid");
  }
  if (has_w) file.w.emplace();
  for (const auto& row : rows) {
    file.u.push_back(matrix_from(row.data() + 6));
    if (has_w) {
      file.w->push_back({matrix_from(row.data() + 14), matrix_from(row.data() + 22),
                         matrix_from(row.data() + 30)});
    }
  }
  return file;
}

FieldFile read_field_binary(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), 8);
  if (in.gcount() != 8 || !std::equal(magic.begin(), magic.end(), kMagic)) {
    throw Error(ErrorKind::InvalidInput, "not a binary induced-transport field file");
  }
  const std::uint32_t length = get_u32(in);
  std::string text(length, '\0');
  in.read(text.data(), length);
  if (static_cast<std::uint32_t>(in.gcount()) != length) {
    throw Error(ErrorKind::InvalidInput, "truncated binary field header");
  }
  FieldFile file;
  bool has_w = false;
  try {
    const json header = json::parse(text);
    if (header.at("format_version").get<int>() != kFormatVersion) {
      throw Error(ErrorKind::InvalidInput, "unsupported field format version");
    }
    file.grid = parse_grid(header.at("grid").get<std::string>());
    has_w = header.at("has_w").get<bool>();
    for (const auto& kv : header.at("config")) {
      file.config.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<std::string>());
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("bad binary field header: ") + e.what());
  }
  if (has_w) file.w.emplace();
  for (std::size_t n = 0; n < file.grid.size(); ++n) {
    for (int a = 0; a < 3; ++a) (void)get_u32(in);
    for (int a = 0; a < 3; ++a) (void)get_f64(in);
    std::array<double, 8> u{};
    for (double& v : u) v = get_f64(in);
    file.u.push_back(matrix_from(u.data()));
    if (has_w) {
      std::array<double, 24> w{};
      for (double& v : w) v = get_f64(in);
      file.w->push_back({matrix_from(w.data()), matrix_from(w.data() + 8), matrix_from(w.data() + 16)});
    }
  }
  return file;
}

void write_torsion_result(std::ostream& out, const Config& config,
                          const torsion::TorsionResult& result, std::optional<double> writhe) {
  write_header(out, "torsion", config);
  out << "theta,fractional,n_plus,n_minus,total,writhe\n";
  out << format_double(result.theta) << ',' << format_double(result.fractional) << ',';
  if (result.n_plus) out << *result.n_plus;
  out << ',';
  if (result.n_minus) out << *result.n_minus;
  out << ',';
  if (result.total) out << format_double(*result.total);
  out << ',';
  if (writhe) out << format_double(*writhe);
  out << '\n';
}

std::string read_text(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "failed reading '" + path.string() + "'");
  return ss.str();
}

}  // namespace induced::io
