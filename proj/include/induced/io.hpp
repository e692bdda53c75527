#pragma once

// File formats: ADHM data (JSON), curves and profiles (CSV), Skyrme and
// vector-meson fields (CSV or a little-endian binary layout) and torsion
// result records. Every written file starts with a header that names the
// format version and echoes the run configuration.
//
// Binary field layout:
//   8 bytes   magic "ITFIELD1"
//   u32       length H of the JSON header
//   H bytes   UTF-8 JSON: {"format_version", "grid", "has_w", "config"}
//   per grid point, in GridSpec::index order:
//     u32 i, j, k; f64 x, y, z; f64 U00_re, U00_im, U01_re, ..., U11_im;
//     if has_w: 24 f64, W1 then W2 then W3, each in the same entry order.
// All integers and doubles little-endian.

#include "induced/adhm.hpp"
#include "induced/torsion.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace induced::io {

inline constexpr int kFormatVersion = 1;

/// Ordered key/value pairs echoed into file headers.
using Config = std::vector<std::pair<std::string, std::string>>;

/// Shortest decimal that round-trips a double.
std::string format_double(double v);

/// "ox,oy,oz:spacing:nx,ny,nz". Throws InvalidInput.
adhm::GridSpec parse_grid(const std::string& text);
std::string format_grid(const adhm::GridSpec& grid);

/// {"charge": n, "L": [[w,x,y,z], ...], "M": [[[w,x,y,z], ...], ...]}.
/// Throws InvalidInput on malformed or non-symmetric data, Io if unreadable.
adhm::ADHMData parse_adhm_json(const std::string& text);
adhm::ADHMData load_adhm_json(const std::filesystem::path& path);
std::string adhm_to_json(const adhm::ADHMData& data);

/// One "x,y,z" row per sample; an optional non-numeric header row, blank
/// lines and '#' comments are skipped.
torsion::SampledCurve parse_curve_csv(std::istream& in);
torsion::SampledCurve load_curve_csv(const std::filesystem::path& path);
void write_curve_csv(std::ostream& out, const std::vector<Vec3>& points);

/// "x4,phi" rows, same conventions as curve files.
adhm::Profile parse_profile_csv(std::istream& in, std::string name);
adhm::Profile load_profile_csv(const std::filesystem::path& path);

/// "# induced-transport <kind> format <version>" then "# key: value" lines.
void write_header(std::ostream& out, const std::string& kind, const Config& config);

void write_field_csv(std::ostream& out, const Config& config, const adhm::SkyrmeField& field,
                     const adhm::VectorMesonField* mesons = nullptr);
void write_field_binary(std::ostream& out, const Config& config, const adhm::SkyrmeField& field,
                        const adhm::VectorMesonField* mesons = nullptr);

struct FieldFile {
  Config config;
  adhm::GridSpec grid;
  std::vector<Eigen::Matrix2cd> u;
  std::optional<std::vector<std::array<Eigen::Matrix2cd, 3>>> w;
};

/// Readers for the two field layouts. Throw InvalidInput on malformed files.
FieldFile read_field_csv(std::istream& in);
FieldFile read_field_binary(std::istream& in);

/// Header plus one CSV row: theta,fractional,n_plus,n_minus,total,writhe
/// (empty cells where not computed).
void write_torsion_result(std::ostream& out, const Config& config,
                          const torsion::TorsionResult& result,
                          std::optional<double> writhe = std::nullopt);

/// Reads a whole file. Throws Io.
std::string read_text(const std::filesystem::path& path);

}  // namespace induced::io
