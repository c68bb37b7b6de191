#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pdstat/diagram.hpp"
#include "pdstat/grouping.hpp"
#include "pdstat/pfm.hpp"
#include "pdstat/rips.hpp"
#include "pdstat/vineyard.hpp"

namespace pdstat {

using Json = nlohmann::json;

/// Malformed or unreadable input; the message names the source and line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits, enough to read back the same double.
std::string format_number(double v);

// Diagrams: one `birth,death` per line, `#` comments, blank lines ignored.
Diagram parse_diagram(std::istream& in, std::string_view source = "<input>");
Diagram read_diagram(const std::filesystem::path& path);
void write_diagram(std::ostream& out, const Diagram& d);

/// Diagrams separated by `--- diagram <i>` lines. Text before the first
/// separator must be empty; a file without separators is a single diagram.
DiagramSet parse_diagram_set(std::istream& in, std::string_view source = "<input>");
void write_diagram_set(std::ostream& out, const DiagramSet& set);

/// One path: that file's diagram set. Several: each file's diagrams in order.
DiagramSet read_diagram_sets(std::span<const std::filesystem::path> paths);

Json diagram_to_json(const Diagram& d);
Diagram diagram_from_json(const Json& j);

/// Array of selections; each an array with `null` for the diagonal.
Json grouping_to_json(const Grouping& g);
Grouping grouping_from_json(const Json& j);

/// PFM document. alpha and seed are written only when params are given.
Json measure_to_json(const DiagramMeasure& mu, const std::optional<PerturbParams>& params = std::nullopt);
DiagramMeasure measure_from_json(const Json& j);

Json matching_to_json(const Matching& m);

/// A directory of `frame_<k>_diagram_<i>.csv` files plus `times.csv`, or a
/// JSON bundle {"times": [...], "frames": [[diagram, ...], ...]}.
Vineyard read_vineyard(const std::filesystem::path& path);
void write_vineyard_dir(const std::filesystem::path& dir, const Vineyard& v);
Json vineyard_to_json(const Vineyard& v);
Vineyard vineyard_from_json(const Json& j);

// Point clouds: comma-separated coordinates, one point per line.
PointCloud parse_point_cloud(std::istream& in, std::string_view source = "<input>");
PointCloud read_point_cloud(const std::filesystem::path& path);
void write_point_cloud(std::ostream& out, const PointCloud& cloud);

/// Diagram file headed by a `# cap=<value>` line.
void write_capped_diagram(std::ostream& out, const Diagram& d, double cap);

Json read_json(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);

}  // namespace pdstat
