#include "pdstat/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <regex>
#include <sstream>
#include <utility>

namespace pdstat {

namespace fs = std::filesystem;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
  throw ParseError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::vector<double> parse_row(std::string_view line, std::string_view source, std::size_t line_no) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    const auto field = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    const auto v = parse_double(field);
    if (!v) fail(source, line_no, "not a number: '" + std::string(trim(field)) + "'");
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool is_blank_or_comment(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

PlanePoint point_from_row(const std::vector<double>& row, std::string_view source, std::size_t line_no) {
  if (row.size() != 2) fail(source, line_no, "expected 'birth,death'");
  try {
    (void)Diagram{{row[0], row[1]}};
  } catch (const std::invalid_argument& e) {
    fail(source, line_no, e.what());
  }
  return {row[0], row[1]};
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open for reading");
  return in;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  return out;
}

// `--- diagram <i>` with optional index.
bool is_separator(std::string_view line) {
  line = trim(line);
  return line.starts_with("---");
}

}  // namespace

Diagram parse_diagram(std::istream& in, std::string_view source) {
  std::vector<PlanePoint> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    if (is_separator(line)) fail(source, line_no, "diagram-set separator in a single-diagram file");
    points.push_back(point_from_row(parse_row(line, source, line_no), source, line_no));
  }
  return Diagram(std::move(points));
}

Diagram read_diagram(const fs::path& path) {
  auto in = open_input(path);
  return parse_diagram(in, path.string());
}

void write_diagram(std::ostream& out, const Diagram& d) {
  for (const auto& p : d) out << format_number(p.birth) << ',' << format_number(p.death) << '\n';
}

DiagramSet parse_diagram_set(std::istream& in, std::string_view source) {
  static const std::regex kSeparator(R"(---\s*diagram\s*(\d+)?)");
  std::vector<std::vector<PlanePoint>> diagrams;
  bool seen_separator = false;
  std::vector<PlanePoint> leading;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    const auto t = trim(line);
    if (is_separator(t)) {
      std::match_results<std::string_view::const_iterator> m;
      if (!std::regex_match(t.begin(), t.end(), m, kSeparator)) fail(source, line_no, "malformed separator");
      if (m[1].matched && std::stoul(m[1].str()) != diagrams.size()) {
        fail(source, line_no, "diagram separators must be numbered 0, 1, 2, ...");
      }
      if (!seen_separator && !leading.empty()) fail(source, line_no, "points before the first separator");
      seen_separator = true;
      diagrams.emplace_back();
      continue;
    }
    auto p = point_from_row(parse_row(line, source, line_no), source, line_no);
    (seen_separator ? diagrams.back() : leading).push_back(p);
  }
  if (!seen_separator) diagrams.push_back(std::move(leading));
  std::vector<Diagram> out;
  out.reserve(diagrams.size());
  for (auto& d : diagrams) out.emplace_back(std::move(d));
  return DiagramSet(std::move(out));
}

void write_diagram_set(std::ostream& out, const DiagramSet& set) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    out << "--- diagram " << i << '\n';
    write_diagram(out, set[i]);
  }
}

DiagramSet read_diagram_sets(std::span<const fs::path> paths) {
  if (paths.empty()) throw ParseError("no diagram files given");
  std::vector<Diagram> all;
  for (const auto& path : paths) {
    auto in = open_input(path);
    const auto set = parse_diagram_set(in, path.string());
    all.insert(all.end(), set.begin(), set.end());
  }
  return DiagramSet(std::move(all));
}

Json diagram_to_json(const Diagram& d) {
  Json out = Json::array();
  for (const auto& p : d) out.push_back({p.birth, p.death});
  return out;
}

Diagram diagram_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("diagram must be an array of [birth, death] pairs");
  std::vector<PlanePoint> points;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ParseError("diagram point must be [birth, death]");
    }
    points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  try {
    return Diagram(std::move(points));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

Json grouping_to_json(const Grouping& g) {
  Json out = Json::array();
  for (const auto& s : g.selections) {
    Json sel = Json::array();
    for (const auto& e : s.entries) {
      if (e) {
        sel.push_back(*e);
      } else {
        sel.push_back(nullptr);
      }
    }
    out.push_back(std::move(sel));
  }
  return out;
}

Grouping grouping_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("grouping must be an array of selections");
  Grouping g;
  for (const auto& sel : j) {
    if (!sel.is_array()) throw ParseError("selection must be an array");
    Selection s;
    for (const auto& e : sel) {
      if (e.is_null()) {
        s.entries.push_back(kDiagonal);
      } else if (e.is_number_unsigned()) {
        s.entries.push_back(e.get<std::size_t>());
      } else {
        throw ParseError("selection entries are point indices or null");
      }
    }
    g.selections.push_back(std::move(s));
  }
  return g;
}

Json measure_to_json(const DiagramMeasure& mu, const std::optional<PerturbParams>& params) {
  Json out = Json::object();
  if (params) {
    out["alpha"] = params->alpha;
    out["seed"] = params->seed;
  }
  out["draws"] = mu.draws;
  out["exact"] = mu.exact;
  Json atoms = Json::array();
  for (const auto& a : mu.atoms) {
    atoms.push_back({{"weight", a.weight}, {"grouping", grouping_to_json(a.grouping)}, {"diagram", diagram_to_json(a.diagram)}});
  }
  out["atoms"] = std::move(atoms);
  return out;
}

DiagramMeasure measure_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array()) {
    throw ParseError("measure must be an object with an 'atoms' array");
  }
  DiagramMeasure mu;
  if (j.contains("draws")) {
    if (!j["draws"].is_number_unsigned()) throw ParseError("'draws' must be a non-negative integer");
    mu.draws = j["draws"].get<std::size_t>();
  }
  if (j.contains("exact")) {
    if (!j["exact"].is_boolean()) throw ParseError("'exact' must be a boolean");
    mu.exact = j["exact"].get<bool>();
  }
  for (const auto& a : j["atoms"]) {
    if (!a.is_object() || !a.contains("weight") || !a["weight"].is_number() || !a.contains("diagram")) {
      throw ParseError("atom needs a numeric 'weight' and a 'diagram'");
    }
    MeasureAtom atom;
    atom.weight = a["weight"].get<double>();
    if (!(atom.weight >= 0.0)) throw ParseError("atom weights must be non-negative");
    atom.diagram = diagram_from_json(a["diagram"]);
    if (a.contains("grouping")) atom.grouping = grouping_from_json(a["grouping"]);
    mu.atoms.push_back(std::move(atom));
  }
  return mu;
}

Json matching_to_json(const Matching& m) {
  Json out = Json::array();
  for (const auto& p : m.pairs) {
    out.push_back({p.left ? Json(*p.left) : Json(nullptr), p.right ? Json(*p.right) : Json(nullptr)});
  }
  return out;
}

Json vineyard_to_json(const Vineyard& v) {
  Json frames = Json::array();
  for (const auto& f : v.frames) {
    Json diagrams = Json::array();
    for (const auto& d : f) diagrams.push_back(diagram_to_json(d));
    frames.push_back(std::move(diagrams));
  }
  return {{"times", v.times}, {"frames", std::move(frames)}};
}

Vineyard vineyard_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("times") || !j.contains("frames") || !j["times"].is_array() ||
      !j["frames"].is_array()) {
    throw ParseError("vineyard bundle needs 'times' and 'frames' arrays");
  }
  Vineyard v;
  for (const auto& t : j["times"]) {
    if (!t.is_number()) throw ParseError("vineyard times must be numbers");
    v.times.push_back(t.get<double>());
  }
  for (const auto& f : j["frames"]) {
    if (!f.is_array() || f.empty()) throw ParseError("each frame is a non-empty array of diagrams");
    std::vector<Diagram> diagrams;
    for (const auto& d : f) diagrams.push_back(diagram_from_json(d));
    v.frames.emplace_back(std::move(diagrams));
  }
  try {
    v.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return v;
}

namespace {

Vineyard read_vineyard_dir(const fs::path& dir) {
  static const std::regex kFrameFile(R"(frame_(\d+)_diagram_(\d+)\.csv)");
  std::map<std::size_t, std::map<std::size_t, fs::path>> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, kFrameFile)) continue;
    const auto frame = std::stoul(m[1].str());
    const auto diagram = std::stoul(m[2].str());
    if (!files[frame].emplace(diagram, entry.path()).second) {
      throw ParseError(dir.string() + ": duplicate file for frame " + m[1].str() + " diagram " + m[2].str());
    }
  }
  if (files.empty()) throw ParseError(dir.string() + ": no frame_<k>_diagram_<i>.csv files");

  Vineyard v;
  std::size_t expected_frame = 0;
  for (const auto& [frame, diagrams] : files) {
    if (frame != expected_frame++) throw ParseError(dir.string() + ": frame indices must be 0, 1, 2, ...");
    std::vector<Diagram> set;
    std::size_t expected_diagram = 0;
    for (const auto& [index, path] : diagrams) {
      if (index != expected_diagram++) {
        throw ParseError(dir.string() + ": frame " + std::to_string(frame) + " is missing diagram " +
                         std::to_string(expected_diagram - 1));
      }
      set.push_back(read_diagram(path));
    }
    v.frames.emplace_back(std::move(set));
  }

  const auto times_path = dir / "times.csv";
  auto in = open_input(times_path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    const auto t = parse_double(line);
    if (!t) fail(times_path.string(), line_no, "not a number");
    v.times.push_back(*t);
  }
  try {
    v.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(dir.string() + ": " + e.what());
  }
  return v;
}

}  // namespace

Vineyard read_vineyard(const fs::path& path) {
  if (fs::is_directory(path)) return read_vineyard_dir(path);
  return vineyard_from_json(read_json(path));
}

void write_vineyard_dir(const fs::path& dir, const Vineyard& v) {
  fs::create_directories(dir);
  for (std::size_t k = 0; k < v.frames.size(); ++k) {
    for (std::size_t i = 0; i < v.frames[k].size(); ++i) {
      auto out = open_output(dir / ("frame_" + std::to_string(k) + "_diagram_" + std::to_string(i) + ".csv"));
      write_diagram(out, v.frames[k][i]);
    }
  }
  auto out = open_output(dir / "times.csv");
  for (double t : v.times) out << format_number(t) << '\n';
}

PointCloud parse_point_cloud(std::istream& in, std::string_view source) {
  std::vector<std::vector<double>> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    auto row = parse_row(line, source, line_no);
    if (!points.empty() && row.size() != points.front().size()) fail(source, line_no, "inconsistent dimension");
    for (double c : row) {
      if (!std::isfinite(c)) fail(source, line_no, "coordinates must be finite");
    }
    points.push_back(std::move(row));
  }
  return PointCloud(std::move(points));
}

PointCloud read_point_cloud(const fs::path& path) {
  auto in = open_input(path);
  return parse_point_cloud(in, path.string());
}

void write_point_cloud(std::ostream& out, const PointCloud& cloud) {
  for (const auto& p : cloud.points()) {
    for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << format_number(p[i]);
    out << '\n';
  }
}

void write_capped_diagram(std::ostream& out, const Diagram& d, double cap) {
  out << "# cap=" << format_number(cap) << '\n';
  write_diagram(out, d);
}

std::string read_text(const fs::path& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const fs::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace pdstat
