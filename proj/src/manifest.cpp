#include "qpeci/manifest.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "qpeci/errors.hpp"

namespace qpeci {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::size_t parse_size(std::string_view s) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError("expected a non-negative integer, got '" + std::string(s) + "'", 0);
  return v;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ParseError("expected a number, got '" + s + "'", 0);
  return v;
}

}  // namespace

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::string flat = text;
  for (char& c : flat)
    if (c == ',') c = ' ';
  std::istringstream in(flat);
  std::vector<std::size_t> out;
  std::string tok;
  while (in >> tok) {
    const auto dash = tok.find('-');
    if (dash == std::string::npos) {
      out.push_back(parse_size(tok));
      continue;
    }
    const std::size_t lo = parse_size(std::string_view(tok).substr(0, dash));
    const std::size_t hi = parse_size(std::string_view(tok).substr(dash + 1));
    if (hi < lo) throw ParseError("descending range '" + tok + "'", 0);
    for (std::size_t i = lo; i <= hi; ++i) out.push_back(i);
  }
  return out;
}

ScanManifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir) {
  ScanManifest m;
  std::set<std::string> seen_global;
  std::set<std::string> labels;
  struct Pending {
    ScanGeometry g;
    bool has_label = false, has_path = false, has_a = false;
    std::size_t line = 0;
  };
  std::vector<Pending> stanzas;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line == "geometry") {
      stanzas.push_back({});
      stanzas.back().line = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value': " + line, line_no);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    try {
      if (!stanzas.empty()) {
        auto& s = stanzas.back();
        if (key == "label") {
          if (value.empty()) throw ParseError("empty label", line_no);
          s.g.label = value;
          s.has_label = true;
        } else if (key == "fcidump") {
          std::filesystem::path p(value);
          s.g.fcidump = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
          s.has_path = true;
        } else if (key == "a") {
          s.g.a = parse_double(value);
          s.has_a = true;
        } else {
          throw ParseError("unknown geometry key '" + key + "'", line_no);
        }
        continue;
      }
      if (!seen_global.insert(key).second) throw ParseError("duplicate key '" + key + "'", line_no);
      if (key == "frozen") m.frozen = parse_index_list(value);
      else if (key == "active") m.active = parse_index_list(value);
      else if (key == "irrep") m.irrep = static_cast<Irrep>(parse_size(value));
      else if (key == "nalpha") m.n_alpha = parse_size(value);
      else if (key == "nbeta") m.n_beta = parse_size(value);
      else if (key == "roots") m.roots = parse_index_list(value);
      else if (key == "truncations") m.truncations = parse_index_list(value);
      else throw ParseError("unknown key '" + key + "'", line_no);
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(e.what(), line_no);
    }
  }

  if (m.active.empty()) throw ParseError("manifest has no active orbitals", line_no);
  if (m.roots.empty()) throw ParseError("manifest lists no roots", line_no);
  for (auto k : m.truncations)
    if (k == 0) throw ParseError("truncation size 0", line_no);
  if (stanzas.empty()) throw ParseError("manifest has no geometry stanzas", line_no);
  for (const auto& s : stanzas) {
    if (!s.has_label || !s.has_path || !s.has_a)
      throw ParseError("geometry stanza needs label, fcidump and a", s.line);
    if (!labels.insert(s.g.label).second)
      throw ParseError("duplicate geometry label '" + s.g.label + "'", s.line);
    if (!m.geometries.empty() && !(s.g.a > m.geometries.back().a))
      throw ParseError("geometry parameter a must increase strictly", s.line);
    if (!std::filesystem::exists(s.g.fcidump))
      throw ParseError("integral file not found: " + s.g.fcidump.string(), s.line);
    m.geometries.push_back(s.g);
  }
  return m;
}

ScanManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open manifest " + path.string(), 0);
  return parse_manifest(in, path.parent_path());
}

}  // namespace qpeci
