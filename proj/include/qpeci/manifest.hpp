#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qpeci/ingest.hpp"

namespace qpeci {

struct ScanGeometry {
  std::string label;
  std::filesystem::path fcidump;
  double a = 0.0;
};

/// Bond-scan description. Plain text: global `key = value` lines, then one
/// `geometry` stanza per scan point with its own label, fcidump and a.
///
///   frozen = 0 1
///   active = 2-6
///   roots = 0
///   truncations = 1 2 4 8
///   geometry
///     label = eq
///     fcidump = h2o_a1.00.fcidump
///     a = 1.0
///
/// Orbital indices are 0-based; lists take spaces or commas and `lo-hi`
/// ranges. `irrep`, `nalpha` and `nbeta` default to the values in each
/// integral file. Relative fcidump paths resolve against the manifest.
struct ScanManifest {
  std::vector<ScanGeometry> geometries;
  std::vector<std::size_t> frozen;
  std::vector<std::size_t> active;
  std::optional<Irrep> irrep;
  std::optional<std::size_t> n_alpha;
  std::optional<std::size_t> n_beta;
  std::vector<std::size_t> roots{0};
  std::vector<std::size_t> truncations;
};

/// ParseError (with line number) on malformed input, unknown keys,
/// duplicate labels, non-increasing a, or missing integral files.
ScanManifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir = {});
ScanManifest read_manifest(const std::filesystem::path& path);

/// "0 1, 3-5" -> {0, 1, 3, 4, 5}. ParseError on anything else.
std::vector<std::size_t> parse_index_list(const std::string& text);

}  // namespace qpeci
