#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qpeci/manifest.hpp"

namespace qpeci {

struct ScanRow {
  std::string label;
  double a = 0.0;
  std::size_t root = 0;  // root of interest as listed in the manifest
  double p_hf = 0.0;
  double p_cas = 0.0;
  std::vector<double> p_trunc;  // one per manifest truncation size
  double energy = 0.0;
  std::size_t model_dim = 0;
  std::size_t mrci_dim = 0;
  std::string error;  // empty for a clean row
};

struct ScanResult {
  std::vector<std::size_t> truncations;
  std::vector<ScanRow> rows;
  bool clean() const;
};

/// For each geometry: CAS model space and its MRCI-SD extension, lowest
/// roots of the MRCI Hamiltonian, roots followed across geometries by
/// eigenvector overlap (MRCI and CAS roots separately), then the success
/// probabilities of the HF, CAS and truncated CAS references against each
/// followed root. A failing geometry yields rows carrying only the error.
ScanResult run_scan(const ScanManifest& manifest);

/// Columns label, a, root, p_hf, p_cas, p_trunc_<k>..., E_root, error.
void write_scan_csv(std::ostream& out, const ScanResult& result);

}  // namespace qpeci
