#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qpeci/ingest.hpp"

namespace qpeci {

/// Occupation bitstring over at most 64 spatial orbitals; bit p is orbital p.
using Bits = std::uint64_t;

inline int popcount(Bits b) { return std::popcount(b); }

/// Slater determinant as a pair of spin strings. The creation-operator
/// order is all alpha orbitals ascending, then all beta orbitals ascending;
/// every sign in the library follows this convention.
struct Determinant {
  Bits alpha = 0;
  Bits beta = 0;

  friend auto operator<=>(const Determinant&, const Determinant&) = default;
  friend bool operator==(const Determinant&, const Determinant&) = default;
};

struct DeterminantHash {
  std::size_t operator()(const Determinant& d) const noexcept {
    std::uint64_t h = d.alpha * 0x9E3779B97F4A7C15ull;
    h ^= d.beta + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

/// One character per orbital ('2', 'a', 'b', '0'), lowest orbital first.
std::string to_string(const Determinant& d, std::size_t n_orbitals);

/// Orbital sets, 0-based. Disjoint; their union is every orbital.
struct OrbitalPartition {
  std::vector<std::size_t> frozen;
  std::vector<std::size_t> active;
  std::vector<std::size_t> external;

  /// Validates disjointness and coverage of 0..n_orbitals-1 (DomainError).
  static OrbitalPartition make(std::size_t n_orbitals, std::vector<std::size_t> frozen,
                               std::vector<std::size_t> active);
  /// Every orbital active.
  static OrbitalPartition full(std::size_t n_orbitals);

  std::size_t n_orbitals() const { return frozen.size() + active.size() + external.size(); }
  Bits frozen_mask() const;
  Bits active_mask() const;
  Bits external_mask() const;
};

/// Ordered, duplicate-free determinant list with constant-time lookup.
///
/// `target_irrep` is empty only for validation bases that deliberately mix
/// symmetry blocks.
class CIBasis {
 public:
  CIBasis() = default;
  CIBasis(std::vector<Determinant> dets, std::size_t n_alpha, std::size_t n_beta,
          std::optional<Irrep> target_irrep, OrbitalPartition partition);

  std::size_t size() const { return dets_.size(); }
  bool empty() const { return dets_.empty(); }
  const Determinant& operator[](std::size_t i) const { return dets_[i]; }
  std::span<const Determinant> determinants() const { return dets_; }
  auto begin() const { return dets_.begin(); }
  auto end() const { return dets_.end(); }

  std::size_t n_alpha() const { return n_alpha_; }
  std::size_t n_beta() const { return n_beta_; }
  std::size_t n_orbitals() const { return partition_.n_orbitals(); }
  std::optional<Irrep> target_irrep() const { return target_irrep_; }
  const OrbitalPartition& partition() const { return partition_; }

  std::optional<std::size_t> find(const Determinant& d) const;
  bool contains(const Determinant& d) const { return index_.count(d) != 0; }

  /// Concatenation of two bases of equal electron counts, for checking the
  /// symmetry selection rule. The result carries no target irrep.
  static CIBasis concat_for_validation(const CIBasis& a, const CIBasis& b);

 private:
  std::vector<Determinant> dets_;
  std::unordered_map<Determinant, std::size_t, DeterminantHash> index_;
  std::size_t n_alpha_ = 0;
  std::size_t n_beta_ = 0;
  std::optional<Irrep> target_irrep_;
  OrbitalPartition partition_;
};

/// XOR of the irreps of every occupied spin-orbital.
Irrep determinant_irrep(const Determinant& d, std::span<const Irrep> irreps);

/// All determinants with frozen orbitals doubly occupied, the remaining
/// electrons distributed over the active orbitals, nothing external, and
/// the requested irrep. Lexicographic order on (alpha, beta).
///
/// Throws EmptyBasisError when the electron counts cannot be placed at all;
/// an empty symmetry block is returned as an empty basis.
CIBasis enumerate_cas(const OrbitalPartition& partition, std::size_t n_alpha, std::size_t n_beta,
                      Irrep target_irrep, std::span<const Irrep> irreps);

/// Model determinants plus every determinant obtained from one of them by
/// moving one or two electrons (spin conserving) from non-frozen internal
/// orbitals into external orbitals; symmetry filtered. Model determinants
/// come first in their original order; the additions follow in
/// lexicographic order.
CIBasis enumerate_mrci_sd(const CIBasis& model, const IntegralTable& integrals);
CIBasis enumerate_mrci_sd(const CIBasis& model, std::span<const Irrep> irreps);

/// Qubits needed to index `dim` basis states: ceil(log2 dim).
std::size_t qubit_count(std::size_t dim);

/// All k-subsets of the given orbitals as bitstrings, ascending.
std::vector<Bits> combinations(std::span<const std::size_t> orbitals, std::size_t k);

}  // namespace qpeci
