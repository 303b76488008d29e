#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qpeci {

/// Abelian irrep label. Products of irreps are bitwise XOR.
using Irrep = std::uint32_t;

/// Molecular-orbital integrals in chemists' notation (pq|rs).
///
/// Orbital indices in this API are 0-based; the FCIDUMP text format is
/// 1-based and the parser converts. Two-electron integrals are stored once
/// per orbit of the 8-fold permutation group, keyed by the canonical
/// quadruple, so every permutation of a stored index returns the same value.
/// Integrals never set are exactly zero.
class IntegralTable {
 public:
  IntegralTable() = default;
  IntegralTable(std::size_t n_orbitals, std::size_t n_electrons, int ms2,
                std::vector<Irrep> orbital_irreps, Irrep target_irrep = 0);

  std::size_t n_orbitals() const { return n_orbitals_; }
  std::size_t n_electrons() const { return n_electrons_; }
  int ms2() const { return ms2_; }
  std::size_t n_alpha() const { return (n_electrons_ + ms2_) / 2; }
  std::size_t n_beta() const { return (n_electrons_ - ms2_) / 2; }
  const std::vector<Irrep>& orbital_irreps() const { return irreps_; }
  /// Smallest power of two covering every irrep label in use.
  std::size_t point_group_order() const;
  /// Irrep requested by the file's ISYM (0 when absent).
  Irrep target_irrep() const { return target_irrep_; }
  double core_energy() const { return core_energy_; }

  double one(std::size_t p, std::size_t q) const {
    return h_one_(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
  }
  double two(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return g_two_[canonical_index(p, q, r, s)];
  }
  const Eigen::MatrixXd& one_body() const { return h_one_; }

  /// Setters throw ConsistencyError when an already-set value differs by
  /// more than 1e-10, IndexError for out-of-range indices.
  void set_one(std::size_t p, std::size_t q, double value);
  void set_two(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double value);
  void set_core_energy(double value);

  /// Canonical storage slot shared by the 8 permutations of (pq|rs).
  std::size_t canonical_index(std::size_t p, std::size_t q, std::size_t r,
                              std::size_t s) const;

  /// Visit every explicitly stored two-electron integral once, in canonical
  /// (p>=q, r>=s, pq>=rs) form.
  template <class F>
  void for_each_two(F&& f) const {
    std::size_t idx = 0;
    for (std::size_t pq = 0; pq < pairs_.size(); ++pq)
      for (std::size_t rs = 0; rs <= pq; ++rs, ++idx)
        if (g_set_[idx])
          f(pairs_[pq].first, pairs_[pq].second, pairs_[rs].first,
            pairs_[rs].second, g_two_[idx]);
  }
  bool one_is_set(std::size_t p, std::size_t q) const;

 private:
  void check_index(std::size_t p) const;

  std::size_t n_orbitals_ = 0;
  std::size_t n_electrons_ = 0;
  int ms2_ = 0;
  std::vector<Irrep> irreps_;
  Irrep target_irrep_ = 0;
  double core_energy_ = 0.0;
  bool core_set_ = false;
  Eigen::MatrixXd h_one_;
  std::vector<std::uint8_t> h_set_;
  std::vector<double> g_two_;
  std::vector<std::uint8_t> g_set_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

IntegralTable parse_fcidump(std::istream& in);
IntegralTable parse_fcidump(std::string_view text);
IntegralTable read_fcidump(const std::string& path);

/// Serialize in FCIDUMP format with round-trip (17 significant digit) values.
std::string write_fcidump(const IntegralTable& table);

/// Real symmetric matrix read from the toy dense format.
struct DenseOperator {
  Eigen::MatrixXd entries;
  std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
};

/// Format: dimension, then dim*dim reals row-major, whitespace separated.
DenseOperator parse_dense_operator(std::istream& in);
DenseOperator parse_dense_operator(std::string_view text);
DenseOperator read_dense_operator(const std::string& path);

}  // namespace qpeci
