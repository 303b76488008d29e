#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "qpeci/cispace.hpp"
#include "qpeci/ingest.hpp"

namespace qpeci {

/// Real symmetric matrix stored as CSR of the upper triangle with an
/// explicit diagonal entry in every row (first entry of the row).
class SparseSymmetricMatrix {
 public:
  struct Entry {
    std::size_t row, col;
    double value;
  };

  SparseSymmetricMatrix() = default;
  /// Entries with col < row are mirrored into the upper triangle. Duplicate
  /// positions are summed.
  static SparseSymmetricMatrix from_entries(std::size_t dim, std::vector<Entry> entries);
  /// Upper triangle of a dense matrix; asymmetry is not checked here.
  static SparseSymmetricMatrix from_dense(const Eigen::MatrixXd& m);

  std::size_t dim() const { return diag_.size(); }
  /// Stored entries including the diagonal.
  std::size_t nnz() const { return cols_.size(); }
  const std::vector<double>& diagonal() const { return diag_; }

  /// y = A x.
  void apply(std::span<const double> x, std::span<double> y) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd to_dense() const;

  /// Visit every stored upper-triangle entry (row <= col), row-major.
  template <class F>
  void for_each_upper(F&& f) const {
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) f(i, cols_[k], vals_[k]);
  }

  /// Sum of |off-diagonal| per row, for Gershgorin discs.
  std::vector<double> off_diagonal_row_sums() const;

 private:
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> cols_;
  std::vector<double> vals_;
  std::vector<double> diag_;
};

/// CI Hamiltonian over a determinant basis; the core energy is on the diagonal.
struct SparseHamiltonian {
  std::shared_ptr<const CIBasis> basis;
  SparseSymmetricMatrix matrix;

  std::size_t dim() const { return matrix.dim(); }
};

/// <bra|H|ket> by the Slater-Condon rules, core energy included on the
/// diagonal. Zero beyond double excitations. DomainError if the electron
/// counts per spin differ.
double slater_condon_element(const Determinant& bra, const Determinant& ket,
                             const IntegralTable& ints);

struct BuildOptions {
  /// Above this dimension connected determinants are generated by
  /// substitution and looked up instead of scanning all pairs.
  std::size_t all_pairs_limit = 2000;
};

SparseHamiltonian build_sparse(std::shared_ptr<const CIBasis> basis, const IntegralTable& ints,
                               BuildOptions options = {});
SparseHamiltonian build_sparse(const CIBasis& basis, const IntegralTable& ints,
                               BuildOptions options = {});

/// `i j value` lines, 1-based, upper triangle, 17 significant digits.
void write_coordinate(const SparseSymmetricMatrix& m, std::ostream& out);

}  // namespace qpeci
