#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qpeci/cispace.hpp"
#include "qpeci/hamiltonian.hpp"
#include "qpeci/ingest.hpp"

namespace qpeci {

struct EigenPair {
  double energy = 0.0;
  Eigen::VectorXd vector;
};

/// Eigenpairs in ascending energy order. `basis` is null for operators that
/// do not come from a determinant space.
struct Spectrum {
  std::vector<EigenPair> pairs;
  std::shared_ptr<const CIBasis> basis;
  std::size_t iterations = 0;

  std::size_t size() const { return pairs.size(); }
  const EigenPair& operator[](std::size_t i) const { return pairs[i]; }
  Eigen::VectorXd energies() const;
  /// Eigenvectors as columns.
  Eigen::MatrixXd vectors() const;
};

/// Dimension above which dense diagonalization is refused. Reads
/// QPECI_DENSE_CAP from the environment, default 4096.
std::size_t dense_dimension_cap();

/// Full spectrum by dense diagonalization. CapacityError above the cap.
Spectrum dense_eigh(const Eigen::MatrixXd& a, std::optional<std::size_t> cap = std::nullopt);
Spectrum dense_eigh(const SparseHamiltonian& h, std::optional<std::size_t> cap = std::nullopt);
Spectrum dense_eigh(const DenseOperator& op, std::optional<std::size_t> cap = std::nullopt);

struct DavidsonOptions {
  double tol = 1e-8;
  std::size_t max_iter = 200;
  /// 0 picks max(8 * n_roots, 32), clipped to the dimension.
  std::size_t max_subspace = 0;
};

/// Lowest `n_roots` eigenpairs by diagonal-preconditioned Davidson with
/// subspace collapse. Default guesses are unit vectors on the smallest
/// diagonal entries. ConvergenceError after max_iter iterations.
Spectrum davidson(const SparseSymmetricMatrix& a, std::size_t n_roots,
                  std::span<const Eigen::VectorXd> guesses = {}, DavidsonOptions options = {});
Spectrum davidson(const SparseHamiltonian& h, std::size_t n_roots,
                  std::span<const Eigen::VectorXd> guesses = {}, DavidsonOptions options = {});

/// Lowest roots of a Hamiltonian: dense for small spaces (up to 600
/// determinants) or when more than a quarter of the spectrum is wanted,
/// Davidson otherwise.
Spectrum lowest_roots(const SparseHamiltonian& h, std::size_t n_roots,
                      DavidsonOptions options = {});

/// Scale so the largest-magnitude coefficient (first on ties) is positive.
void fix_sign(Eigen::VectorXd& v);

/// <S^2> = S_-S_+ + S_z(S_z + 1) evaluated in the determinant basis.
double s_squared_expectation(const Eigen::VectorXd& v, const CIBasis& basis);

/// Spin quantum number s with s(s+1) closest to `s2`, as a half-integer.
double spin_from_s_squared(double s2);

/// gamma_pq = <psi| sum_sigma a+_{p sigma} a_{q sigma} |psi> over spatial orbitals.
Eigen::MatrixXd one_particle_density_matrix(const Eigen::VectorXd& v, const CIBasis& basis);

/// Eigenvalues of the density matrix, descending.
Eigen::VectorXd natural_occupations(const Eigen::MatrixXd& gamma);

/// sum_i w_i E_i. DomainError for negative weights, length mismatch, or
/// weights not summing to one within 1e-10.
double state_averaged_energy(std::span<const double> weights, std::span<const double> energies);

/// For each column of `previous`, the index of the root in `current` it
/// overlaps most, assigned greedily by decreasing |overlap| so no root is
/// claimed twice. Both sets must live in the same basis.
std::vector<std::size_t> home_roots(const Eigen::MatrixXd& previous, const Spectrum& current);

}  // namespace qpeci
