#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qpeci/hamiltonian.hpp"
#include "qpeci/solver.hpp"

namespace qpeci {

using ComplexVector = Eigen::VectorXcd;

/// exp(-iHt) through a complete eigendecomposition.
class ExactEvolver {
 public:
  /// DomainError unless the spectrum is complete (one pair per dimension).
  explicit ExactEvolver(Spectrum spectrum);

  ComplexVector evolve(double t, const ComplexVector& state) const;
  /// <ref|exp(-iHt)|ref> for each t.
  std::vector<std::complex<double>> autocorrelation(const ComplexVector& ref,
                                                    std::span<const double> times) const;
  const Spectrum& spectrum() const { return spectrum_; }

 private:
  Spectrum spectrum_;
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd energies_;
};

ComplexVector evolve_exact(const Spectrum& spectrum, double t, const ComplexVector& state);

/// Second-order (Strang) product formula over H = D + sum_c O_c, where D is
/// the diagonal and each O_c is a set of vertex-disjoint off-diagonal
/// couplings from a greedy edge colouring. Each O_c exponentiates exactly
/// as independent 2x2 rotations. One step of length dt applies
///   e^{-iD dt/2} e^{-iO_1 dt/2} ... e^{-iO_C dt/2} e^{-iO_C dt/2} ... e^{-iO_1 dt/2} e^{-iD dt/2}.
class TrotterEvolver {
 public:
  explicit TrotterEvolver(const SparseSymmetricMatrix& h);

  ComplexVector evolve(double t, const ComplexVector& state, std::size_t n_steps) const;
  void step(double dt, ComplexVector& state) const;
  std::size_t n_colors() const { return classes_.size(); }
  std::size_t dim() const { return diag_.size(); }

 private:
  struct Coupling {
    std::size_t i, j;
    double value;
  };
  void apply_class(const std::vector<Coupling>& c, double tau, ComplexVector& state) const;
  void apply_diagonal(double tau, ComplexVector& state) const;

  std::vector<double> diag_;
  std::vector<std::vector<Coupling>> classes_;
};

ComplexVector evolve_trotter2(const SparseSymmetricMatrix& h, double t, const ComplexVector& state,
                              std::size_t n_steps);

}  // namespace qpeci
