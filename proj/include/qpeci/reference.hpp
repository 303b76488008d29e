#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "qpeci/cispace.hpp"
#include "qpeci/ingest.hpp"
#include "qpeci/solver.hpp"

namespace qpeci {

/// Normalized trial state over a model basis: the input handed to phase
/// estimation.
struct ReferenceState {
  Eigen::VectorXd coefficients;
  std::shared_ptr<const CIBasis> model_basis;
  std::string label;  // "HF", "CAS-root-<n>", "truncated-<k>"
};

/// Unit vector on the determinant with the lowest diagonal energy; ties go
/// to the earliest basis position.
ReferenceState hf_reference(std::shared_ptr<const CIBasis> basis, std::span<const double> h_diag);

struct CasReference {
  ReferenceState state;
  double energy = 0.0;
  /// Weighted energy of roots 0..weights.size()-1 when weights were given.
  std::optional<double> averaged_energy;
  Spectrum model_spectrum;
};

/// Root `root` of the Hamiltonian restricted to the model space, with the
/// integrals' orbitals held fixed (CASCI). This stands in for an
/// orbital-optimized multiconfigurational reference.
CasReference cas_reference(std::shared_ptr<const CIBasis> model_basis, const IntegralTable& ints,
                           std::size_t root, std::span<const double> weights = {});

/// Keep the k largest-magnitude coefficients (ties by basis order) and
/// renormalize. k at or above the support size returns `ref` unchanged.
ReferenceState truncate_reference(const ReferenceState& ref, std::size_t k);

/// Coefficients of `ref` placed on the matching determinants of
/// `big_basis`, zero elsewhere. InclusionError if a model determinant is
/// missing.
Eigen::VectorXd embed(const ReferenceState& ref, const CIBasis& big_basis);

/// Restriction of a `big_basis` vector to the determinants of `model`.
Eigen::VectorXd project_to_model(const Eigen::VectorXd& v, const CIBasis& big_basis,
                                 const CIBasis& model);

/// Degenerate roots closer than this share their success probability.
inline constexpr double kDegeneracyTolerance = 1e-9;

/// |<ref|root>|^2, or the squared norm of the projection onto the root's
/// degenerate subspace. `ref` is already expressed in the spectrum's basis.
double success_probability(const Eigen::VectorXd& ref, const Spectrum& spectrum, std::size_t root);
double success_probability(const ReferenceState& ref, const Spectrum& spectrum, std::size_t root);

/// Split of a CI root against a reference:
///   psi_n = psi_m + psi_p,  psi_m = psi0 + psi_dev
/// with psi_m the model-space part and psi_p the external part, so that
///   <psi0|psi_n> = <psi0|psi0> + <psi0|psi_dev> + <psi0|psi_p>.
/// The root's sign is chosen so <psi0|psi_n> >= 0.
///
/// For a CASCI reference compared with the CASCI root itself psi_dev is
/// zero; against an MRCI root psi_dev carries the model-space relaxation.
struct OverlapDecomposition {
  double p_success = 0.0;
  double overlap = 0.0;              // <psi0|psi_n>
  double model_component = 0.0;      // <psi0|psi0>
  double deviation_component = 0.0;  // <psi0|psi_dev>
  double external_component = 0.0;   // <psi0|psi_p>
  double model_weight = 0.0;         // ||psi_m||^2
  double external_weight = 0.0;      // ||psi_p||^2
  std::size_t against_root = 0;
};

OverlapDecomposition decompose(const ReferenceState& ref, const Spectrum& spectrum,
                               std::size_t root);

}  // namespace qpeci
