#include "qpeci/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qpeci/errors.hpp"
#include "qpeci/hamiltonian.hpp"

namespace qpeci {

namespace {

const CIBasis& spectrum_basis(const Spectrum& s) {
  if (!s.basis) throw InclusionError("spectrum carries no determinant basis");
  return *s.basis;
}

Eigen::VectorXd in_spectrum_basis(const ReferenceState& ref, const Spectrum& s) {
  if (!s.basis) {
    if (s.pairs.empty() || ref.coefficients.size() != s.pairs.front().vector.size())
      throw InclusionError("reference and spectrum differ in dimension");
    return ref.coefficients;
  }
  if (ref.model_basis.get() == s.basis.get()) return ref.coefficients;
  return embed(ref, *s.basis);
}

}  // namespace

ReferenceState hf_reference(std::shared_ptr<const CIBasis> basis, std::span<const double> h_diag) {
  if (!basis || basis->empty()) throw DomainError("HF reference of an empty basis");
  if (h_diag.size() != basis->size()) throw DomainError("diagonal and basis differ in length");
  const auto best = static_cast<Eigen::Index>(
      std::min_element(h_diag.begin(), h_diag.end()) - h_diag.begin());
  const auto n = static_cast<Eigen::Index>(basis->size());
  return {Eigen::VectorXd::Unit(n, best), std::move(basis), "HF"};
}

CasReference cas_reference(std::shared_ptr<const CIBasis> model_basis, const IntegralTable& ints,
                           std::size_t root, std::span<const double> weights) {
  if (!model_basis || root >= model_basis->size())
    throw DomainError("CAS root " + std::to_string(root) + " outside the model space");
  const auto h = build_sparse(model_basis, ints);
  const std::size_t n_roots = std::max(root + 1, weights.size());
  Spectrum spec = lowest_roots(h, std::min(n_roots, h.dim()));
  CasReference out;
  out.energy = spec[root].energy;
  out.state = {spec[root].vector, model_basis, "CAS-root-" + std::to_string(root)};
  if (!weights.empty()) {
    if (weights.size() > spec.size()) throw DomainError("more averaging weights than model roots");
    std::vector<double> e(weights.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = spec[i].energy;
    out.averaged_energy = state_averaged_energy(weights, e);
  }
  out.model_spectrum = std::move(spec);
  return out;
}

ReferenceState truncate_reference(const ReferenceState& ref, std::size_t k) {
  if (k == 0) throw DomainError("truncation to zero configurations");
  const auto& c = ref.coefficients;
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (c(i) != 0.0) support.push_back(i);
  if (k >= support.size()) return ref;
  std::stable_sort(support.begin(), support.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return std::abs(c(a)) > std::abs(c(b)); });
  Eigen::VectorXd t = Eigen::VectorXd::Zero(c.size());
  for (std::size_t i = 0; i < k; ++i) t(support[i]) = c(support[i]);
  t /= t.norm();
  return {std::move(t), ref.model_basis, "truncated-" + std::to_string(k)};
}

Eigen::VectorXd embed(const ReferenceState& ref, const CIBasis& big_basis) {
  if (!ref.model_basis) throw InclusionError("reference has no model basis");
  const auto& model = *ref.model_basis;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(big_basis.size()));
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto j = big_basis.find(model[i]);
    if (!j)
      throw InclusionError("model determinant " + to_string(model[i], model.n_orbitals()) +
                           " is not in the target basis");
    out(static_cast<Eigen::Index>(*j)) = ref.coefficients(static_cast<Eigen::Index>(i));
  }
  return out;
}

Eigen::VectorXd project_to_model(const Eigen::VectorXd& v, const CIBasis& big_basis,
                                 const CIBasis& model) {
  if (static_cast<std::size_t>(v.size()) != big_basis.size())
    throw InclusionError("vector and basis differ in dimension");
  Eigen::VectorXd out(static_cast<Eigen::Index>(model.size()));
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto j = big_basis.find(model[i]);
    if (!j) throw InclusionError("model determinant missing from the target basis");
    out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(*j));
  }
  return out;
}

double success_probability(const Eigen::VectorXd& ref, const Spectrum& spectrum, std::size_t root) {
  if (root >= spectrum.size()) throw DomainError("root outside the spectrum");
  if (ref.size() != spectrum[root].vector.size())
    throw InclusionError("reference and spectrum differ in dimension");
  const double e = spectrum[root].energy;
  double p = 0.0;
  for (const auto& pair : spectrum.pairs)
    if (std::abs(pair.energy - e) < kDegeneracyTolerance) {
      const double o = ref.dot(pair.vector);
      p += o * o;
    }
  return p;
}

double success_probability(const ReferenceState& ref, const Spectrum& spectrum, std::size_t root) {
  return success_probability(in_spectrum_basis(ref, spectrum), spectrum, root);
}

OverlapDecomposition decompose(const ReferenceState& ref, const Spectrum& spectrum,
                               std::size_t root) {
  if (root >= spectrum.size()) throw DomainError("root outside the spectrum");
  const auto& big = spectrum_basis(spectrum);
  const Eigen::VectorXd psi0 = embed(ref, big);
  Eigen::VectorXd psi = spectrum[root].vector;
  if (psi0.dot(psi) < 0) psi = -psi;

  std::vector<bool> in_model(big.size(), false);
  for (const auto& d : *ref.model_basis) in_model[*big.find(d)] = true;
  Eigen::VectorXd model_part = Eigen::VectorXd::Zero(psi.size());
  Eigen::VectorXd external_part = Eigen::VectorXd::Zero(psi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i)
    (in_model[static_cast<std::size_t>(i)] ? model_part : external_part)(i) = psi(i);
  const Eigen::VectorXd deviation = model_part - psi0;

  OverlapDecomposition d;
  d.against_root = root;
  d.overlap = psi0.dot(psi);
  d.model_component = psi0.dot(psi0);
  d.deviation_component = psi0.dot(deviation);
  d.external_component = psi0.dot(external_part);
  d.model_weight = model_part.squaredNorm();
  d.external_weight = external_part.squaredNorm();
  d.p_success = success_probability(psi0, spectrum, root);
  return d;
}

}  // namespace qpeci
