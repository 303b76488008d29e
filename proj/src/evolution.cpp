#include "qpeci/evolution.hpp"

#include <cmath>

#include "qpeci/errors.hpp"

namespace qpeci {

using cd = std::complex<double>;

ExactEvolver::ExactEvolver(Spectrum spectrum) : spectrum_(std::move(spectrum)) {
  if (spectrum_.pairs.empty() ||
      static_cast<Eigen::Index>(spectrum_.size()) != spectrum_.pairs.front().vector.size())
    throw DomainError("exact evolution needs the complete spectrum");
  vectors_ = spectrum_.vectors();
  energies_ = spectrum_.energies();
}

ComplexVector ExactEvolver::evolve(double t, const ComplexVector& state) const {
  if (state.size() != vectors_.rows()) throw DomainError("state has the wrong dimension");
  ComplexVector a = vectors_.transpose().cast<cd>() * state;
  for (Eigen::Index n = 0; n < a.size(); ++n) a(n) *= std::polar(1.0, -energies_(n) * t);
  return vectors_.cast<cd>() * a;
}

std::vector<cd> ExactEvolver::autocorrelation(const ComplexVector& ref,
                                              std::span<const double> times) const {
  if (ref.size() != vectors_.rows()) throw DomainError("state has the wrong dimension");
  const ComplexVector a = vectors_.transpose().cast<cd>() * ref;
  std::vector<double> w(static_cast<std::size_t>(a.size()));
  for (Eigen::Index n = 0; n < a.size(); ++n) w[static_cast<std::size_t>(n)] = std::norm(a(n));
  std::vector<cd> out;
  out.reserve(times.size());
  for (double t : times) {
    cd p = 0.0;
    for (Eigen::Index n = 0; n < a.size(); ++n)
      if (w[static_cast<std::size_t>(n)] != 0.0)
        p += w[static_cast<std::size_t>(n)] * std::polar(1.0, -energies_(n) * t);
    out.push_back(p);
  }
  return out;
}

ComplexVector evolve_exact(const Spectrum& spectrum, double t, const ComplexVector& state) {
  return ExactEvolver(spectrum).evolve(t, state);
}

TrotterEvolver::TrotterEvolver(const SparseSymmetricMatrix& h) : diag_(h.diagonal()) {
  // greedy edge colouring: smallest colour free at both endpoints
  std::vector<std::vector<bool>> used(diag_.size());
  h.for_each_upper([&](std::size_t i, std::size_t j, double v) {
    if (i == j) return;
    std::size_t c = 0;
    while ((c < used[i].size() && used[i][c]) || (c < used[j].size() && used[j][c])) ++c;
    for (auto k : {i, j}) {
      if (used[k].size() <= c) used[k].resize(c + 1, false);
      used[k][c] = true;
    }
    if (classes_.size() <= c) classes_.resize(c + 1);
    classes_[c].push_back({i, j, v});
  });
}

void TrotterEvolver::apply_diagonal(double tau, ComplexVector& state) const {
  for (std::size_t i = 0; i < diag_.size(); ++i)
    state(static_cast<Eigen::Index>(i)) *= std::polar(1.0, -diag_[i] * tau);
}

void TrotterEvolver::apply_class(const std::vector<Coupling>& c, double tau,
                                 ComplexVector& state) const {
  // exp(-i h tau sigma_x) on each (i, j) pair
  for (const auto& e : c) {
    const double co = std::cos(e.value * tau), si = std::sin(e.value * tau);
    const auto i = static_cast<Eigen::Index>(e.i), j = static_cast<Eigen::Index>(e.j);
    const cd xi = state(i), xj = state(j);
    state(i) = co * xi - cd(0, si) * xj;
    state(j) = co * xj - cd(0, si) * xi;
  }
}

void TrotterEvolver::step(double dt, ComplexVector& state) const {
  apply_diagonal(0.5 * dt, state);
  for (std::size_t c = 0; c < classes_.size(); ++c) apply_class(classes_[c], 0.5 * dt, state);
  for (std::size_t c = classes_.size(); c-- > 0;) apply_class(classes_[c], 0.5 * dt, state);
  apply_diagonal(0.5 * dt, state);
}

ComplexVector TrotterEvolver::evolve(double t, const ComplexVector& state,
                                     std::size_t n_steps) const {
  if (n_steps == 0) throw DomainError("Trotter evolution needs at least one step");
  if (static_cast<std::size_t>(state.size()) != dim()) throw DomainError("state has the wrong dimension");
  ComplexVector s = state;
  const double dt = t / static_cast<double>(n_steps);
  for (std::size_t k = 0; k < n_steps; ++k) step(dt, s);
  return s;
}

ComplexVector evolve_trotter2(const SparseSymmetricMatrix& h, double t, const ComplexVector& state,
                              std::size_t n_steps) {
  return TrotterEvolver(h).evolve(t, state, n_steps);
}

}  // namespace qpeci
