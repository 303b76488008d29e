#include "qpeci/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include "qpeci/errors.hpp"

namespace qpeci {

Eigen::VectorXd Spectrum::energies() const {
  Eigen::VectorXd e(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i) e(static_cast<Eigen::Index>(i)) = pairs[i].energy;
  return e;
}

Eigen::MatrixXd Spectrum::vectors() const {
  if (pairs.empty()) return {};
  Eigen::MatrixXd v(pairs.front().vector.size(), static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i) v.col(static_cast<Eigen::Index>(i)) = pairs[i].vector;
  return v;
}

std::size_t dense_dimension_cap() {
  if (const char* env = std::getenv("QPECI_DENSE_CAP")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 4096;
}

void fix_sign(Eigen::VectorXd& v) {
  if (v.size() == 0) return;
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  if (v(best) < 0) v = -v;
}

Spectrum dense_eigh(const Eigen::MatrixXd& a, std::optional<std::size_t> cap) {
  const std::size_t limit = cap.value_or(dense_dimension_cap());
  if (static_cast<std::size_t>(a.rows()) > limit)
    throw CapacityError("dimension " + std::to_string(a.rows()) + " exceeds the dense solver cap " +
                        std::to_string(limit) + "; use the Davidson solver");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", {});
  Spectrum s;
  s.pairs.reserve(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    Eigen::VectorXd v = es.eigenvectors().col(k);
    fix_sign(v);
    s.pairs.push_back({es.eigenvalues()(k), std::move(v)});
  }
  return s;
}

Spectrum dense_eigh(const SparseHamiltonian& h, std::optional<std::size_t> cap) {
  const std::size_t limit = cap.value_or(dense_dimension_cap());
  if (h.dim() > limit)
    throw CapacityError("dimension " + std::to_string(h.dim()) + " exceeds the dense solver cap " +
                        std::to_string(limit) + "; use the Davidson solver");
  Spectrum s = dense_eigh(h.matrix.to_dense(), limit);
  s.basis = h.basis;
  return s;
}

Spectrum dense_eigh(const DenseOperator& op, std::optional<std::size_t> cap) {
  return dense_eigh(op.entries, cap);
}

Spectrum davidson(const SparseSymmetricMatrix& a, std::size_t n_roots,
                  std::span<const Eigen::VectorXd> guesses, DavidsonOptions options) {
  const std::size_t n = a.dim();
  if (n_roots == 0 || n_roots > n)
    throw DomainError("requested " + std::to_string(n_roots) + " roots of a dimension " +
                      std::to_string(n) + " operator");
  if (!(options.tol > 0)) throw DomainError("Davidson tolerance must be positive");
  const auto N = static_cast<Eigen::Index>(n);
  const std::size_t max_sub =
      std::min(n, options.max_subspace ? std::max(options.max_subspace, 2 * n_roots)
                                       : std::max<std::size_t>(8 * n_roots, 32));
  const auto& diag = a.diagonal();

  Eigen::MatrixXd V(N, 0), AV(N, 0);
  // Orthonormalize `t` against V and append it (and A t) when it survives.
  auto append = [&](Eigen::VectorXd t) {
    const double norm0 = t.norm();
    if (norm0 == 0.0) return false;
    for (int pass = 0; pass < 2; ++pass) t -= V * (V.transpose() * t);
    const double norm = t.norm();
    if (norm < 1e-10 * norm0 || norm < 1e-14) return false;
    t /= norm;
    V.conservativeResize(Eigen::NoChange, V.cols() + 1);
    V.col(V.cols() - 1) = t;
    AV.conservativeResize(Eigen::NoChange, AV.cols() + 1);
    AV.col(AV.cols() - 1) = a.apply(t);
    return true;
  };

  if (guesses.empty()) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return diag[i] < diag[j]; });
    for (std::size_t k = 0; k < n_roots; ++k)
      append(Eigen::VectorXd::Unit(N, static_cast<Eigen::Index>(order[k])));
  } else {
    for (const auto& g : guesses) {
      if (g.size() != N) throw DomainError("Davidson guess has the wrong dimension");
      append(g);
    }
  }
  // fill up to n_roots with unit vectors if guesses were dependent or short
  for (std::size_t k = 0; static_cast<std::size_t>(V.cols()) < n_roots && k < n; ++k)
    append(Eigen::VectorXd::Unit(N, static_cast<Eigen::Index>(k)));

  std::vector<double> best(n_roots, std::numeric_limits<double>::infinity());
  const auto R = static_cast<Eigen::Index>(n_roots);
  for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
    const Eigen::MatrixXd T = V.transpose() * AV;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (T + T.transpose()));
    const Eigen::MatrixXd S = es.eigenvectors().leftCols(R);
    const Eigen::VectorXd theta = es.eigenvalues().head(R);
    const Eigen::MatrixXd X = V * S;
    const Eigen::MatrixXd Res = AV * S - X * theta.asDiagonal();

    std::vector<double> norms(n_roots);
    bool converged = true;
    for (std::size_t k = 0; k < n_roots; ++k) {
      norms[k] = Res.col(static_cast<Eigen::Index>(k)).norm();
      best[k] = std::min(best[k], norms[k]);
      converged = converged && norms[k] < options.tol;
    }
    if (converged || static_cast<std::size_t>(V.cols()) == n) {
      Spectrum s;
      for (Eigen::Index k = 0; k < R; ++k) {
        Eigen::VectorXd v = X.col(k).normalized();
        fix_sign(v);
        s.pairs.push_back({theta(k), std::move(v)});
      }
      s.iterations = iter;
      return s;
    }

    if (static_cast<std::size_t>(V.cols()) + n_roots > max_sub) {
      // collapse onto the current Ritz vectors
      const Eigen::MatrixXd keep = V * es.eigenvectors().leftCols(R);
      const Eigen::MatrixXd keepA = AV * es.eigenvectors().leftCols(R);
      V = keep;
      AV = keepA;
    }

    bool grew = false;
    for (std::size_t k = 0; k < n_roots; ++k) {
      if (norms[k] < options.tol) continue;
      Eigen::VectorXd t(N);
      for (Eigen::Index i = 0; i < N; ++i) {
        double denom = theta(static_cast<Eigen::Index>(k)) - diag[static_cast<std::size_t>(i)];
        if (std::abs(denom) < 1e-8) denom = denom < 0 ? -1e-8 : 1e-8;
        t(i) = Res(i, static_cast<Eigen::Index>(k)) / denom;
      }
      bool added = append(std::move(t));
      // the raw residual as a fallback direction
      if (!added) added = append(Res.col(static_cast<Eigen::Index>(k)));
      grew = grew || added;
    }
    if (!grew) {
      // stagnation: widen with the first unit vector not yet spanned
      for (Eigen::Index i = 0; i < N && !grew; ++i) grew = append(Eigen::VectorXd::Unit(N, i));
    }
  }
  throw ConvergenceError("Davidson did not converge in " + std::to_string(options.max_iter) +
                             " iterations",
                         best);
}

Spectrum davidson(const SparseHamiltonian& h, std::size_t n_roots,
                  std::span<const Eigen::VectorXd> guesses, DavidsonOptions options) {
  Spectrum s = davidson(h.matrix, n_roots, guesses, options);
  s.basis = h.basis;
  return s;
}

Spectrum lowest_roots(const SparseHamiltonian& h, std::size_t n_roots, DavidsonOptions options) {
  if (n_roots == 0 || n_roots > h.dim())
    throw DomainError("requested " + std::to_string(n_roots) + " roots of a dimension " +
                      std::to_string(h.dim()) + " space");
  constexpr std::size_t kDenseBelow = 600;
  if (h.dim() <= kDenseBelow || 4 * n_roots > h.dim()) {
    Spectrum s = dense_eigh(h);
    s.pairs.resize(n_roots);
    return s;
  }
  return davidson(h, n_roots, {}, options);
}

double state_averaged_energy(std::span<const double> weights, std::span<const double> energies) {
  if (weights.size() != energies.size())
    throw DomainError("state-averaging weights and energies differ in length");
  double sum = 0.0, e = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0) throw DomainError("negative state-averaging weight");
    sum += weights[i];
    e += weights[i] * energies[i];
  }
  if (std::abs(sum - 1.0) > 1e-10) throw DomainError("state-averaging weights do not sum to one");
  return e;
}

std::vector<std::size_t> home_roots(const Eigen::MatrixXd& previous, const Spectrum& current) {
  const Eigen::MatrixXd cur = current.vectors();
  if (previous.cols() > cur.cols()) throw DomainError("more roots to home than available");
  if (previous.rows() != cur.rows()) throw DomainError("homing across different bases");
  const Eigen::MatrixXd ov = (previous.transpose() * cur).cwiseAbs();
  struct Cand {
    double overlap;
    Eigen::Index prev, cur;
  };
  std::vector<Cand> cands;
  for (Eigen::Index i = 0; i < ov.rows(); ++i)
    for (Eigen::Index j = 0; j < ov.cols(); ++j) cands.push_back({ov(i, j), i, j});
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Cand& x, const Cand& y) { return x.overlap > y.overlap; });
  std::vector<std::size_t> out(static_cast<std::size_t>(previous.cols()), 0);
  std::vector<bool> prev_done(out.size(), false), cur_used(static_cast<std::size_t>(cur.cols()), false);
  std::size_t assigned = 0;
  for (const auto& c : cands) {
    if (assigned == out.size()) break;
    const auto p = static_cast<std::size_t>(c.prev), q = static_cast<std::size_t>(c.cur);
    if (prev_done[p] || cur_used[q]) continue;
    out[p] = q;
    prev_done[p] = cur_used[q] = true;
    ++assigned;
  }
  return out;
}

}  // namespace qpeci
