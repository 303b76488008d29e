#include <cmath>
#include <unordered_map>

#include "qpeci/errors.hpp"
#include "qpeci/solver.hpp"

namespace qpeci {

namespace {

int below(Bits s, std::size_t p) { return popcount(s & ((Bits{1} << p) - 1)); }

// Sign of a+_p a_q on string s (q occupied, p empty or p == q).
int hop_sign(Bits s, std::size_t p, std::size_t q) {
  const Bits lo = std::min(p, q), hi = std::max(p, q);
  if (hi - lo < 2) return 1;
  const Bits mask = ((Bits{1} << hi) - 1) & ~((Bits{2} << lo) - 1);
  return (popcount(s & mask) & 1) ? -1 : 1;
}

}  // namespace

double s_squared_expectation(const Eigen::VectorXd& v, const CIBasis& basis) {
  if (static_cast<std::size_t>(v.size()) != basis.size())
    throw DomainError("vector and basis differ in dimension");
  const double sz = 0.5 * (static_cast<double>(basis.n_alpha()) - static_cast<double>(basis.n_beta()));
  // S_+ = sum_p a+_{p alpha} a_{p beta}
  std::unordered_map<Determinant, double, DeterminantHash> raised;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double c = v(static_cast<Eigen::Index>(i));
    if (c == 0.0) continue;
    const auto& d = basis[i];
    for (Bits cand = d.beta & ~d.alpha; cand; cand &= cand - 1) {
      const auto p = static_cast<std::size_t>(std::countr_zero(cand));
      const int n_before = popcount(d.alpha) + below(d.beta, p) + below(d.alpha, p);
      const double sign = (n_before & 1) ? -1.0 : 1.0;
      raised[{d.alpha | (Bits{1} << p), d.beta & ~(Bits{1} << p)}] += sign * c;
    }
  }
  double norm2 = 0.0;
  for (const auto& [det, amp] : raised) norm2 += amp * amp;
  return norm2 + sz * (sz + 1.0);
}

double spin_from_s_squared(double s2) {
  const double s = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * std::max(0.0, s2)));
  return std::round(2.0 * s) / 2.0;
}

Eigen::MatrixXd one_particle_density_matrix(const Eigen::VectorXd& v, const CIBasis& basis) {
  if (static_cast<std::size_t>(v.size()) != basis.size())
    throw DomainError("vector and basis differ in dimension");
  const std::size_t n = basis.n_orbitals();
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(N, N);
  const Bits all = n == 64 ? ~Bits{0} : (Bits{1} << n) - 1;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double ci = v(static_cast<Eigen::Index>(i));
    if (ci == 0.0) continue;
    const auto& d = basis[i];
    for (int spin = 0; spin < 2; ++spin) {
      const Bits s = spin == 0 ? d.alpha : d.beta;
      for (Bits occ = s; occ; occ &= occ - 1) {
        const auto q = static_cast<std::size_t>(std::countr_zero(occ));
        g(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q)) += ci * ci;
        for (Bits vir = all & ~s; vir; vir &= vir - 1) {
          const auto p = static_cast<std::size_t>(std::countr_zero(vir));
          const Bits t = s ^ (Bits{1} << q) ^ (Bits{1} << p);
          const Determinant e = spin == 0 ? Determinant{t, d.beta} : Determinant{d.alpha, t};
          if (auto j = basis.find(e))
            g(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) +=
                v(static_cast<Eigen::Index>(*j)) * ci * hop_sign(s, p, q);
        }
      }
    }
  }
  return g;
}

Eigen::VectorXd natural_occupations(const Eigen::MatrixXd& gamma) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (gamma + gamma.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

}  // namespace qpeci
