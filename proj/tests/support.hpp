#pragma once

#include <Eigen/Dense>
#include <random>
#include <string>
#include <vector>

#include "qpeci/cispace.hpp"
#include "qpeci/hamiltonian.hpp"
#include "qpeci/ingest.hpp"

namespace support {

inline std::string fixture(const std::string& name) {
  return std::string(QPECI_FIXTURE_DIR) + "/" + name;
}

/// Random real integrals with the full 8-fold symmetry.
inline qpeci::IntegralTable random_integrals(std::size_t n, std::size_t nelec, int ms2,
                                             std::mt19937_64& rng,
                                             std::vector<qpeci::Irrep> irreps = {}) {
  if (irreps.empty()) irreps.assign(n, 0);
  qpeci::IntegralTable t(n, nelec, ms2, irreps);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) t.set_one(p, q, u(rng));
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s <= r; ++s)
          if (p * (p + 1) / 2 + q >= r * (r + 1) / 2 + s) t.set_two(p, q, r, s, 0.5 * u(rng));
  t.set_core_energy(u(rng));
  return t;
}

/// Random symmetric matrix with `per_row` off-diagonal entries per row on
/// average and a spread diagonal.
inline qpeci::SparseSymmetricMatrix random_sparse(std::size_t dim, std::size_t per_row,
                                                  std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
  std::vector<qpeci::SparseSymmetricMatrix::Entry> e;
  for (std::size_t i = 0; i < dim; ++i) e.push_back({i, i, 10.0 * u(rng)});
  for (std::size_t k = 0; k < dim * per_row / 2; ++k) {
    const auto i = pick(rng), j = pick(rng);
    if (i != j) e.push_back({i, j, u(rng)});
  }
  return qpeci::SparseSymmetricMatrix::from_entries(dim, e);
}

inline Eigen::MatrixXd random_symmetric(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) a(i, j) = g(rng);
  return 0.5 * (a + a.transpose());
}

inline Eigen::VectorXd random_unit(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(dim);
  for (auto& x : v) x = g(rng);
  return v / v.norm();
}

/// Random determinants with fixed spin counts, duplicate free.
inline std::vector<qpeci::Determinant> random_determinants(std::size_t n, std::size_t na,
                                                           std::size_t nb, std::size_t count,
                                                           std::mt19937_64& rng) {
  std::vector<std::size_t> orbs(n);
  for (std::size_t i = 0; i < n; ++i) orbs[i] = i;
  const auto as = qpeci::combinations(orbs, na);
  const auto bs = qpeci::combinations(orbs, nb);
  std::vector<qpeci::Determinant> all;
  for (auto a : as)
    for (auto b : bs) all.push_back({a, b});
  std::shuffle(all.begin(), all.end(), rng);
  if (all.size() > count) all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace support
