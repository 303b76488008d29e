#include <catch_amalgamated.hpp>

#include <sstream>

#include "oracles/fock.hpp"
#include "qpeci/errors.hpp"
#include "qpeci/hamiltonian.hpp"
#include "support.hpp"

using namespace qpeci;

namespace {

Eigen::MatrixXd oracle_matrix(const CIBasis& b, const IntegralTable& ints) {
  const auto n = static_cast<Eigen::Index>(b.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  std::unordered_map<oracle::Fock, Eigen::Index> pos;
  for (Eigen::Index i = 0; i < n; ++i) pos[oracle::to_fock(b[i], ints.n_orbitals())] = i;
  for (Eigen::Index j = 0; j < n; ++j)
    for (const auto& [state, amp] : oracle::apply_h(oracle::to_fock(b[j], ints.n_orbitals()), ints))
      if (auto it = pos.find(state); it != pos.end()) m(it->second, j) += amp;
  return m;
}

}  // namespace

TEST_CASE("Slater-Condon elements match second quantization") {
  std::mt19937_64 rng(2024);
  for (auto [n, na, nb] : {std::array<std::size_t, 3>{4, 2, 2}, {5, 3, 1}, {6, 3, 2}, {5, 2, 0}}) {
    const auto ints = support::random_integrals(n, na + nb, static_cast<int>(na) - static_cast<int>(nb), rng);
    const CIBasis basis(support::random_determinants(n, na, nb, 60, rng), na, nb, std::nullopt,
                        OrbitalPartition::full(n));
    const Eigen::MatrixXd expected = oracle_matrix(basis, ints);
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j)
        REQUIRE(slater_condon_element(basis[i], basis[j], ints) ==
                Catch::Approx(expected(i, j)).margin(1e-12));
  }
}

TEST_CASE("both construction paths give the same sparse matrix") {
  std::mt19937_64 rng(5);
  const auto ints = support::random_integrals(6, 6, 0, rng);
  const auto basis = std::make_shared<const CIBasis>(
      support::random_determinants(6, 3, 3, 150, rng), 3, 3, std::nullopt,
      OrbitalPartition::full(6));
  const auto scan = build_sparse(basis, ints, {.all_pairs_limit = 100000}).matrix.to_dense();
  const auto gen = build_sparse(basis, ints, {.all_pairs_limit = 0}).matrix.to_dense();
  CHECK((scan - gen).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((scan - oracle_matrix(*basis, ints)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((scan - scan.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("elements between different electron counts are refused") {
  std::mt19937_64 rng(1);
  const auto ints = support::random_integrals(3, 2, 0, rng);
  CHECK_THROWS_AS(slater_condon_element({0b001, 0b001}, {0b011, 0b000}, ints), DomainError);
}

TEST_CASE("symmetry blocks do not couple") {
  const auto ints = read_fcidump(support::fixture("h2o_sto3g_a1.00.fcidump"));
  const auto part = OrbitalPartition::full(7);
  const auto a = enumerate_cas(part, 5, 5, 0, ints.orbital_irreps());
  const auto b = enumerate_cas(part, 5, 5, 1, ints.orbital_irreps());
  const auto both = CIBasis::concat_for_validation(a, b);
  const auto h = build_sparse(both, ints).matrix.to_dense();
  const auto na = static_cast<Eigen::Index>(a.size());
  const auto nb = static_cast<Eigen::Index>(b.size());
  CHECK(h.block(0, na, na, nb).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(h.block(0, 0, na, na).cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("H2 ground state against the oracle matrix") {
  const auto ints = read_fcidump(support::fixture("h2_sto3g_r1.40.fcidump"));
  const CIBasis basis({{0b01, 0b01}, {0b01, 0b10}, {0b10, 0b01}, {0b10, 0b10}}, 1, 1, std::nullopt,
                      OrbitalPartition::full(2));
  const Eigen::MatrixXd m = oracle_matrix(basis, ints);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const auto h = build_sparse(basis, ints).matrix.to_dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(h);
  CHECK(es2.eigenvalues()(0) == Catch::Approx(es.eigenvalues()(0)).margin(1e-12));
  // minimal-basis H2 near equilibrium
  CHECK(es.eigenvalues()(0) == Catch::Approx(-1.137).margin(2e-3));
}

TEST_CASE("sparse symmetric storage") {
  const auto m = SparseSymmetricMatrix::from_entries(3, {{0, 0, 1.0}, {2, 0, 0.5}, {0, 2, 0.25},
                                                         {1, 1, -2.0}, {1, 2, 0.0}});
  const Eigen::MatrixXd d = m.to_dense();
  CHECK(d(0, 2) == 0.75);
  CHECK(d(2, 0) == 0.75);
  CHECK(d(2, 2) == 0.0);
  CHECK(m.nnz() == 4);  // three diagonals plus one coupling
  const Eigen::VectorXd x = Eigen::Vector3d(1.0, 2.0, 3.0);
  CHECK((m.apply(x) - d * x).norm() < 1e-15);
  CHECK(m.off_diagonal_row_sums() == std::vector<double>{0.75, 0.0, 0.75});
  std::ostringstream out;
  write_coordinate(m, out);
  CHECK(out.str() == "1 1 1\n1 3 0.75\n2 2 -2\n3 3 0\n");
}
