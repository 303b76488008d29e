#include <catch_amalgamated.hpp>

#include <set>

#include "oracles/mrci.hpp"
#include "qpeci/cispace.hpp"
#include "qpeci/errors.hpp"
#include "support.hpp"

using namespace qpeci;

namespace {

std::size_t binom(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> v;
  for (auto i = lo; i < hi; ++i) v.push_back(i);
  return v;
}

}  // namespace

TEST_CASE("qubit counts") {
  CHECK(qubit_count(13872) == 14);
  CHECK(qubit_count(18) == 5);
  CHECK(qubit_count(1) == 0);
  CHECK(qubit_count(2) == 1);
  CHECK(qubit_count(16) == 4);
  CHECK(qubit_count(17) == 5);
  CHECK_THROWS_AS(qubit_count(0), DomainError);
}

TEST_CASE("determinant strings") {
  CHECK(to_string({0b011, 0b101}, 4) == "2ab0");
}

TEST_CASE("partition validation") {
  const auto p = OrbitalPartition::make(5, {0}, {1, 2, 3});
  CHECK(p.external == std::vector<std::size_t>{4});
  CHECK(p.frozen_mask() == 0b1);
  CHECK(p.active_mask() == 0b1110);
  CHECK(p.external_mask() == 0b10000);
  CHECK_THROWS_AS(OrbitalPartition::make(5, {0}, {0, 1}), DomainError);
  CHECK_THROWS_AS(OrbitalPartition::make(5, {}, {5}), DomainError);
}

TEST_CASE("CAS enumeration without symmetry is the full product of strings") {
  const std::vector<Irrep> irreps(6, 0);
  const auto b = enumerate_cas(OrbitalPartition::full(6), 3, 2, 0, irreps);
  CHECK(b.size() == binom(6, 3) * binom(6, 2));
  for (std::size_t i = 1; i < b.size(); ++i) CHECK(b[i - 1] < b[i]);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.find(b[i]) == i);
}

TEST_CASE("symmetry blocks partition the space") {
  const std::vector<Irrep> irreps{0, 1, 2, 3, 0, 1};
  std::size_t total = 0;
  for (Irrep g = 0; g < 4; ++g) {
    const auto b = enumerate_cas(OrbitalPartition::full(6), 2, 2, g, irreps);
    for (const auto& d : b) CHECK(determinant_irrep(d, irreps) == g);
    total += b.size();
  }
  CHECK(total == binom(6, 2) * binom(6, 2));
}

TEST_CASE("frozen orbitals are doubly occupied and externals empty") {
  const std::vector<Irrep> irreps(6, 0);
  const auto part = OrbitalPartition::make(6, {0}, {1, 2, 3, 4});
  const auto b = enumerate_cas(part, 3, 3, 0, irreps);
  CHECK(b.size() == binom(4, 2) * binom(4, 2));
  for (const auto& d : b) {
    CHECK((d.alpha & 1) == 1);
    CHECK((d.beta & 1) == 1);
    CHECK(((d.alpha | d.beta) & part.external_mask()) == 0);
  }
}

TEST_CASE("infeasible electron counts") {
  const std::vector<Irrep> irreps(4, 0);
  CHECK_THROWS_AS(enumerate_cas(OrbitalPartition::make(4, {0}, {1}), 3, 3, 0, irreps),
                  EmptyBasisError);
  CHECK_THROWS_AS(enumerate_cas(OrbitalPartition::make(4, {0, 1}, {2, 3}), 1, 1, 0, irreps),
                  EmptyBasisError);
  // an empty symmetry block is a valid, empty basis
  const std::vector<Irrep> sym{0, 0};
  CHECK(enumerate_cas(OrbitalPartition::full(2), 1, 1, 1, sym).empty());
}

TEST_CASE("basis construction rejects invalid determinants") {
  const auto part = OrbitalPartition::make(3, {0}, {1, 2});
  CHECK_THROWS_AS(CIBasis({{0b011, 0b011}, {0b011, 0b011}}, 2, 2, 0, part), DomainError);
  CHECK_THROWS_AS(CIBasis({{0b110, 0b011}}, 2, 2, 0, part), DomainError);
  CHECK_THROWS_AS(CIBasis({{0b111, 0b011}}, 2, 2, 0, part), DomainError);
}

TEST_CASE("MRCI-SD matches exhaustive enumeration") {
  struct Case {
    std::size_t n, na, nb;
    std::vector<std::size_t> frozen, active;
    std::vector<Irrep> irreps;
    Irrep target;
  };
  const std::vector<Case> cases{
      {6, 2, 2, {}, {0, 1, 2}, {0, 0, 0, 0, 0, 0}, 0},
      {7, 3, 2, {0}, {1, 2, 3}, {0, 1, 0, 1, 2, 3, 0}, 1},
      {8, 3, 3, {0}, {1, 2, 3, 4}, {0, 0, 1, 2, 3, 0, 1, 3}, 0},
  };
  for (const auto& c : cases) {
    auto model = enumerate_cas(OrbitalPartition::make(c.n, c.frozen, c.active), c.na, c.nb,
                               c.target, c.irreps);
    const auto mrci = enumerate_mrci_sd(model, c.irreps);
    const auto expected = oracle::mrci_sd(model, c.irreps);
    std::set<Determinant> got(mrci.begin(), mrci.end());
    CHECK(got.size() == mrci.size());
    CHECK(got == expected);
    for (std::size_t i = 0; i < model.size(); ++i) CHECK(mrci[i] == model[i]);
    for (std::size_t i = model.size() + 1; i < mrci.size(); ++i) CHECK(mrci[i - 1] < mrci[i]);
  }
}

TEST_CASE("water fixture space sizes") {
  const auto ints = read_fcidump(support::fixture("h2o_631g_a1.00.fcidump"));
  const auto model = enumerate_cas(OrbitalPartition::make(13, {0, 1}, range(2, 7)), 5, 5, 0,
                                   ints.orbital_irreps());
  CHECK(model.size() > 1);
  const auto mrci = enumerate_mrci_sd(model, ints);
  CHECK(mrci.size() > model.size());
  CHECK(std::set<Determinant>(mrci.begin(), mrci.end()) ==
        oracle::mrci_sd(model, ints.orbital_irreps()));
}
