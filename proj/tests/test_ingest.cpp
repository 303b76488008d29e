#include <catch_amalgamated.hpp>

#include "qpeci/errors.hpp"
#include "qpeci/ingest.hpp"
#include "support.hpp"

using namespace qpeci;
using Catch::Approx;

namespace {

const char* kTwoOrbital = R"( &FCI NORB=2,NELEC=2,MS2=0,
  ORBSYM=1,2,
  ISYM=1,
 &END
 0.5  1 1 1 1
 0.2  2 1 2 1
 0.6  2 2 1 1
 0.7  2 2 2 2
 -1.2 1 1 0 0
 0.05 2 1 0 0
 -0.4 2 2 0 0
 0.3  0 0 0 0
)";

}  // namespace

TEST_CASE("FCIDUMP records land in 0-based symmetric storage") {
  const auto t = parse_fcidump(std::string_view(kTwoOrbital));
  CHECK(t.n_orbitals() == 2);
  CHECK(t.n_alpha() == 1);
  CHECK(t.n_beta() == 1);
  CHECK(t.orbital_irreps() == std::vector<Irrep>{0, 1});
  CHECK(t.target_irrep() == 0);
  CHECK(t.core_energy() == 0.3);
  CHECK(t.one(0, 1) == 0.05);
  CHECK(t.one(1, 0) == 0.05);
  CHECK(t.two(1, 0, 1, 0) == 0.2);
  for (auto [p, q, r, s] : {std::array{0, 1, 0, 1}, {1, 0, 0, 1}, {0, 1, 1, 0}, {1, 0, 1, 0}})
    CHECK(t.two(p, q, r, s) == 0.2);
  CHECK(t.two(0, 0, 1, 1) == 0.6);
  CHECK(t.two(1, 1, 0, 0) == 0.6);
  CHECK(t.two(0, 1, 1, 1) == 0.0);
}

TEST_CASE("namelist variants") {
  const auto t = parse_fcidump(std::string_view(
      "&FCI NORB=3, NELEC=2, MS2=2, ORBSYM=3*1 /\n 1.0 1 1 1 1\n"));
  CHECK(t.n_alpha() == 2);
  CHECK(t.n_beta() == 0);
  CHECK(t.orbital_irreps() == std::vector<Irrep>{0, 0, 0});
  const auto u = parse_fcidump(std::string_view("$FCI NORB=1,NELEC=2,MS2=0 $END\n 2.0 1 1 0 0\n"));
  CHECK(u.one(0, 0) == 2.0);
}

TEST_CASE("records with only the first index are ignored") {
  const auto t = parse_fcidump(std::string_view(
      "&FCI NORB=2,NELEC=2,MS2=0 &END\n -0.5 1 0 0 0\n 1.0 1 1 0 0\n"));
  CHECK(t.one(0, 0) == 1.0);
}

TEST_CASE("FCIDUMP errors") {
  SECTION("index past NORB") {
    CHECK_THROWS_AS(parse_fcidump(std::string_view("&FCI NORB=2,NELEC=2,MS2=0 &END\n 1.0 3 1 1 1\n")),
                    IndexError);
  }
  SECTION("conflicting duplicate") {
    CHECK_THROWS_AS(parse_fcidump(std::string_view(
                        "&FCI NORB=2,NELEC=2,MS2=0 &END\n 1.0 2 1 1 1\n 1.5 1 2 1 1\n")),
                    ConsistencyError);
  }
  SECTION("duplicate within tolerance is accepted") {
    CHECK_NOTHROW(parse_fcidump(std::string_view(
        "&FCI NORB=2,NELEC=2,MS2=0 &END\n 1.0 2 1 1 1\n 1.00000000001 1 1 1 2\n")));
  }
  SECTION("unparseable value names its line") {
    try {
      parse_fcidump(std::string_view("&FCI NORB=2,NELEC=2,MS2=0 &END\n 1.0 1 1 1 1\n x 1 1 1 1\n"));
      FAIL("no exception");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SECTION("bad index pattern") {
    CHECK_THROWS_AS(parse_fcidump(std::string_view("&FCI NORB=2,NELEC=2,MS2=0 &END\n 1.0 1 1 1 0\n")),
                    ParseError);
  }
  SECTION("missing header") {
    CHECK_THROWS_AS(parse_fcidump(std::string_view(" 1.0 1 1 1 1\n")), ParseError);
  }
  SECTION("unterminated header") {
    CHECK_THROWS_AS(parse_fcidump(std::string_view("&FCI NORB=2,NELEC=2,MS2=0\n")), ParseError);
  }
  SECTION("NELEC and MS2 of different parity") {
    CHECK_THROWS_AS(parse_fcidump(std::string_view("&FCI NORB=2,NELEC=2,MS2=1 &END\n")),
                    ConsistencyError);
  }
  SECTION("ORBSYM length") {
    CHECK_THROWS_AS(parse_fcidump(std::string_view("&FCI NORB=2,NELEC=2,MS2=0,ORBSYM=1 &END\n")),
                    ParseError);
  }
  SECTION("missing file") {
    CHECK_THROWS_AS(read_fcidump("/nonexistent/file.fcidump"), ParseError);
  }
}

TEST_CASE("write and parse round trip exactly") {
  std::mt19937_64 rng(11);
  const auto t = support::random_integrals(4, 4, 0, rng, {0, 1, 2, 3});
  const auto u = parse_fcidump(std::string_view(write_fcidump(t)));
  CHECK(u.n_orbitals() == 4);
  CHECK(u.orbital_irreps() == t.orbital_irreps());
  CHECK(u.core_energy() == t.core_energy());
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t q = 0; q < 4; ++q) {
      CHECK(u.one(p, q) == t.one(p, q));
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t s = 0; s < 4; ++s) CHECK(u.two(p, q, r, s) == t.two(p, q, r, s));
    }
}

TEST_CASE("bundled fixtures parse") {
  const auto h2 = read_fcidump(support::fixture("h2_sto3g_r1.40.fcidump"));
  CHECK(h2.n_orbitals() == 2);
  CHECK(h2.point_group_order() == 8);
  const auto w = read_fcidump(support::fixture("h2o_631g_a1.00.fcidump"));
  CHECK(w.n_orbitals() == 13);
  CHECK(w.n_electrons() == 10);
  CHECK(w.point_group_order() == 4);
  CHECK(w.core_energy() == Approx(9.0091).margin(1e-3));
}

TEST_CASE("dense operator format") {
  const auto op = parse_dense_operator(std::string_view("2\n1 0.5\n0.5 -1\n"));
  CHECK(op.dim() == 2);
  CHECK(op.entries(0, 1) == 0.5);
  CHECK(parse_dense_operator(std::string_view("1 -3.25")).entries(0, 0) == -3.25);
  CHECK_THROWS_AS(parse_dense_operator(std::string_view("2\n1 0.5\n0.4 -1\n")), ConsistencyError);
  CHECK_THROWS_AS(parse_dense_operator(std::string_view("2\n1 0.5\n0.5\n")), ParseError);
  CHECK_THROWS_AS(parse_dense_operator(std::string_view("2\n1 0.5\n0.5 -1 7\n")), ParseError);
  CHECK_THROWS_AS(parse_dense_operator(std::string_view("1 nan")), ConsistencyError);
}
