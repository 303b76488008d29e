#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qpeci/csv.hpp"
#include "qpeci/errors.hpp"
#include "qpeci/manifest.hpp"
#include "qpeci/scan.hpp"
#include "support.hpp"

using namespace qpeci;
namespace fs = std::filesystem;

namespace {

ScanManifest parse(const std::string& text) {
  std::istringstream in(text);
  return parse_manifest(in, QPECI_FIXTURE_DIR);
}

const std::string kH2 = R"(active = 0,1
roots = 0
truncations = 1 2
geometry
  label = eq
  fcidump = h2_sto3g_r1.40.fcidump
  a = 1.0
geometry
  label = far   # stretched
  fcidump = h2_sto3g_r4.00.fcidump
  a = 2.857
)";

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("index lists") {
  CHECK(parse_index_list("0 1, 3-5") == std::vector<std::size_t>{0, 1, 3, 4, 5});
  CHECK(parse_index_list("").empty());
  CHECK_THROWS_AS(parse_index_list("3-1"), ParseError);
  CHECK_THROWS_AS(parse_index_list("x"), ParseError);
  CHECK_THROWS_AS(parse_index_list("-1"), ParseError);
}

TEST_CASE("manifest parsing") {
  const auto m = parse(kH2);
  REQUIRE(m.geometries.size() == 2);
  CHECK(m.geometries[1].label == "far");
  CHECK(m.geometries[1].a == 2.857);
  CHECK(m.geometries[0].fcidump == fs::path(QPECI_FIXTURE_DIR) / "h2_sto3g_r1.40.fcidump");
  CHECK(m.active == std::vector<std::size_t>{0, 1});
  CHECK(m.truncations == std::vector<std::size_t>{1, 2});
  CHECK_FALSE(m.irrep);
}

TEST_CASE("manifest errors carry line numbers") {
  CHECK(error_line(kH2 + "geometry\n label = eq\n fcidump = h2_sto3g_r4.00.fcidump\n a = 3\n") == 12);
  CHECK(error_line(kH2 + "geometry\n label = x\n fcidump = h2_sto3g_r4.00.fcidump\n a = 2.0\n") == 12);
  CHECK(error_line(kH2 + "geometry\n label = y\n fcidump = missing.fcidump\n a = 9\n") == 12);
  CHECK(error_line("active = 0 1\nbogus = 3\n") == 2);
  CHECK(error_line("active = 0 1\nactive = 0\n") == 2);
  CHECK(error_line("active = 0 1\nroots = x\n") == 2);
  CHECK(error_line("active = 0 1\ngeometry\n label = a\n") == 2);
  CHECK(error_line("active = 0 1\ngeometry\n label = a\n color = red\n") == 4);
  CHECK(error_line("active = 0 1\njunk line\n") == 2);
  CHECK_THROWS_AS(parse("roots = 0\n"), ParseError);
  CHECK_THROWS_AS(read_manifest("/nonexistent.manifest"), ParseError);
}

TEST_CASE("CSV quoting and number format") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(-0.0) == "0");
  CHECK(format_real(1.0 / 3.0) == "0.333333333333");
  CHECK(format_real(-1.23456789012345e-7) == "-1.23456789012e-07");
  std::ostringstream out;
  CsvWriter(out).row({"x", "1,2"});
  CHECK(out.str() == "x,\"1,2\"\r\n");
}

TEST_CASE("model space equal to the full space") {
  const auto r = run_scan(parse(kH2));
  REQUIRE(r.rows.size() == 2);
  CHECK(r.clean());
  for (const auto& row : r.rows) {
    CHECK(row.p_cas == Catch::Approx(1.0).margin(1e-12));
    CHECK(row.model_dim == row.mrci_dim);
    CHECK(row.p_trunc.back() == Catch::Approx(1.0).margin(1e-12));
  }
  CHECK(r.rows[1].p_hf < r.rows[0].p_hf);
}

TEST_CASE("a failing geometry is recorded and the scan goes on") {
  const fs::path dir = fs::temp_directory_path() / "qpeci_scan_test";
  fs::create_directories(dir);
  {
    std::mt19937_64 rng(3);
    std::ofstream(dir / "closed.fcidump") << write_fcidump(support::random_integrals(2, 4, 0, rng));
    fs::copy_file(support::fixture("h2_sto3g_r1.40.fcidump"), dir / "h2.fcidump",
                  fs::copy_options::overwrite_existing);
  }
  std::istringstream in(
      "active = 0 1\nroots = 1\n"
      "geometry\n label = bad\n fcidump = closed.fcidump\n a = 1\n"
      "geometry\n label = good\n fcidump = h2.fcidump\n a = 2\n");
  const auto r = run_scan(parse_manifest(in, dir));
  REQUIRE(r.rows.size() == 2);
  CHECK_FALSE(r.clean());
  CHECK_FALSE(r.rows[0].error.empty());
  CHECK(r.rows[1].error.empty());
  std::ostringstream out;
  write_scan_csv(out, r);
  const std::string csv = out.str();
  CHECK(csv.rfind("label,a,root,p_hf,p_cas,E_root,error\r\n", 0) == 0);
  CHECK(csv.find("bad,1,1,,,,") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("bundled water stretch scan") {
  const auto m = read_manifest(std::string(QPECI_DATA_DIR) + "/water_631g_scan.manifest");
  const auto r = run_scan(m);
  REQUIRE(r.clean());
  REQUIRE(r.rows.size() == m.geometries.size());
  CHECK(r.rows.back().p_hf < r.rows.front().p_hf);
  for (const auto& row : r.rows) {
    CHECK(row.p_cas >= 0.9);
    for (std::size_t i = 1; i < row.p_trunc.size(); ++i) CHECK(row.p_trunc[i] >= row.p_trunc[i - 1]);
    CHECK(row.p_trunc.back() <= row.p_cas + 1e-12);
  }
  std::ostringstream a, b;
  write_scan_csv(a, r);
  write_scan_csv(b, run_scan(m));
  CHECK(a.str() == b.str());
}
