// qpeci: command-line front end.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qpeci/cispace.hpp"
#include "qpeci/csv.hpp"
#include "qpeci/errors.hpp"
#include "qpeci/evolution.hpp"
#include "qpeci/hamiltonian.hpp"
#include "qpeci/ingest.hpp"
#include "qpeci/manifest.hpp"
#include "qpeci/qpe.hpp"
#include "qpeci/reference.hpp"
#include "qpeci/scan.hpp"
#include "qpeci/solver.hpp"

using namespace qpeci;

namespace {

struct InputOptions {
  std::string fcidump;
  std::string dense;
  std::string space = "fci";
  std::string frozen;
  std::string active;
  std::optional<Irrep> irrep;
  std::optional<std::size_t> n_alpha;
  std::optional<std::size_t> n_beta;
};

void add_input_options(CLI::App* cmd, InputOptions& o) {
  cmd->add_option("fcidump", o.fcidump, "FCIDUMP integral file");
  cmd->add_option("--dense", o.dense, "dense symmetric operator file instead of integrals");
  cmd->add_option("--space", o.space, "determinant space")
      ->check(CLI::IsMember({"fci", "cas", "mrci"}));
  cmd->add_option("--frozen", o.frozen, "frozen (doubly occupied) orbitals, 0-based, e.g. 0,1");
  cmd->add_option("--active", o.active, "active orbitals, 0-based, e.g. 2-6");
  cmd->add_option("--irrep", o.irrep, "target irrep (default: from the file)");
  cmd->add_option("--nalpha", o.n_alpha, "alpha electrons (default: from the file)");
  cmd->add_option("--nbeta", o.n_beta, "beta electrons (default: from the file)");
}

/// Operator plus, for integral input, the model (CAS or FCI) space and the
/// target space it is embedded in.
struct Problem {
  std::optional<IntegralTable> ints;
  std::shared_ptr<const CIBasis> model;
  std::shared_ptr<const CIBasis> basis;
  SparseSymmetricMatrix h;

  bool has_basis() const { return basis != nullptr; }
  SparseHamiltonian hamiltonian() const { return {basis, h}; }
};

Problem load(const InputOptions& o) {
  Problem p;
  if (!o.dense.empty()) {
    if (!o.fcidump.empty()) throw DomainError("give either an FCIDUMP file or --dense, not both");
    p.h = SparseSymmetricMatrix::from_dense(read_dense_operator(o.dense).entries);
    return p;
  }
  if (o.fcidump.empty()) throw DomainError("no input: give an FCIDUMP file or --dense");
  p.ints = read_fcidump(o.fcidump);
  const auto& ints = *p.ints;
  const std::size_t n = ints.n_orbitals();
  const auto frozen = parse_index_list(o.frozen);
  std::vector<std::size_t> active = parse_index_list(o.active);
  if (o.space == "fci") {
    if (!active.empty()) throw DomainError("--active applies to the cas and mrci spaces");
    std::vector<bool> is_frozen(n, false);
    for (auto f : frozen)
      if (f < n) is_frozen[f] = true;
    for (std::size_t i = 0; i < n; ++i)
      if (!is_frozen[i]) active.push_back(i);
  } else if (active.empty()) {
    throw DomainError("--space " + o.space + " needs --active");
  }
  const auto partition = OrbitalPartition::make(n, frozen, active);
  p.model = std::make_shared<const CIBasis>(
      enumerate_cas(partition, o.n_alpha.value_or(ints.n_alpha()),
                    o.n_beta.value_or(ints.n_beta()), o.irrep.value_or(ints.target_irrep()),
                    ints.orbital_irreps()));
  if (p.model->empty()) throw EmptyBasisError("no determinant has the requested irrep");
  p.basis = o.space == "mrci" ? std::make_shared<const CIBasis>(enumerate_mrci_sd(*p.model, ints))
                              : p.model;
  p.h = build_sparse(p.basis, ints).matrix;
  return p;
}

Spectrum full_spectrum(const Problem& p) {
  if (p.has_basis()) return dense_eigh(p.hamiltonian());
  return dense_eigh(p.h.to_dense());
}

// ---------------------------------------------------------------- solve

struct SolveOptions {
  InputOptions in;
  std::size_t roots = 1;
  DavidsonOptions davidson;
};

int cmd_solve(const SolveOptions& o) {
  const Problem p = load(o.in);
  if (o.roots == 0 || o.roots > p.h.dim())
    throw DomainError("requested " + std::to_string(o.roots) + " roots of a " +
                      std::to_string(p.h.dim()) + "-dimensional space");
  CsvWriter csv(std::cout);
  if (!p.has_basis()) {
    const Spectrum s = full_spectrum(p);
    csv.row({"root", "energy"});
    for (std::size_t r = 0; r < o.roots; ++r) csv.row({std::to_string(r), format_real(s[r].energy)});
    return 0;
  }
  const Spectrum s = lowest_roots(p.hamiltonian(), o.roots, o.davidson);
  const std::size_t n = p.basis->n_orbitals();
  std::vector<std::string> head{"root", "energy", "s2", "spin"};
  for (std::size_t i = 0; i < n; ++i) head.push_back("occ_" + std::to_string(i));
  csv.row(head);
  for (std::size_t r = 0; r < o.roots; ++r) {
    const double s2 = s_squared_expectation(s[r].vector, *p.basis);
    std::vector<std::string> f{std::to_string(r), format_real(s[r].energy), format_real(s2),
                               format_real(spin_from_s_squared(s2))};
    const auto occ = natural_occupations(one_particle_density_matrix(s[r].vector, *p.basis));
    for (Eigen::Index i = 0; i < occ.size(); ++i) f.push_back(format_real(occ(i)));
    csv.row(f);
  }
  return 0;
}

// ---------------------------------------------------------------- qpe

struct QpeCliOptions {
  InputOptions in;
  std::string ref = "hf";
  std::size_t bits = 8;
  std::string backend = "exact";
  std::string mode = "qft";
  std::size_t shots = 1000;
  std::optional<std::uint64_t> seed;
  std::string window;
  std::optional<double> t_max;
  std::size_t samples = 1024;
  std::string digits;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

std::size_t to_index(const std::string& s, const std::string& what) {
  const auto v = parse_index_list(s);
  if (v.size() != 1) throw DomainError("bad " + what + " '" + s + "'");
  return v.front();
}

/// Reference in the target space, from "hf", "cas:<root>" or "trunc:<root>:<k>".
Eigen::VectorXd reference_vector(const Problem& p, const std::string& spec) {
  const auto parts = split(spec, ':');
  if (!p.has_basis()) {
    if (spec != "hf") throw DomainError("operator input supports only --ref hf");
    const auto& d = p.h.diagonal();
    const auto best = std::min_element(d.begin(), d.end()) - d.begin();
    return Eigen::VectorXd::Unit(static_cast<Eigen::Index>(d.size()), best);
  }
  ReferenceState ref;
  if (parts[0] == "hf" && parts.size() == 1) {
    std::vector<double> diag(p.model->size());
    for (std::size_t i = 0; i < diag.size(); ++i)
      diag[i] = slater_condon_element((*p.model)[i], (*p.model)[i], *p.ints);
    ref = hf_reference(p.model, diag);
  } else if (parts[0] == "cas" && parts.size() == 2) {
    ref = cas_reference(p.model, *p.ints, to_index(parts[1], "root")).state;
  } else if (parts[0] == "trunc" && parts.size() == 3) {
    ref = truncate_reference(cas_reference(p.model, *p.ints, to_index(parts[1], "root")).state,
                             to_index(parts[2], "truncation size"));
  } else {
    throw DomainError("--ref must be hf, cas:<root> or trunc:<root>:<k>, got '" + spec + "'");
  }
  return embed(ref, *p.basis);
}

int cmd_qpe(const QpeCliOptions& o) {
  const Problem p = load(o.in);
  const Eigen::VectorXd ref = reference_vector(p, o.ref);
  const Backend backend = Backend::parse(o.backend);

  std::optional<Spectrum> spectrum;
  EnergyWindow window;
  if (!o.window.empty()) {
    double lo = 0.0, hi = 0.0;
    char tail = 0;
    if (std::sscanf(o.window.c_str(), "%lf,%lf%c", &lo, &hi, &tail) != 2)
      throw ParseError("--window expects lo,hi, got '" + o.window + "'");
    window = EnergyWindow::make(lo, hi);
  } else {
    spectrum = full_spectrum(p);
    window = auto_window(*spectrum);
  }

  CsvWriter csv(std::cout);
  const auto model = [&] {
    if (backend.kind == Backend::Kind::exact) {
      if (!spectrum) spectrum = full_spectrum(p);
      return exact_phase_model(*spectrum, window);
    }
    return make_phase_model(p.h, window, backend);
  };

  if (!o.digits.empty()) {
    const auto ms = parse_index_list(o.digits);
    const auto rows = digits_table(model(), ref, ms);
    csv.row({"m", "energy", "half_bin", "full_bin", "probability"});
    for (const auto& r : rows)
      csv.row({std::to_string(r.m), format_real(r.energy), format_real(r.half_bin),
               format_real(r.full_bin), format_real(r.probability)});
    return 0;
  }

  if (o.mode == "qft") {
    const auto dist = qpe_distribution(model(), ref, o.bits);
    const auto top = dist.top().first;
    csv.row({"bin", "bits", "energy", "half_bin", "probability", "top"});
    for (const auto& [bin, prob] : dist.probabilities)
      csv.row({std::to_string(bin), dist.bitstring(bin), format_real(dist.energy_of(bin)),
               format_real(dist.half_bin()), format_real(prob), bin == top ? "1" : "0"});
    if (dist.truncated_mass > 0.0)
      std::cerr << "note: bins far from every eigenphase omitted, mass "
                << format_real(dist.truncated_mass) << "\n";
    return 0;
  }

  if (o.mode == "ipea") {
    if (!o.seed) throw DomainError("--mode ipea requires --seed");
    const auto run = ipea_sample(model(), ref, o.bits, o.shots, *o.seed);
    csv.row({"record", "shot", "bits", "energy", "count"});
    for (std::size_t s = 0; s < run.samples.size(); ++s)
      csv.row({"shot", std::to_string(s), run.samples[s].bits, format_real(run.samples[s].energy),
               ""});
    PEAOutcome grid;
    grid.m = run.m;
    grid.window = run.window;
    for (const auto& [bin, count] : run.counts())
      csv.row({"frequency", "", grid.bitstring(bin), format_real(grid.energy_of(bin)),
               std::to_string(count)});
    return 0;
  }

  // spectrum
  if (!spectrum) spectrum = full_spectrum(p);
  const double t_max = o.t_max.value_or(2.0 * std::numbers::pi * static_cast<double>(o.samples) /
                                        window.width());
  const auto result = autocorrelation_spectrum(ExactEvolver(*spectrum), ref, window, t_max, o.samples);
  if (result.resolution_warning) std::cerr << "warning: " << *result.resolution_warning << "\n";
  csv.row({"energy", "weight", "magnitude", "rayleigh_limit"});
  for (const auto& pk : result.peaks)
    csv.row({format_real(pk.energy), format_real(pk.weight), format_real(pk.magnitude),
             format_real(result.rayleigh_limit)});
  return 0;
}

// ---------------------------------------------------------------- scan, dump-h, info

int cmd_scan(const std::string& manifest, const std::string& output) {
  const auto result = run_scan(read_manifest(manifest));
  if (output.empty()) {
    write_scan_csv(std::cout, result);
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) throw DomainError("cannot write " + output);
    write_scan_csv(out, result);
  }
  for (const auto& r : result.rows)
    if (!r.error.empty()) std::cerr << r.label << ": " << r.error << "\n";
  return result.clean() ? 0 : 1;
}

int cmd_dump(const InputOptions& in, bool determinants) {
  const Problem p = load(in);
  if (determinants) {
    if (!p.has_basis()) throw DomainError("operator input has no determinants");
    CsvWriter csv(std::cout);
    csv.row({"index", "determinant"});
    for (std::size_t i = 0; i < p.basis->size(); ++i)
      csv.row({std::to_string(i), to_string((*p.basis)[i], p.basis->n_orbitals())});
    return 0;
  }
  write_coordinate(p.h, std::cout);
  return 0;
}

int cmd_info(const InputOptions& in) {
  const Problem p = load(in);
  CsvWriter csv(std::cout);
  csv.row({"key", "value"});
  if (p.ints) {
    const auto& t = *p.ints;
    csv.row({"n_orbitals", std::to_string(t.n_orbitals())});
    csv.row({"n_alpha", std::to_string(p.basis->n_alpha())});
    csv.row({"n_beta", std::to_string(p.basis->n_beta())});
    csv.row({"target_irrep", std::to_string(*p.basis->target_irrep())});
    csv.row({"point_group_order", std::to_string(t.point_group_order())});
    csv.row({"core_energy", format_real(t.core_energy())});
    csv.row({"model_dimension", std::to_string(p.model->size())});
  }
  csv.row({"dimension", std::to_string(p.h.dim())});
  csv.row({"qubits", std::to_string(qubit_count(p.h.dim()))});
  csv.row({"nonzeros", std::to_string(p.h.nnz())});
  return 0;
}

int exit_code(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const IndexError*>(&e) ||
      dynamic_cast<const ConsistencyError*>(&e))
    return 2;
  if (dynamic_cast<const ConvergenceError*>(&e)) return 3;
  if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const EmptyBasisError*>(&e) ||
      dynamic_cast<const CapacityError*>(&e) || dynamic_cast<const InclusionError*>(&e) ||
      dynamic_cast<const WindowError*>(&e))
    return 4;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase estimation over configuration-interaction Hamiltonians"};
  app.require_subcommand(1);

  SolveOptions solve;
  auto* c_solve = app.add_subcommand("solve", "lowest eigenpairs, <S^2> and natural occupations");
  add_input_options(c_solve, solve.in);
  c_solve->add_option("--roots", solve.roots, "number of roots");
  c_solve->add_option("--tol", solve.davidson.tol, "Davidson residual tolerance");
  c_solve->add_option("--max-iter", solve.davidson.max_iter, "Davidson iteration limit");

  QpeCliOptions qpe;
  auto* c_qpe = app.add_subcommand("qpe", "phase estimation distribution, sampling or spectrum");
  add_input_options(c_qpe, qpe.in);
  c_qpe->add_option("--ref", qpe.ref, "hf | cas:<root> | trunc:<root>:<k>");
  c_qpe->add_option("--bits", qpe.bits, "index register size m");
  c_qpe->add_option("--backend", qpe.backend, "exact | trotter:<steps>");
  c_qpe->add_option("--mode", qpe.mode, "qft | ipea | spectrum")
      ->check(CLI::IsMember({"qft", "ipea", "spectrum"}));
  c_qpe->add_option("--shots", qpe.shots, "IPEA shots");
  c_qpe->add_option("--seed", qpe.seed, "IPEA seed (required for ipea)");
  c_qpe->add_option("--window", qpe.window, "energy window lo,hi");
  c_qpe->add_option("--tmax", qpe.t_max, "autocorrelation time span");
  c_qpe->add_option("--samples", qpe.samples, "autocorrelation samples (power of two)");
  c_qpe->add_option("--digits-table", qpe.digits, "index register sizes, e.g. 2,8,16,24");

  std::string manifest, scan_out;
  auto* c_scan = app.add_subcommand("scan", "bond-stretch scan from a manifest");
  c_scan->add_option("manifest", manifest, "scan manifest")->required();
  c_scan->add_option("-o,--output", scan_out, "write the CSV here instead of stdout");

  InputOptions dump;
  bool dump_dets = false;
  auto* c_dump = app.add_subcommand("dump-h", "Hamiltonian in coordinate format");
  add_input_options(c_dump, dump);
  c_dump->add_flag("--determinants", dump_dets, "list the basis instead");

  InputOptions info;
  auto* c_info = app.add_subcommand("info", "sizes of the integral file and spaces");
  add_input_options(c_info, info);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*c_solve) return cmd_solve(solve);
    if (*c_qpe) return cmd_qpe(qpe);
    if (*c_scan) return cmd_scan(manifest, scan_out);
    if (*c_dump) return cmd_dump(dump, dump_dets);
    if (*c_info) return cmd_info(info);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  }
  return 1;
}
