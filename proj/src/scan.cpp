#include "qpeci/scan.hpp"

#include <algorithm>
#include <future>
#include <memory>
#include <ostream>

#include "qpeci/cispace.hpp"
#include "qpeci/csv.hpp"
#include "qpeci/errors.hpp"
#include "qpeci/hamiltonian.hpp"
#include "qpeci/reference.hpp"
#include "qpeci/solver.hpp"

namespace qpeci {

namespace {

struct PointData {
  std::shared_ptr<const CIBasis> model;
  std::shared_ptr<const CIBasis> mrci;
  Spectrum cas;   // lowest model-space roots
  Spectrum full;  // lowest MRCI roots
  ReferenceState hf;
};

// Roots beyond the highest one of interest, so followed roots can swap in.
constexpr std::size_t kSpareRoots = 2;

PointData solve_point(const ScanManifest& m, const ScanGeometry& g) {
  const IntegralTable ints = read_fcidump(g.fcidump.string());
  const auto partition = OrbitalPartition::make(ints.n_orbitals(), m.frozen, m.active);
  const std::size_t na = m.n_alpha.value_or(ints.n_alpha());
  const std::size_t nb = m.n_beta.value_or(ints.n_beta());
  const Irrep irrep = m.irrep.value_or(ints.target_irrep());
  PointData d;
  d.model = std::make_shared<const CIBasis>(
      enumerate_cas(partition, na, nb, irrep, ints.orbital_irreps()));
  if (d.model->empty()) throw EmptyBasisError("empty model space in the requested irrep");
  d.mrci = std::make_shared<const CIBasis>(enumerate_mrci_sd(*d.model, ints));

  const std::size_t want = *std::max_element(m.roots.begin(), m.roots.end()) + 1 + kSpareRoots;
  const auto h_model = build_sparse(d.model, ints);
  d.cas = lowest_roots(h_model, std::min(want, h_model.dim()));
  d.hf = hf_reference(d.model, h_model.matrix.diagonal());
  const auto h_full = build_sparse(d.mrci, ints);
  d.full = lowest_roots(h_full, std::min(want, h_full.dim()));
  return d;
}

std::vector<std::size_t> follow(const std::optional<Eigen::MatrixXd>& previous,
                                               const Spectrum& current,
                                               const std::vector<std::size_t>& roots) {
  if (!previous) return roots;
  return home_roots(*previous, current);
}

Eigen::MatrixXd columns(const Spectrum& s, const std::vector<std::size_t>& idx) {
  Eigen::MatrixXd out(s[0].vector.size(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = s[idx[i]].vector;
  return out;
}

}  // namespace

bool ScanResult::clean() const {
  return std::all_of(rows.begin(), rows.end(), [](const ScanRow& r) { return r.error.empty(); });
}

ScanResult run_scan(const ScanManifest& manifest) {
  // geometries are independent until root following, which runs in order
  std::vector<std::future<PointData>> jobs;
  for (const auto& g : manifest.geometries)
    jobs.push_back(std::async(std::launch::async, solve_point, std::cref(manifest), std::cref(g)));

  ScanResult result;
  result.truncations = manifest.truncations;
  std::optional<Eigen::MatrixXd> prev_full, prev_cas;
  for (std::size_t gi = 0; gi < manifest.geometries.size(); ++gi) {
    const auto& g = manifest.geometries[gi];
    std::vector<ScanRow> rows;
    try {
      const PointData d = jobs[gi].get();
      for (auto r : manifest.roots)
        if (r >= d.cas.size() || r >= d.full.size())
          throw DomainError("root " + std::to_string(r) + " beyond the space dimension");
      const auto full_idx = follow(prev_full, d.full, manifest.roots);
      const auto cas_idx = follow(prev_cas, d.cas, manifest.roots);
      for (std::size_t i = 0; i < manifest.roots.size(); ++i) {
        ScanRow row;
        row.label = g.label;
        row.a = g.a;
        row.root = manifest.roots[i];
        row.model_dim = d.model->size();
        row.mrci_dim = d.mrci->size();
        const std::size_t target = full_idx[i];
        row.energy = d.full[target].energy;
        row.p_hf = success_probability(d.hf, d.full, target);
        const ReferenceState cas{d.cas[cas_idx[i]].vector, d.model,
                                 "CAS-root-" + std::to_string(cas_idx[i])};
        row.p_cas = success_probability(cas, d.full, target);
        for (auto k : manifest.truncations)
          row.p_trunc.push_back(success_probability(truncate_reference(cas, k), d.full, target));
        rows.push_back(std::move(row));
      }
      prev_full = columns(d.full, full_idx);
      prev_cas = columns(d.cas, cas_idx);
    } catch (const std::exception& e) {
      rows.clear();
      for (auto r : manifest.roots) {
        ScanRow row;
        row.label = g.label;
        row.a = g.a;
        row.root = r;
        row.error = e.what();
        rows.push_back(std::move(row));
      }
    }
    for (auto& r : rows) result.rows.push_back(std::move(r));
  }
  return result;
}

void write_scan_csv(std::ostream& out, const ScanResult& result) {
  CsvWriter csv(out);
  std::vector<std::string> head{"label", "a", "root", "p_hf", "p_cas"};
  for (auto k : result.truncations) head.push_back("p_trunc_" + std::to_string(k));
  head.push_back("E_root");
  head.push_back("error");
  csv.row(head);
  for (const auto& r : result.rows) {
    std::vector<std::string> f{r.label, format_real(r.a), std::to_string(r.root)};
    if (r.error.empty()) {
      f.push_back(format_real(r.p_hf));
      f.push_back(format_real(r.p_cas));
      for (double p : r.p_trunc) f.push_back(format_real(p));
      f.push_back(format_real(r.energy));
    } else {
      f.resize(f.size() + 3 + result.truncations.size());
    }
    f.push_back(r.error);
    csv.row(f);
  }
}

}  // namespace qpeci
