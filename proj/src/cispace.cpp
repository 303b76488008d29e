#include "qpeci/cispace.hpp"

#include <algorithm>
#include <unordered_set>

#include "qpeci/errors.hpp"

namespace qpeci {

namespace {

Bits mask_of(const std::vector<std::size_t>& orbitals) {
  Bits m = 0;
  for (auto p : orbitals) m |= Bits{1} << p;
  return m;
}

std::vector<std::size_t> orbitals_in(Bits mask) {
  std::vector<std::size_t> out;
  while (mask) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

}  // namespace

std::string to_string(const Determinant& d, std::size_t n_orbitals) {
  std::string s(n_orbitals, '0');
  for (std::size_t p = 0; p < n_orbitals; ++p) {
    const bool a = (d.alpha >> p) & 1, b = (d.beta >> p) & 1;
    s[p] = a && b ? '2' : a ? 'a' : b ? 'b' : '0';
  }
  return s;
}

OrbitalPartition OrbitalPartition::make(std::size_t n_orbitals, std::vector<std::size_t> frozen,
                                        std::vector<std::size_t> active) {
  if (n_orbitals > 64) throw DomainError("at most 64 orbitals are supported");
  std::vector<int> seen(n_orbitals, 0);
  for (auto* set : {&frozen, &active}) {
    std::sort(set->begin(), set->end());
    for (auto p : *set) {
      if (p >= n_orbitals) throw DomainError("orbital " + std::to_string(p) + " out of range");
      if (seen[p]++) throw DomainError("orbital " + std::to_string(p) + " listed twice in partition");
    }
  }
  OrbitalPartition part;
  part.frozen = std::move(frozen);
  part.active = std::move(active);
  for (std::size_t p = 0; p < n_orbitals; ++p)
    if (!seen[p]) part.external.push_back(p);
  return part;
}

OrbitalPartition OrbitalPartition::full(std::size_t n_orbitals) {
  std::vector<std::size_t> all(n_orbitals);
  for (std::size_t p = 0; p < n_orbitals; ++p) all[p] = p;
  return make(n_orbitals, {}, std::move(all));
}

Bits OrbitalPartition::frozen_mask() const { return mask_of(frozen); }
Bits OrbitalPartition::active_mask() const { return mask_of(active); }
Bits OrbitalPartition::external_mask() const { return mask_of(external); }

CIBasis::CIBasis(std::vector<Determinant> dets, std::size_t n_alpha, std::size_t n_beta,
                 std::optional<Irrep> target_irrep, OrbitalPartition partition)
    : dets_(std::move(dets)),
      n_alpha_(n_alpha),
      n_beta_(n_beta),
      target_irrep_(target_irrep),
      partition_(std::move(partition)) {
  const Bits frozen = partition_.frozen_mask();
  index_.reserve(dets_.size());
  for (std::size_t i = 0; i < dets_.size(); ++i) {
    const auto& d = dets_[i];
    if (static_cast<std::size_t>(popcount(d.alpha)) != n_alpha_ ||
        static_cast<std::size_t>(popcount(d.beta)) != n_beta_)
      throw DomainError("determinant with wrong electron count in basis");
    if ((d.alpha & frozen) != frozen || (d.beta & frozen) != frozen)
      throw DomainError("determinant leaves a frozen orbital unoccupied");
    if (!index_.emplace(d, i).second) throw DomainError("duplicate determinant in basis");
  }
}

std::optional<std::size_t> CIBasis::find(const Determinant& d) const {
  const auto it = index_.find(d);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CIBasis CIBasis::concat_for_validation(const CIBasis& a, const CIBasis& b) {
  if (a.n_alpha() != b.n_alpha() || a.n_beta() != b.n_beta())
    throw DomainError("cannot concatenate bases with different electron counts");
  std::vector<Determinant> dets(a.begin(), a.end());
  dets.insert(dets.end(), b.begin(), b.end());
  return CIBasis(std::move(dets), a.n_alpha(), a.n_beta(), std::nullopt, a.partition());
}

Irrep determinant_irrep(const Determinant& d, std::span<const Irrep> irreps) {
  Irrep g = 0;
  // doubly occupied orbitals cancel
  for (auto p : orbitals_in(d.alpha ^ d.beta)) g ^= irreps[p];
  return g;
}

std::vector<Bits> combinations(std::span<const std::size_t> orbitals, std::size_t k) {
  std::vector<Bits> out;
  const std::size_t n = orbitals.size();
  if (k > n) return out;
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    Bits b = 0;
    for (auto i : pick) b |= Bits{1} << orbitals[i];
    out.push_back(b);
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

CIBasis enumerate_cas(const OrbitalPartition& partition, std::size_t n_alpha, std::size_t n_beta,
                      Irrep target_irrep, std::span<const Irrep> irreps) {
  const std::size_t nf = partition.frozen.size(), na = partition.active.size();
  if (irreps.size() != partition.n_orbitals())
    throw DomainError("irrep list does not match the partition's orbital count");
  if (n_alpha < nf || n_beta < nf || n_alpha - nf > na || n_beta - nf > na)
    throw EmptyBasisError("cannot place " + std::to_string(n_alpha) + " alpha and " +
                          std::to_string(n_beta) + " beta electrons with " + std::to_string(nf) +
                          " frozen and " + std::to_string(na) + " active orbitals");
  const Bits frozen = partition.frozen_mask();
  const auto alphas = combinations(partition.active, n_alpha - nf);
  const auto betas = combinations(partition.active, n_beta - nf);
  std::vector<Determinant> dets;
  for (Bits a : alphas)
    for (Bits b : betas) {
      const Determinant d{a | frozen, b | frozen};
      if (determinant_irrep(d, irreps) == target_irrep) dets.push_back(d);
    }
  return CIBasis(std::move(dets), n_alpha, n_beta, target_irrep, partition);
}

CIBasis enumerate_mrci_sd(const CIBasis& model, std::span<const Irrep> irreps) {
  const auto& part = model.partition();
  if (part.external.empty()) return model;
  const auto target = model.target_irrep();
  const Bits internal = part.active_mask();
  const Bits external = part.external_mask();

  std::unordered_set<Determinant, DeterminantHash> extra;
  auto add = [&](const Determinant& d) {
    if (model.contains(d)) return;
    if (target && determinant_irrep(d, irreps) != *target) return;
    extra.insert(d);
  };
  auto excite = [](Bits s, std::size_t from, std::size_t to) {
    return (s & ~(Bits{1} << from)) | (Bits{1} << to);
  };

  for (const auto& d : model) {
    const auto occ_a = orbitals_in(d.alpha & internal), occ_b = orbitals_in(d.beta & internal);
    const auto vir_a = orbitals_in(~d.alpha & external), vir_b = orbitals_in(~d.beta & external);
    for (auto i : occ_a)
      for (auto a : vir_a) {
        const Bits sa = excite(d.alpha, i, a);
        add({sa, d.beta});
        for (auto j : occ_b)
          for (auto b : vir_b) add({sa, excite(d.beta, j, b)});
        for (auto j : occ_a)
          for (auto b : vir_a)
            if (j > i && b > a) add({excite(sa, j, b), d.beta});
      }
    for (auto i : occ_b)
      for (auto a : vir_b) {
        const Bits sb = excite(d.beta, i, a);
        add({d.alpha, sb});
        for (auto j : occ_b)
          for (auto b : vir_b)
            if (j > i && b > a) add({d.alpha, excite(sb, j, b)});
      }
  }

  std::vector<Determinant> dets(model.begin(), model.end());
  std::vector<Determinant> sorted(extra.begin(), extra.end());
  std::sort(sorted.begin(), sorted.end());
  dets.insert(dets.end(), sorted.begin(), sorted.end());
  return CIBasis(std::move(dets), model.n_alpha(), model.n_beta(), target, part);
}

CIBasis enumerate_mrci_sd(const CIBasis& model, const IntegralTable& integrals) {
  return enumerate_mrci_sd(model, integrals.orbital_irreps());
}

std::size_t qubit_count(std::size_t dim) {
  if (dim == 0) throw DomainError("qubit_count of an empty space");
  return static_cast<std::size_t>(std::bit_width(dim - 1));
}

}  // namespace qpeci
