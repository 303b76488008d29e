#pragma once

// Brute-force second quantization: the Hamiltonian applied term by term
// with fermionic operators acting on occupation-number states.

#include <bit>
#include <cstdint>
#include <optional>
#include <unordered_map>

#include "qpeci/cispace.hpp"
#include "qpeci/ingest.hpp"

namespace oracle {

// spin-orbital k: alpha p -> p, beta p -> n + p; the state is the product
// of creators in ascending k acting on the vacuum
using Fock = std::uint64_t;

struct Term {
  Fock state;
  int sign;
};

inline int parity_below(Fock s, unsigned k) {
  const Fock below = k == 0 ? 0 : (s & ((Fock{1} << k) - 1));
  return std::popcount(below) & 1 ? -1 : 1;
}

inline std::optional<Term> annihilate(Fock s, unsigned k) {
  if (!((s >> k) & 1)) return std::nullopt;
  return Term{s & ~(Fock{1} << k), parity_below(s, k)};
}

inline std::optional<Term> create(Fock s, unsigned k) {
  if ((s >> k) & 1) return std::nullopt;
  return Term{s | (Fock{1} << k), parity_below(s, k)};
}

inline Fock to_fock(const qpeci::Determinant& d, std::size_t n) {
  return d.alpha | (d.beta << n);
}

/// H|ket> as a map from Fock state to amplitude.
inline std::unordered_map<Fock, double> apply_h(Fock ket, const qpeci::IntegralTable& ints) {
  const unsigned n = static_cast<unsigned>(ints.n_orbitals());
  std::unordered_map<Fock, double> out;
  out[ket] += ints.core_energy();
  for (unsigned sigma = 0; sigma < 2; ++sigma)
    for (unsigned p = 0; p < n; ++p)
      for (unsigned q = 0; q < n; ++q) {
        const double h = ints.one(p, q);
        if (h == 0.0) continue;
        auto t1 = annihilate(ket, q + sigma * n);
        if (!t1) continue;
        auto t2 = create(t1->state, p + sigma * n);
        if (!t2) continue;
        out[t2->state] += h * t1->sign * t2->sign;
      }
  // 1/2 sum (pq|rs) a+_{p s} a+_{r t} a_{s t} a_{q s}
  for (unsigned sg = 0; sg < 2; ++sg)
    for (unsigned tg = 0; tg < 2; ++tg)
      for (unsigned q = 0; q < n; ++q) {
        auto t1 = annihilate(ket, q + sg * n);
        if (!t1) continue;
        for (unsigned s = 0; s < n; ++s) {
          auto t2 = annihilate(t1->state, s + tg * n);
          if (!t2) continue;
          for (unsigned r = 0; r < n; ++r) {
            auto t3 = create(t2->state, r + tg * n);
            if (!t3) continue;
            for (unsigned p = 0; p < n; ++p) {
              const double g = ints.two(p, q, r, s);
              if (g == 0.0) continue;
              auto t4 = create(t3->state, p + sg * n);
              if (!t4) continue;
              out[t4->state] += 0.5 * g * t1->sign * t2->sign * t3->sign * t4->sign;
            }
          }
        }
      }
  return out;
}

inline double element(const qpeci::Determinant& bra, const qpeci::Determinant& ket,
                      const qpeci::IntegralTable& ints) {
  const auto n = ints.n_orbitals();
  const auto h = apply_h(to_fock(ket, n), ints);
  const auto it = h.find(to_fock(bra, n));
  return it == h.end() ? 0.0 : it->second;
}

}  // namespace oracle
