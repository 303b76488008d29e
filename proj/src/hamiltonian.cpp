#include "qpeci/hamiltonian.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "qpeci/errors.hpp"

namespace qpeci {

namespace {

// Bits strictly between orbitals a and b.
Bits between(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  if (b - a < 2) return 0;
  return ((Bits{1} << b) - 1) & ~((Bits{2} << a) - 1);
}

int parity_sign(Bits s, std::size_t created, std::size_t annihilated) {
  return (popcount(s & between(created, annihilated)) & 1) ? -1 : 1;
}

std::size_t lowest(Bits b) { return static_cast<std::size_t>(std::countr_zero(b)); }

double diagonal_element(const Determinant& d, const IntegralTable& ints) {
  double e = ints.core_energy();
  std::vector<std::size_t> occ_a, occ_b;
  for (Bits s = d.alpha; s; s &= s - 1) occ_a.push_back(lowest(s));
  for (Bits s = d.beta; s; s &= s - 1) occ_b.push_back(lowest(s));
  for (auto i : occ_a) e += ints.one(i, i);
  for (auto i : occ_b) e += ints.one(i, i);
  for (const auto* occ : {&occ_a, &occ_b})
    for (std::size_t x = 0; x < occ->size(); ++x)
      for (std::size_t y = 0; y < x; ++y) {
        const auto i = (*occ)[x], j = (*occ)[y];
        e += ints.two(i, i, j, j) - ints.two(i, j, j, i);
      }
  for (auto i : occ_a)
    for (auto j : occ_b) e += ints.two(i, i, j, j);
  return e;
}

// <ket with q->p in one spin string|H|ket>; `same` is the string that
// changes, `other` the opposite spin string.
double single_element(Bits same, Bits other, std::size_t p, std::size_t q,
                      const IntegralTable& ints) {
  double v = ints.one(p, q);
  for (Bits s = same & ~(Bits{1} << q); s; s &= s - 1) {
    const auto k = lowest(s);
    v += ints.two(p, q, k, k) - ints.two(p, k, k, q);
  }
  for (Bits s = other; s; s &= s - 1) {
    const auto k = lowest(s);
    v += ints.two(p, q, k, k);
  }
  return parity_sign(same, p, q) * v;
}

double same_spin_double(Bits bra, Bits ket, const IntegralTable& ints) {
  const Bits diff = bra ^ ket;
  Bits created = bra & diff, removed = ket & diff;
  const auto p = lowest(created);
  const auto r = lowest(created & (created - 1));
  const auto q = lowest(removed);
  const auto s = lowest(removed & (removed - 1));
  const int sign1 = parity_sign(ket, p, q);
  const Bits mid = ket ^ (Bits{1} << q) ^ (Bits{1} << p);
  const int sign2 = parity_sign(mid, r, s);
  return sign1 * sign2 * (ints.two(p, q, r, s) - ints.two(p, s, r, q));
}

}  // namespace

double slater_condon_element(const Determinant& bra, const Determinant& ket,
                             const IntegralTable& ints) {
  if (popcount(bra.alpha) != popcount(ket.alpha) || popcount(bra.beta) != popcount(ket.beta))
    throw DomainError("Slater-Condon element between determinants of different electron counts");
  const Bits da = bra.alpha ^ ket.alpha, db = bra.beta ^ ket.beta;
  const int na = popcount(da) / 2, nb = popcount(db) / 2;
  if (na + nb > 2) return 0.0;
  if (na + nb == 0) return diagonal_element(ket, ints);
  if (na == 1 && nb == 0)
    return single_element(ket.alpha, ket.beta, lowest(bra.alpha & da), lowest(ket.alpha & da), ints);
  if (na == 0 && nb == 1)
    return single_element(ket.beta, ket.alpha, lowest(bra.beta & db), lowest(ket.beta & db), ints);
  if (na == 2) return same_spin_double(bra.alpha, ket.alpha, ints);
  if (nb == 2) return same_spin_double(bra.beta, ket.beta, ints);
  const auto p = lowest(bra.alpha & da), q = lowest(ket.alpha & da);
  const auto r = lowest(bra.beta & db), s = lowest(ket.beta & db);
  return parity_sign(ket.alpha, p, q) * parity_sign(ket.beta, r, s) * ints.two(p, q, r, s);
}

SparseSymmetricMatrix SparseSymmetricMatrix::from_entries(std::size_t dim,
                                                          std::vector<Entry> entries) {
  for (auto& e : entries) {
    if (e.row >= dim || e.col >= dim) throw IndexError("sparse entry outside the matrix");
    if (e.col < e.row) std::swap(e.row, e.col);
  }
  for (std::size_t i = 0; i < dim; ++i) entries.push_back({i, i, 0.0});
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseSymmetricMatrix m;
  m.diag_.assign(dim, 0.0);
  m.row_ptr_.assign(dim + 1, 0);
  for (std::size_t k = 0; k < entries.size();) {
    const auto& e = entries[k];
    double v = 0.0;
    std::size_t k2 = k;
    for (; k2 < entries.size() && entries[k2].row == e.row && entries[k2].col == e.col; ++k2)
      v += entries[k2].value;
    if (e.row == e.col || v != 0.0) {
      m.cols_.push_back(e.col);
      m.vals_.push_back(v);
      ++m.row_ptr_[e.row + 1];
      if (e.row == e.col) m.diag_[e.row] = v;
    }
    k = k2;
  }
  for (std::size_t i = 0; i < dim; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
  return m;
}

SparseSymmetricMatrix SparseSymmetricMatrix::from_dense(const Eigen::MatrixXd& a) {
  std::vector<Entry> entries;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i + 1; j < a.cols(); ++j)
      if (a(i, j) != 0.0)
        entries.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), a(i, j)});
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    entries.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(i), a(i, i)});
  return from_entries(static_cast<std::size_t>(a.rows()), std::move(entries));
}

void SparseSymmetricMatrix::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = dim();
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    double acc = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const auto j = cols_[k];
      if (j == i) {
        acc += vals_[k] * xi;
      } else {
        acc += vals_[k] * x[j];
        y[j] += vals_[k] * xi;
      }
    }
    y[i] += acc;
  }
}

Eigen::VectorXd SparseSymmetricMatrix::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(x.size());
  apply(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
        std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
  return y;
}

Eigen::MatrixXd SparseSymmetricMatrix::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for_each_upper([&](std::size_t i, std::size_t j, double v) {
    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
  });
  return a;
}

std::vector<double> SparseSymmetricMatrix::off_diagonal_row_sums() const {
  std::vector<double> r(dim(), 0.0);
  for_each_upper([&](std::size_t i, std::size_t j, double v) {
    if (i == j) return;
    r[i] += std::abs(v);
    r[j] += std::abs(v);
  });
  return r;
}

SparseHamiltonian build_sparse(std::shared_ptr<const CIBasis> basis, const IntegralTable& ints,
                               BuildOptions options) {
  if (!basis || basis->empty()) throw DomainError("cannot build a Hamiltonian on an empty basis");
  if (basis->n_orbitals() != ints.n_orbitals())
    throw DomainError("basis and integral table disagree on the orbital count");
  const auto& b = *basis;
  const std::size_t n = b.size();
  std::vector<SparseSymmetricMatrix::Entry> entries;

  auto push = [&](std::size_t i, std::size_t j) {
    const double v = slater_condon_element(b[i], b[j], ints);
    if (i == j || v != 0.0) entries.push_back({i, j, v});
  };

  if (n <= options.all_pairs_limit) {
    for (std::size_t i = 0; i < n; ++i) {
      push(i, i);
      for (std::size_t j = i + 1; j < n; ++j) {
        const int rank = popcount(b[i].alpha ^ b[j].alpha) + popcount(b[i].beta ^ b[j].beta);
        if (rank <= 4) push(i, j);
      }
    }
  } else {
    const Bits all = b.n_orbitals() == 64 ? ~Bits{0} : (Bits{1} << b.n_orbitals()) - 1;
    const Bits movable = all & ~b.partition().frozen_mask();
    auto bits_of = [](Bits s) {
      std::vector<std::size_t> v;
      for (; s; s &= s - 1) v.push_back(lowest(s));
      return v;
    };
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& d = b[i];
      cols.clear();
      auto look = [&](Bits a, Bits bb) {
        if (auto j = b.find({a, bb}); j && *j > i) cols.push_back(*j);
      };
      const auto oa = bits_of(d.alpha & movable), ob = bits_of(d.beta & movable);
      const auto va = bits_of(~d.alpha & movable), vb = bits_of(~d.beta & movable);
      auto flip = [](Bits s, std::size_t from, std::size_t to) {
        return s ^ (Bits{1} << from) ^ (Bits{1} << to);
      };
      for (auto x : oa)
        for (auto p : va) {
          const Bits sa = flip(d.alpha, x, p);
          look(sa, d.beta);
          for (auto y : ob)
            for (auto r : vb) look(sa, flip(d.beta, y, r));
          for (auto y : oa)
            for (auto r : va)
              if (y > x && r > p) look(flip(sa, y, r), d.beta);
        }
      for (auto x : ob)
        for (auto p : vb) {
          const Bits sb = flip(d.beta, x, p);
          look(d.alpha, sb);
          for (auto y : ob)
            for (auto r : vb)
              if (y > x && r > p) look(d.alpha, flip(sb, y, r));
        }
      std::sort(cols.begin(), cols.end());
      cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
      push(i, i);
      for (auto j : cols) push(i, j);
    }
  }
  return {std::move(basis), SparseSymmetricMatrix::from_entries(n, std::move(entries))};
}

SparseHamiltonian build_sparse(const CIBasis& basis, const IntegralTable& ints,
                               BuildOptions options) {
  return build_sparse(std::make_shared<const CIBasis>(basis), ints, options);
}

void write_coordinate(const SparseSymmetricMatrix& m, std::ostream& out) {
  char buf[96];
  m.for_each_upper([&](std::size_t i, std::size_t j, double v) {
    std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", i + 1, j + 1, v);
    out << buf;
  });
}

}  // namespace qpeci
