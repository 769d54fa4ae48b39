#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "meso/exponent.hpp"

namespace meso {

namespace detail {

using Int = std::int64_t;
using Matrix = std::vector<std::vector<Int>>;

inline Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("integer overflow in lattice arithmetic");
  return r;
}
inline Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("integer overflow in lattice arithmetic");
  return r;
}

// Extended gcd: returns (g, s, t) with s*a + t*b = g >= 0.
inline std::tuple<Int, Int, Int> xgcd(Int a, Int b) {
  Int s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (b != 0) {
    Int q = a / b;
    Int r = a - q * b;
    a = b;
    b = r;
    Int s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
    Int t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  if (a < 0) return {-a, -s0, -t0};
  return {a, s0, t0};
}

inline Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Row-style Hermite normal form of `a` (rows are generators), applying the
// same unimodular row operations to `u`. Returns the rank; rows [0, rank)
// are the HNF basis and the remaining rows of `a` are zero.
inline std::size_t hnf_inplace(Matrix& a, Matrix* u) {
  std::size_t m = a.size();
  std::size_t d = m ? a[0].size() : 0;
  std::size_t row = 0;
  auto combine = [&](std::size_t i, std::size_t j, Int p, Int q, Int r, Int s) {
    // row_i <- p*row_i + q*row_j ; row_j <- r*row_i + s*row_j
    auto apply = [&](std::vector<Int>& x, std::vector<Int>& y) {
      for (std::size_t k = 0; k < x.size(); ++k) {
        Int xi = x[k], yj = y[k];
        x[k] = checked_add(checked_mul(p, xi), checked_mul(q, yj));
        y[k] = checked_add(checked_mul(r, xi), checked_mul(s, yj));
      }
    };
    apply(a[i], a[j]);
    if (u) apply((*u)[i], (*u)[j]);
  };
  for (std::size_t col = 0; col < d && row < m; ++col) {
    for (std::size_t j = row + 1; j < m; ++j) {
      if (a[j][col] == 0) continue;
      Int x = a[row][col], y = a[j][col];
      auto [g, s, t] = xgcd(x, y);
      // [s t; -y/g x/g] has determinant 1.
      combine(row, j, s, t, -y / g, x / g);
    }
    if (a[row][col] == 0) continue;
    if (a[row][col] < 0) {
      for (auto& v : a[row]) v = -v;
      if (u) for (auto& v : (*u)[row]) v = -v;
    }
    Int piv = a[row][col];
    for (std::size_t i = 0; i < row; ++i) {
      Int q = floor_div(a[i][col], piv);
      if (q == 0) continue;
      for (std::size_t k = 0; k < d; ++k) a[i][k] = checked_add(a[i][k], -checked_mul(q, a[row][k]));
      if (u) {
        auto& ui = (*u)[i];
        auto const& ur = (*u)[row];
        for (std::size_t k = 0; k < ui.size(); ++k) ui[k] = checked_add(ui[k], -checked_mul(q, ur[k]));
      }
    }
    ++row;
  }
  return row;
}

}  // namespace detail

// A subgroup of Z^d stored by its Hermite normal form basis. Two lattices are
// equal iff their stored bases are identical.
class UnitLattice {
 public:
  UnitLattice() = default;
  explicit UnitLattice(std::size_t dim) : dim_(dim) {}

  UnitLattice(std::size_t dim, std::vector<Exponent> const& generators) : dim_(dim) {
    detail::Matrix a;
    for (auto const& g : generators) {
      if (g.size() != dim) throw PreconditionError("lattice generator has wrong dimension");
      a.push_back(g.coords());
    }
    auto r = detail::hnf_inplace(a, nullptr);
    for (std::size_t i = 0; i < r; ++i) basis_.emplace_back(a[i]);
  }

  static UnitLattice full(std::size_t dim) {
    std::vector<Exponent> g;
    for (std::size_t i = 0; i < dim; ++i) g.push_back(Exponent::unit(dim, i));
    return UnitLattice(dim, g);
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return basis_.size(); }
  std::vector<Exponent> const& basis() const noexcept { return basis_; }
  bool is_trivial() const noexcept { return basis_.empty(); }
  bool is_full() const { return *this == full(dim_); }

  // Remainder of v modulo the lattice; zero iff v is in the lattice.
  Exponent reduce(Exponent v) const {
    std::size_t col = 0;
    for (auto const& b : basis_) {
      while (b[col] == 0) ++col;
      detail::Int q = detail::floor_div(v[col], b[col]);
      if (q != 0) {
        for (std::size_t k = 0; k < dim_; ++k) v[k] = detail::checked_add(v[k], -detail::checked_mul(q, b[k]));
      }
      if (v[col] != 0) return v;
    }
    return v;
  }

  bool contains(Exponent const& v) const { return reduce(v).is_zero(); }

  bool contains(UnitLattice const& other) const {
    for (auto const& b : other.basis_) {
      if (!contains(b)) return false;
    }
    return true;
  }

  friend bool operator==(UnitLattice const&, UnitLattice const&) = default;

  friend UnitLattice operator+(UnitLattice const& a, UnitLattice const& b) {
    std::vector<Exponent> g = a.basis_;
    g.insert(g.end(), b.basis_.begin(), b.basis_.end());
    return UnitLattice(a.dim_, g);
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (i) s += ",";
      s += basis_[i].to_string();
    }
    return s + "]";
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Exponent> basis_;
};

inline UnitLattice hnf(std::size_t dim, std::vector<Exponent> const& rows) {
  return UnitLattice(dim, rows);
}

inline bool lattice_contains(UnitLattice const& big, UnitLattice const& small) {
  return big.contains(small);
}

inline bool lattice_equal(UnitLattice const& a, UnitLattice const& b) { return a == b; }

inline UnitLattice lattice_intersect(UnitLattice const& l1, UnitLattice const& l2) {
  std::size_t d = l1.dim();
  if (l2.dim() != d) throw PreconditionError("lattice dimensions differ");
  // Rows (b1 | b1) and (b2 | 0); echelon rows with zero left half span the
  // intersection in the right half.
  detail::Matrix a;
  for (auto const& b : l1.basis()) {
    std::vector<detail::Int> row(b.coords());
    row.insert(row.end(), b.begin(), b.end());
    a.push_back(std::move(row));
  }
  for (auto const& b : l2.basis()) {
    std::vector<detail::Int> row(b.coords());
    row.resize(2 * d, 0);
    a.push_back(std::move(row));
  }
  auto r = detail::hnf_inplace(a, nullptr);
  std::vector<Exponent> gens;
  for (std::size_t i = 0; i < r; ++i) {
    bool left_zero = true;
    for (std::size_t k = 0; k < d; ++k) left_zero = left_zero && a[i][k] == 0;
    if (left_zero) gens.emplace_back(std::vector<detail::Int>(a[i].begin() + d, a[i].end()));
  }
  return UnitLattice(d, gens);
}

// A coset offset + lattice in Z^d.
struct LatticeCoset {
  Exponent offset;
  UnitLattice lattice;

  bool contains(Exponent const& v) const { return lattice.contains(v - offset); }
  bool subset_of(LatticeCoset const& o) const {
    return o.lattice.contains(lattice) && o.contains(offset);
  }
};

// Intersection of two cosets, or nullopt when empty.
inline std::optional<LatticeCoset> coset_intersect(LatticeCoset const& c1, LatticeCoset const& c2) {
  std::size_t d = c1.lattice.dim();
  auto const& b1 = c1.lattice.basis();
  auto const& b2 = c2.lattice.basis();
  // Solve alpha*B1 - beta*B2 = c2 - c1.
  detail::Matrix a;
  for (auto const& b : b1) a.push_back(b.coords());
  for (auto const& b : b2) a.push_back((-b).coords());
  std::size_t m = a.size();
  detail::Matrix u(m, std::vector<detail::Int>(m, 0));
  for (std::size_t i = 0; i < m; ++i) u[i][i] = 1;
  auto rank = detail::hnf_inplace(a, &u);
  Exponent target = c2.offset - c1.offset;
  std::vector<detail::Int> coef(m, 0);
  std::size_t col = 0;
  for (std::size_t i = 0; i < rank; ++i) {
    while (a[i][col] == 0) ++col;
    if (target[col] % a[i][col] != 0) return std::nullopt;
    detail::Int q = target[col] / a[i][col];
    for (std::size_t k = 0; k < d; ++k) target[k] = detail::checked_add(target[k], -detail::checked_mul(q, a[i][k]));
    for (std::size_t k = 0; k < m; ++k) coef[k] = detail::checked_add(coef[k], detail::checked_mul(q, u[i][k]));
  }
  if (!target.is_zero()) return std::nullopt;
  Exponent off = c1.offset;
  for (std::size_t i = 0; i < b1.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) off[k] = detail::checked_add(off[k], detail::checked_mul(coef[i], b1[i][k]));
  }
  auto meet = lattice_intersect(c1.lattice, c2.lattice);
  return LatticeCoset{meet.reduce(off), meet};
}

}  // namespace meso
