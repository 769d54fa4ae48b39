#pragma once

// Brute-force reference implementations used only by the tests. None of them
// use the completion engine.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "meso/exponent.hpp"
#include "meso/presentation.hpp"

namespace oracle {

using meso::Exponent;

inline std::string read_fixture(std::string const& name) {
  std::ifstream in(std::string(MESO_FIXTURE_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline meso::CongruencePresentation fixture(std::string const& name) {
  return meso::parse_presentation(read_fixture(name));
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Closure of the generators on the points of a box: every translate of a
// generator with both ends inside the box is merged, and nil generators merge
// into a NIL node. Elements deep inside a large box get their true classes.
class BoxClosure {
 public:
  BoxClosure(meso::CongruencePresentation const& p, Exponent box)
      : box_(std::move(box)), pts_(meso::box_points(box_)), uf_(pts_.size() + 1) {
    for (std::size_t k = 0; k < pts_.size(); ++k) index_[pts_[k]] = k;
    std::size_t nil = pts_.size();
    for (std::size_t k = 0; k < pts_.size(); ++k) {
      auto const& q = pts_[k];
      for (auto const& [a, b] : p.pairs) {
        if (a.divides(q)) {
          if (auto j = at(q - a + b)) uf_.unite(k, *j);
        }
      }
      for (auto const& m : p.nils) {
        if (m.divides(q)) uf_.unite(k, nil);
      }
    }
  }

  std::optional<std::size_t> at(Exponent const& q) const {
    auto it = index_.find(q);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool related(Exponent const& a, Exponent const& b) { return uf_.find(*at(a)) == uf_.find(*at(b)); }
  bool nil(Exponent const& a) { return uf_.find(*at(a)) == uf_.find(pts_.size()); }
  std::vector<Exponent> const& points() const { return pts_; }

 private:
  Exponent box_;
  std::vector<Exponent> pts_;
  std::map<Exponent, std::size_t> index_;
  UnionFind uf_;
};

// Points of the box whose distance to the outer faces is at least `margin`.
inline std::vector<Exponent> inner(Exponent const& box, std::int64_t margin) {
  Exponent b = box;
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::max<std::int64_t>(0, b[i] - margin);
  return meso::box_points(b);
}

// Stabilizer of q at the prime S by brute force: the unit translates
// delta in [-r, r]^(S^c) with q + delta+ + w ~ q + delta- + w for some
// w in [0, wmax]^(S^c), decided in a box closure. Returns the set of such
// delta.
inline std::set<Exponent> stabilizer_points(meso::CongruencePresentation const& p,
                                            std::vector<std::size_t> const& units, Exponent const& q,
                                            std::int64_t r, std::int64_t wmax, std::int64_t slack) {
  std::size_t n = p.n;
  Exponent box = q;
  for (auto j : units) box[j] += r + wmax + slack;
  for (std::size_t i = 0; i < n; ++i) box[i] += slack;
  BoxClosure bc(p, box);
  Exponent cube(units.size());
  for (std::size_t k = 0; k < units.size(); ++k) cube[k] = 2 * r;
  std::set<Exponent> out;
  for (auto d : meso::box_points(cube)) {
    for (std::size_t k = 0; k < units.size(); ++k) d[k] -= r;
    Exponent a = q, b = q;
    for (std::size_t k = 0; k < units.size(); ++k) {
      if (d[k] > 0) a[units[k]] += d[k];
      if (d[k] < 0) b[units[k]] -= d[k];
    }
    Exponent wb(units.size());
    for (std::size_t k = 0; k < units.size(); ++k) wb[k] = wmax;
    bool hit = false;
    for (auto const& w : meso::box_points(wb)) {
      Exponent aw = a, bw = b;
      for (std::size_t k = 0; k < units.size(); ++k) {
        aw[units[k]] += w[k];
        bw[units[k]] += w[k];
      }
      if (bc.related(aw, bw)) {
        hit = true;
        break;
      }
    }
    if (hit) out.insert(d);
  }
  return out;
}

}  // namespace oracle

namespace oracle {

// Polynomials over F_p as coefficient vectors, lowest degree first.
struct PolyModP {
  std::int64_t p;
  using Poly = std::vector<std::int64_t>;

  static void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
  }
  std::int64_t inv(std::int64_t a) const {
    std::int64_t r = 1, e = p - 2;
    a %= p;
    while (e) {
      if (e & 1) r = r * a % p;
      a = a * a % p;
      e >>= 1;
    }
    return r;
  }
  Poly mod(Poly a, Poly const& b) const {
    trim(a);
    auto lc = inv(b.back());
    while (a.size() >= b.size()) {
      auto c = a.back() * lc % p;
      auto shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = ((a[shift + i] - c * b[i]) % p + p) % p;
      trim(a);
    }
    return a;
  }
  Poly gcd(Poly a, Poly b) const {
    trim(a);
    trim(b);
    while (!b.empty()) {
      auto r = mod(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    auto lc = inv(a.back());
    for (auto& c : a) c = c * lc % p;
    return a;
  }
  Poly mul(Poly const& a, Poly const& b) const {
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
    }
    return out;
  }
  Poly div(Poly a, Poly const& b) const {
    trim(a);
    Poly q(a.size() - b.size() + 1, 0);
    auto lc = inv(b.back());
    while (a.size() >= b.size() && !a.empty()) {
      auto c = a.back() * lc % p;
      auto shift = a.size() - b.size();
      q[shift] = c;
      for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = ((a[shift + i] - c * b[i]) % p + p) % p;
      trim(a);
    }
    return q;
  }
  Poly lcm(Poly const& a, Poly const& b) const { return div(mul(a, b), gcd(a, b)); }
  Poly binomial(std::int64_t b) const {
    Poly f(static_cast<std::size_t>(b) + 1, 0);
    f[0] = p - 1;
    f[static_cast<std::size_t>(b)] = 1;
    return f;
  }
};

}  // namespace oracle
