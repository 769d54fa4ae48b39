#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "meso/exponent.hpp"
#include "meso/localization.hpp"
#include "meso/normal_form.hpp"
#include "meso/presentation.hpp"
#include "meso/witnesses.hpp"

namespace meso {

// A finite poset given by labels and a reflexive, transitive order matrix.
class FinitePoset {
 public:
  FinitePoset() = default;

  // Builds the order generated by `relations` (pairs lower, upper).
  FinitePoset(std::vector<std::string> labels, std::vector<std::pair<std::size_t, std::size_t>> const& relations)
      : labels_(std::move(labels)), leq_(labels_.size(), std::vector<bool>(labels_.size(), false)) {
    std::size_t n = labels_.size();
    for (std::size_t i = 0; i < n; ++i) leq_[i][i] = true;
    for (auto [a, b] : relations) {
      if (a >= n || b >= n) throw ParseError("poset relation out of range");
      leq_[a][b] = true;
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!leq_[i][k]) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (leq_[k][j]) leq_[i][j] = true;
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (leq_[i][j] && leq_[j][i]) {
          throw PreconditionError("order is not antisymmetric: " + labels_[i] + ", " + labels_[j]);
        }
      }
    }
  }

  std::size_t size() const noexcept { return labels_.size(); }
  std::vector<std::string> const& labels() const noexcept { return labels_; }
  bool leq(std::size_t a, std::size_t b) const { return leq_[a][b]; }
  bool less(std::size_t a, std::size_t b) const { return a != b && leq_[a][b]; }

  std::vector<std::pair<std::size_t, std::size_t>> covers() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t n = size();
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (!less(a, b)) continue;
        bool direct = true;
        for (std::size_t c = 0; c < n && direct; ++c) {
          if (less(a, c) && less(c, b)) direct = false;
        }
        if (direct) out.emplace_back(a, b);
      }
    }
    return out;
  }

  std::vector<std::size_t> minimal() const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < size(); ++a) {
      bool m = true;
      for (std::size_t b = 0; b < size() && m; ++b) {
        if (less(b, a)) m = false;
      }
      if (m) out.push_back(a);
    }
    return out;
  }

  std::size_t down_size(std::size_t a) const {
    std::size_t k = 0;
    for (std::size_t b = 0; b < size(); ++b) k += leq_[b][a];
    return k;
  }

  std::size_t up_size(std::size_t a) const {
    std::size_t k = 0;
    for (std::size_t b = 0; b < size(); ++b) k += leq_[a][b];
    return k;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<bool>> leq_;
};

inline bool check_unique_minimum(FinitePoset const& p) { return p.minimal().size() == 1; }

// An order isomorphism p -> q as an index map, if one exists.
inline std::optional<std::vector<std::size_t>> poset_isomorphism(FinitePoset const& p, FinitePoset const& q) {
  std::size_t n = p.size();
  if (q.size() != n) return std::nullopt;
  std::vector<std::size_t> map(n), order(n);
  std::vector<bool> used(n, false);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p.down_size(a) < p.down_size(b) || (p.down_size(a) == p.down_size(b) && a < b);
  });
  std::function<bool(std::size_t)> go = [&](std::size_t k) {
    if (k == n) return true;
    std::size_t a = order[k];
    for (std::size_t b = 0; b < n; ++b) {
      if (used[b] || p.down_size(a) != q.down_size(b) || p.up_size(a) != q.up_size(b)) continue;
      bool fits = true;
      for (std::size_t j = 0; j < k && fits; ++j) {
        std::size_t c = order[j];
        if (p.leq(a, c) != q.leq(b, map[c]) || p.leq(c, a) != q.leq(map[c], b)) fits = false;
      }
      if (!fits) continue;
      used[b] = true;
      map[a] = b;
      if (go(k + 1)) return true;
      used[b] = false;
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  return map;
}

inline bool poset_isomorphic(FinitePoset const& p, FinitePoset const& q) {
  return poset_isomorphism(p, q).has_value();
}

// The poset of truly associated prime congruences ordered by refinement.
inline FinitePoset mesoass_poset(CongruenceWitnesses const& cw) {
  auto pcs = cw.truly_associated();
  std::vector<std::string> labels;
  auto const& names = cw.system().presentation().names;
  for (auto const& pc : pcs) labels.push_back(pc.prime.to_string(names) + " " + pc.lattice.to_string());
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t i = 0; i < pcs.size(); ++i) {
    for (std::size_t j = 0; j < pcs.size(); ++j) {
      if (i != j && refines(pcs[i], pcs[j])) rel.emplace_back(i, j);
    }
  }
  return FinitePoset(std::move(labels), rel);
}

inline FinitePoset mesoass_poset(NormalFormSystem const& sys, WitnessOptions const& opts = {}) {
  return mesoass_poset(CongruenceWitnesses(sys, opts));
}

struct OmegaPoset {
  FinitePoset poset;
  std::vector<std::vector<Exponent>> blocks;
  std::vector<UnitLattice> lattices;
};

// Non-nil classes modulo units, merged along divisibility steps that keep the
// prime congruence, ordered by reverse ideal containment.
inline OmegaPoset omega_poset(NormalFormSystem const& sys, MonoidPrime const& prime, WitnessOptions const& opts = {}) {
  WitnessAnalysis wa(LocalizedContext(sys, prime), opts);
  auto const& ctx = wa.context();
  if (!wa.region().certified) throw CertificationError("non-nil region is not certified finite");
  auto const& reps = wa.region().reps;
  std::size_t m = reps.size();
  std::map<Exponent, std::size_t> at;
  for (std::size_t i = 0; i < m; ++i) at[*ctx.orbit_form(reps[i])] = i;
  std::vector<UnitLattice> ks;
  for (auto const& r : reps) ks.push_back(ctx.stabilizer(r));
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (auto s : prime.support) {
      auto next = reps[i] + Exponent::unit(sys.n(), s);
      if (ctx.nil_P(next)) continue;
      auto it = at.find(*ctx.orbit_form(next));
      if (it == at.end()) throw CertificationError("translate outside the certified region");
      if (ks[i] == ks[it->second]) {
        auto a = find(i), b = find(it->second);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  OmegaPoset out;
  std::map<std::size_t, std::size_t> block_of;
  for (std::size_t i = 0; i < m; ++i) {
    auto r = find(i);
    if (!block_of.count(r)) {
      block_of[r] = out.blocks.size();
      out.blocks.emplace_back();
      out.lattices.push_back(ks[r]);
    }
    auto b = block_of[r];
    out.blocks[b].push_back(reps[i]);
    if (!(ks[i] == out.lattices[b])) throw CertificationError("merged classes have different prime congruences");
  }
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      auto bi = block_of[find(i)], bj = block_of[find(j)];
      if (bi != bj && ctx.divides_P(reps[i], reps[j])) rel.emplace_back(bi, bj);
    }
  }
  std::vector<std::string> labels;
  for (std::size_t b = 0; b < out.blocks.size(); ++b) {
    labels.push_back(format_monomial(out.blocks[b].front(), sys.presentation().names) + " " +
                     out.lattices[b].to_string());
  }
  out.poset = FinitePoset(std::move(labels), rel);
  return out;
}

enum class Convention { paper, working };

inline std::string to_string(Convention c) { return c == Convention::paper ? "paper" : "working"; }

inline Convention convention_from_string(std::string const& s) {
  if (s == "paper") return Convention::paper;
  if (s == "working") return Convention::working;
  throw ParseError("unknown convention '" + s + "'");
}

// Subsets p_i of [n] embedding the poset: principal down-sets without the
// minimum. The minimum maps to the empty set.
inline std::vector<std::vector<std::size_t>> downset_embedding(FinitePoset const& p) {
  auto mins = p.minimal();
  if (mins.size() != 1) throw PreconditionError("no unique minimum");
  std::size_t bottom = mins.front();
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i != bottom) others.push_back(i);
  }
  std::vector<std::vector<std::size_t>> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t k = 0; k < others.size(); ++k) {
      if (p.leq(others[k], i)) out[i].push_back(k);
    }
  }
  return out;
}

inline bool is_prime(std::int64_t v) {
  if (v < 2) return false;
  for (std::int64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) return false;
  }
  return true;
}

inline std::vector<std::int64_t> first_primes(std::size_t k, std::int64_t from = 2) {
  std::vector<std::int64_t> out;
  for (std::int64_t v = from; out.size() < k; ++v) {
    if (is_prime(v)) out.push_back(v);
  }
  return out;
}

inline std::int64_t checked_product(std::vector<std::int64_t> const& fs) {
  std::int64_t b = 1;
  for (auto f : fs) {
    if (__builtin_mul_overflow(b, f, &b)) throw CertificationError("exponent overflow");
  }
  return b;
}

// b_i = prod_{j in p_i} a_j (paper) or prod_{j not in p_i} a_j (working).
inline std::vector<std::int64_t> realize_numbers(std::vector<std::vector<std::size_t>> const& subsets,
                                                 std::vector<std::int64_t> const& primes,
                                                 Convention conv = Convention::paper) {
  std::set<std::int64_t> distinct(primes.begin(), primes.end());
  if (distinct.size() != primes.size() ||
      !std::all_of(primes.begin(), primes.end(), [](std::int64_t a) { return is_prime(a); })) {
    throw PreconditionError("primes not distinct");
  }
  std::vector<std::int64_t> out;
  for (auto const& s : subsets) {
    std::vector<std::int64_t> fs;
    for (std::size_t j = 0; j < primes.size(); ++j) {
      bool in = std::find(s.begin(), s.end(), j) != s.end();
      if (in == (conv == Convention::paper)) fs.push_back(primes[j]);
    }
    out.push_back(checked_product(fs));
  }
  return out;
}

inline FinitePoset divisibility_poset(std::vector<std::int64_t> const& bs) {
  std::vector<std::string> labels;
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    labels.push_back(std::to_string(bs[i]));
    for (std::size_t j = 0; j < bs.size(); ++j) {
      if (i != j && bs[j] % bs[i] == 0) rel.emplace_back(i, j);
    }
  }
  return FinitePoset(std::move(labels), rel);
}

inline std::set<std::int64_t> divisors(std::int64_t b) {
  std::set<std::int64_t> out;
  for (std::int64_t d = 1; d * d <= b; ++d) {
    if (b % d == 0) {
      out.insert(d);
      out.insert(b / d);
    }
  }
  return out;
}

// Indices i for which <y^{b_i} - 1> is the intersection of other ideals of
// the list, read off the cyclotomic factors y^b - 1 = prod_{d | b} Phi_d.
inline std::vector<std::size_t> redundant_intersections(std::vector<std::int64_t> const& bs) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    std::set<std::int64_t> cover;
    bool any = false;
    for (std::size_t j = 0; j < bs.size(); ++j) {
      if (j == i || bs[i] % bs[j] != 0) continue;
      auto d = divisors(bs[j]);
      cover.insert(d.begin(), d.end());
      any = true;
    }
    if (any && cover == divisors(bs[i])) out.push_back(i);
  }
  return out;
}

inline bool check_no_redundant_intersection(std::vector<std::int64_t> const& bs) {
  return redundant_intersections(bs).empty();
}

enum class RealizationKind { flat, graded };

inline std::string to_string(RealizationKind k) { return k == RealizationKind::flat ? "flat" : "graded"; }

struct RealizationRecipe {
  FinitePoset poset;
  RealizationKind kind = RealizationKind::flat;
  Convention convention = Convention::working;
  std::size_t bottom = 0;
  // Poset element of each variable x_1..x_d, in order.
  std::vector<std::size_t> elements;
  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::int64_t> primes;
  std::optional<std::int64_t> extra_prime;
  std::vector<std::int64_t> exponents;
  std::int64_t global = 1;
};

struct Realization {
  CongruencePresentation presentation;
  RealizationRecipe recipe;
};

inline Realization realize(FinitePoset const& p, RealizationKind kind, Convention conv = Convention::working,
                           std::optional<std::vector<std::int64_t>> primes = {}) {
  RealizationRecipe r;
  r.poset = p;
  r.kind = kind;
  r.convention = conv;
  r.subsets = downset_embedding(p);
  r.bottom = p.minimal().front();
  std::size_t n = p.size() - 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i != r.bottom) r.elements.push_back(i);
  }
  r.primes = primes ? *primes : first_primes(n);
  if (r.primes.size() != n) throw PreconditionError("need one prime per non-minimal element");
  r.exponents = realize_numbers(r.subsets, r.primes, conv);
  if (conv == Convention::paper) {
    r.global = r.exponents[r.bottom];
  } else {
    std::set<std::size_t> common;
    for (std::size_t k = 0; k < n; ++k) common.insert(k);
    for (auto e : r.elements) {
      std::set<std::size_t> s(r.subsets[e].begin(), r.subsets[e].end()), keep;
      std::set_intersection(common.begin(), common.end(), s.begin(), s.end(), std::inserter(keep, keep.end()));
      common = std::move(keep);
    }
    r.global = r.exponents[r.bottom];
    if (!r.elements.empty() && common.empty()) {
      std::int64_t next = r.primes.empty() ? 2 : *std::max_element(r.primes.begin(), r.primes.end()) + 1;
      while (!is_prime(next) || std::find(r.primes.begin(), r.primes.end(), next) != r.primes.end()) ++next;
      r.extra_prime = next;
      r.global = checked_product({r.global, next});
    }
  }
  std::size_t d = r.elements.size();
  std::vector<std::string> names;
  for (std::size_t k = 0; k < d; ++k) names.push_back("x" + std::to_string(k + 1));
  names.push_back("y");
  CongruencePresentation out(names);
  std::size_t m = d + 1;
  auto x = [&](std::size_t k) { return Exponent::unit(m, k); };
  auto y = [&](std::int64_t b) {
    Exponent e(m);
    e[d] = b;
    return e;
  };
  if (d > 0 || conv == Convention::paper) out.add_pair(y(r.global), Exponent(m));
  for (std::size_t k = 0; k < d; ++k) out.add_pair(x(k) + y(r.exponents[r.elements[k]]), x(k));
  auto below = [&](std::size_t i, std::size_t j) { return p.less(r.elements[j], r.elements[i]); };
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      bool comparable = i != j && (below(i, j) || below(j, i));
      if (kind == RealizationKind::flat || !comparable) out.add_nil(x(i) + x(j));
    }
  }
  if (kind == RealizationKind::graded) {
    for (std::size_t i = 0; i < d; ++i) {
      std::optional<std::size_t> first;
      for (std::size_t j = 0; j < d; ++j) {
        if (!below(i, j)) continue;
        if (first) {
          out.add_pair(x(i) + x(*first), x(i) + x(j));
        } else {
          first = j;
        }
      }
    }
  }
  return {out, r};
}

inline Realization realize_flat(FinitePoset const& p, Convention conv = Convention::working) {
  return realize(p, RealizationKind::flat, conv);
}

inline Realization realize_graded(FinitePoset const& p, Convention conv = Convention::working) {
  return realize(p, RealizationKind::graded, conv);
}

inline MonoidPrime realization_prime(Realization const& r) {
  std::vector<std::size_t> s(r.recipe.elements.size());
  std::iota(s.begin(), s.end(), 0);
  return MonoidPrime(std::move(s));
}

}  // namespace meso
