#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
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

struct Component {
  std::vector<Exponent> cogenerators;
  MonoidPrime prime;
  CongruencePresentation presentation;
  PrimeCongruence associated;
};

struct MesoprimaryDecomposition {
  CongruencePresentation target;
  std::string tier;
  std::vector<Component> components;
  bool induced = false;
  bool key = false;
  bool true_tier = false;
};

struct DecompositionOptions {
  WitnessOptions witness;
  CompletionOptions completion;
  std::size_t divisor_cap = 20000;
};

// The divisors of w in Q_P modulo units, as S-vectors; a finite down-set.
inline std::vector<Exponent> divisor_region(LocalizedContext const& ctx, Exponent const& w,
                                            std::size_t cap = 20000) {
  std::size_t k = ctx.s_coords().size();
  std::set<Exponent> seen;
  std::vector<Exponent> out;
  std::deque<Exponent> q;
  Exponent z(k);
  if (!ctx.divides_P(ctx.from_s(z), w)) return out;
  seen.insert(z);
  q.push_back(z);
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    out.push_back(v);
    if (out.size() > cap) throw CertificationError("divisor region not finite");
    for (std::size_t i = 0; i < k; ++i) {
      auto nv = v + Exponent::unit(k, i);
      if (seen.count(nv)) continue;
      seen.insert(nv);
      if (ctx.divides_P(ctx.from_s(nv), w)) q.push_back(nv);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Minimal S-vectors outside a down-set.
inline std::vector<Exponent> outer_corners(std::vector<Exponent> const& down, std::size_t k) {
  std::set<Exponent> in(down.begin(), down.end());
  std::set<Exponent> out;
  auto consider = [&](Exponent const& c) {
    if (in.count(c)) return;
    for (std::size_t i = 0; i < k; ++i) {
      if (c[i] > 0 && !in.count(c - Exponent::unit(k, i))) return;
    }
    out.insert(c);
  };
  if (down.empty()) {
    consider(Exponent(k));
  }
  for (auto const& v : down) {
    for (std::size_t i = 0; i < k; ++i) consider(v + Exponent::unit(k, i));
  }
  return {out.begin(), out.end()};
}

inline CongruencePresentation presentation_of_rules(std::vector<std::string> names,
                                                    std::vector<Rule> const& rules) {
  CongruencePresentation out(std::move(names));
  for (auto const& r : rules) {
    if (r.nil) {
      out.add_nil(r.lhs);
    } else {
      out.add_pair(r.lhs, r.rhs);
    }
  }
  return out;
}

// The coprincipal component of the congruence at a witness w for the prime:
// elements outside the divisor region of w are nil, units of the stabilizer
// of w act trivially, and units are made cancellative.
inline Component coprincipal_component(LocalizedContext const& ctx, Exponent const& w,
                                       DecompositionOptions const& opts = {}) {
  if (ctx.nil_P(w)) throw PreconditionError("cogenerator is nil");
  auto const& base = ctx.base().presentation();
  std::size_t n = base.n;
  auto k = ctx.stabilizer(w);
  CongruencePresentation p = base;
  auto const& u = ctx.unit_coords();
  for (auto const& b : k.basis()) p.add_pair(embed(b.pos(), u, n), embed(b.neg(), u, n));
  auto down = divisor_region(ctx, w, opts.divisor_cap);
  for (auto const& c : outer_corners(down, ctx.s_coords().size())) p.add_nil(ctx.from_s(c));
  auto sat = NormalFormSystem::saturate(p, u, MonomialOrder::standard(n), opts.completion);
  Component c;
  c.cogenerators = {w};
  c.prime = ctx.prime();
  c.presentation = presentation_of_rules(base.names, sat.rules());
  c.associated = PrimeCongruence{ctx.prime(), k, n};
  return c;
}

inline Component coprincipal_component(NormalFormSystem const& sys, MonoidPrime const& prime,
                                       Exponent const& w, DecompositionOptions const& opts = {}) {
  return coprincipal_component(LocalizedContext(sys, prime), w, opts);
}

// A presentation of the intersection of two congruences, by eliminating two
// variable copies from the product of the quotients. Nils become absorbing
// variables of their own copy.
inline CongruencePresentation intersect_two(CongruencePresentation const& a,
                                            CongruencePresentation const& b,
                                            CompletionOptions const& opts = {}) {
  std::size_t n = a.n;
  if (b.n != n) throw PreconditionError("intersection of congruences on different monoids");
  std::size_t m = 3 * n + 2;
  std::vector<Relation> rels;
  auto place = [&](CongruencePresentation const& p, std::size_t off) {
    std::vector<std::size_t> idx(n);
    for (std::size_t j = 0; j < n; ++j) idx[j] = off + j;
    std::size_t nu = off + n;
    for (auto const& [x, y] : p.pairs) rels.push_back({embed(x, idx, m), embed(y, idx, m), Exponent()});
    if (p.nils.empty()) return;
    auto v = Exponent::unit(m, nu);
    for (auto const& x : p.nils) rels.push_back({embed(x, idx, m), v, Exponent()});
    for (std::size_t j = 0; j < n; ++j) rels.push_back({v + Exponent::unit(m, off + j), v, Exponent()});
    rels.push_back({v + v, v, Exponent()});
  };
  place(a, n);
  place(b, 2 * n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    rels.push_back({Exponent::unit(m, j), Exponent::unit(m, n + j) + Exponent::unit(m, 2 * n + 1 + j),
                    Exponent()});
  }
  std::vector<std::size_t> elim, keep(n);
  for (std::size_t j = n; j < m; ++j) elim.push_back(j);
  for (std::size_t j = 0; j < n; ++j) keep[j] = j;
  auto rules = detail::eliminate(m, rels, elim, MonomialOrder::Block{OrderKind::grlex, keep}, opts);
  auto out = presentation_of_rules(a.names, rules);
  if (a.nils.empty() || b.nils.empty()) return out;
  // The elements nil on both sides form one absorbing class; mark it nil.
  out.add_nil(lcm(a.nils.front(), b.nils.front()));
  return presentation_of_rules(a.names, NormalFormSystem::complete(out, {}, opts).rules());
}

inline CongruencePresentation intersect_presentations(std::vector<CongruencePresentation> const& ps,
                                                      CompletionOptions const& opts = {}) {
  if (ps.empty()) throw PreconditionError("empty intersection");
  auto acc = ps.front();
  for (std::size_t i = 1; i < ps.size(); ++i) acc = intersect_two(acc, ps[i], opts);
  return acc;
}

struct Verification {
  enum class Status { verified_exact, verified_bounded, refuted };
  Status status = Status::verified_exact;
  // Refuting pair; b empty means a is nil on one side only.
  std::optional<Exponent> a;
  std::optional<Exponent> b;
  std::optional<Exponent> box;

  bool ok() const { return status != Status::refuted; }
};

inline std::string to_string(Verification::Status s) {
  switch (s) {
    case Verification::Status::verified_exact: return "verified_exact";
    case Verification::Status::verified_bounded: return "verified_bounded";
    case Verification::Status::refuted: return "refuted";
  }
  return "?";
}

namespace detail {

inline Verification refuted(Exponent a, std::optional<Exponent> b) {
  Verification v;
  v.status = Verification::Status::refuted;
  v.a = std::move(a);
  v.b = std::move(b);
  return v;
}

inline Exponent default_box(CongruencePresentation const& p) {
  Exponent box(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    std::int64_t mx = 0;
    for (auto const& [a, b] : p.pairs) mx = std::max({mx, a[i], b[i]});
    for (auto const& m : p.nils) mx = std::max(mx, m[i]);
    box[i] = mx + 2;
  }
  return box;
}

}  // namespace detail

// Checks that the congruence is the intersection of the components.
inline Verification verify_decomposition(NormalFormSystem const& sys,
                                         std::vector<CongruencePresentation> const& comps,
                                         CompletionOptions const& opts = {},
                                         std::optional<Exponent> fallback_box = {}) {
  auto const& pres = sys.presentation();
  if (comps.empty()) {
    // The empty intersection relates everything.
    for (std::size_t i = 0; i < sys.n(); ++i) {
      auto e = Exponent::unit(sys.n(), i);
      if (!sys.equivalent(e, Exponent(sys.n()))) return detail::refuted(e, Exponent(sys.n()));
    }
    return {};
  }
  std::vector<NormalFormSystem> cs;
  for (auto const& c : comps) cs.push_back(NormalFormSystem::complete(c, sys.order(), opts));
  for (auto const& c : cs) {
    for (auto const& [a, b] : pres.pairs) {
      if (!c.equivalent(a, b)) return detail::refuted(a, b);
    }
    for (auto const& m : pres.nils) {
      if (!c.is_nil(m)) return detail::refuted(m, std::nullopt);
    }
  }
  try {
    auto meet = intersect_presentations(comps, opts);
    for (auto const& [a, b] : meet.pairs) {
      if (!sys.equivalent(a, b)) return detail::refuted(a, b);
    }
    for (auto const& m : meet.nils) {
      if (!sys.is_nil(m)) return detail::refuted(m, std::nullopt);
    }
    return {};
  } catch (CertificationError const&) {
  }
  Exponent box = fallback_box ? *fallback_box : detail::default_box(pres);
  auto pts = box_points(box);
  std::map<std::vector<std::optional<Exponent>>, Exponent> joint;
  std::map<std::optional<Exponent>, Exponent> own;
  for (auto const& p : pts) {
    std::vector<std::optional<Exponent>> label;
    for (auto const& c : cs) label.push_back(c.normal_form(p));
    auto nf = sys.normal_form(p);
    auto [it, fresh] = joint.emplace(label, p);
    if (!fresh && !sys.equivalent(it->second, p)) return detail::refuted(it->second, p);
    own.emplace(nf, p);
  }
  Verification v;
  v.status = Verification::Status::verified_bounded;
  v.box = box;
  return v;
}

inline std::vector<CongruencePresentation> presentations(std::vector<Component> const& cs) {
  std::vector<CongruencePresentation> out;
  for (auto const& c : cs) out.push_back(c.presentation);
  return out;
}

inline Verification verify_decomposition(NormalFormSystem const& sys, MesoprimaryDecomposition const& d,
                                         CompletionOptions const& opts = {}) {
  return verify_decomposition(sys, presentations(d.components), opts);
}

// Indices of components whose omission still leaves a decomposition.
inline std::vector<std::size_t> find_redundant(NormalFormSystem const& sys,
                                               std::vector<CongruencePresentation> const& comps,
                                               CompletionOptions const& opts = {}) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    auto rest = comps;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    if (verify_decomposition(sys, rest, opts).ok()) out.push_back(i);
  }
  return out;
}

inline std::vector<std::size_t> find_redundant(NormalFormSystem const& sys, MesoprimaryDecomposition const& d,
                                               CompletionOptions const& opts = {}) {
  return find_redundant(sys, presentations(d.components), opts);
}

inline MesoprimaryDecomposition decompose(CongruenceWitnesses const& cw, Tier tier,
                                          DecompositionOptions const& opts = {}) {
  if (tier != Tier::key && tier != Tier::true_witness) {
    throw PreconditionError("decomposition tier must be key or true");
  }
  MesoprimaryDecomposition d;
  d.target = cw.system().presentation();
  d.tier = to_string(tier);
  d.induced = true;
  d.key = true;
  d.true_tier = tier == Tier::true_witness;
  for (auto const& wa : cw.analyses()) {
    for (auto const& r : wa.witnesses(tier)) {
      d.components.push_back(coprincipal_component(wa.context(), r.element, opts));
    }
  }
  return d;
}

inline MesoprimaryDecomposition decompose(NormalFormSystem const& sys, Tier tier,
                                          DecompositionOptions const& opts = {}) {
  return decompose(CongruenceWitnesses(sys, opts.witness), tier, opts);
}

// Primary: the prime's variables are nilpotent and the others cancellative.
inline bool check_primary(CongruencePresentation const& pres, MonoidPrime const& prime,
                          CompletionOptions const& opts = {}) {
  auto sys = NormalFormSystem::complete(pres, {}, opts);
  if (sys.is_nil(Exponent(pres.n))) return false;
  for (auto i : prime.support) {
    if (!sys.nilpotency(i)) return false;
  }
  auto sat = NormalFormSystem::saturate(pres, prime.complement(pres.n), {}, opts);
  return sat.same_congruence(sys);
}

// Primary with one prime congruence at every non-nil element.
inline bool check_mesoprimary(CongruencePresentation const& pres, MonoidPrime const& prime,
                              CompletionOptions const& opts = {}) {
  if (!check_primary(pres, prime, opts)) return false;
  WitnessAnalysis wa(LocalizedContext(NormalFormSystem::complete(pres, {}, opts), prime));
  auto const& ctx = wa.context();
  auto k0 = ctx.stabilizer(Exponent(pres.n));
  for (auto const& r : wa.region().reps) {
    if (!(ctx.stabilizer(r) == k0)) return false;
  }
  return true;
}

inline bool check_coprincipal(CongruencePresentation const& pres, MonoidPrime const& prime,
                              CompletionOptions const& opts = {}) {
  if (!check_mesoprimary(pres, prime, opts)) return false;
  WitnessAnalysis wa(LocalizedContext(NormalFormSystem::complete(pres, {}, opts), prime));
  auto cogens = wa.witnesses(Tier::cogenerator);
  return cogens.size() == 1;
}

// The prime of a primary congruence: its nilpotent variables.
inline MonoidPrime nilpotent_prime(NormalFormSystem const& sys) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < sys.n(); ++i) {
    if (sys.nilpotency(i)) s.push_back(i);
  }
  return MonoidPrime(std::move(s));
}

// One Green's class representative per cogenerator class of a component.
inline std::vector<Exponent> component_cogenerators(CongruencePresentation const& pres, MonoidPrime const& prime,
                                                    CompletionOptions const& opts = {}) {
  WitnessAnalysis wa(LocalizedContext(NormalFormSystem::complete(pres, {}, opts), prime));
  std::vector<Exponent> out;
  for (auto const& r : wa.witnesses(Tier::cogenerator)) out.push_back(r.element);
  return out;
}

inline std::vector<Exponent> component_cogenerators(Component const& c, CompletionOptions const& opts = {}) {
  return component_cogenerators(c.presentation, c.prime, opts);
}

struct ConsistencyViolation {
  std::size_t component;
  Exponent cogenerator;
  std::string reason;
};

// Components must agree with the congruence on prime congruences at their
// cogenerators.
inline std::vector<ConsistencyViolation> check_cogenerator_consistency(NormalFormSystem const& sys,
                                                                       std::vector<Component> const& comps,
                                                                       CompletionOptions const& opts = {}) {
  std::vector<ConsistencyViolation> out;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    auto const& c = comps[i];
    LocalizedContext inner(NormalFormSystem::complete(c.presentation, {}, opts), c.prime);
    LocalizedContext outer(sys, c.prime);
    for (auto const& w : component_cogenerators(c, opts)) {
      if (outer.nil_P(w)) {
        out.push_back({i, w, "cogenerator is nil in the congruence"});
      } else if (!(inner.stabilizer(w) == outer.stabilizer(w))) {
        out.push_back({i, w, "prime congruences differ"});
      }
    }
  }
  return out;
}

// A component is induced when it equals the common refinement of the
// coprincipal components of the congruence at its own cogenerators.
inline bool check_induced(NormalFormSystem const& sys, Component const& c, DecompositionOptions const& opts = {}) {
  auto cogens = component_cogenerators(c, opts.completion);
  if (cogens.empty()) return false;
  LocalizedContext ctx(sys, c.prime);
  WitnessAnalysis wa(ctx, opts.witness);
  std::vector<CongruencePresentation> parts;
  for (auto const& w : cogens) {
    if (ctx.nil_P(w)) return false;
    try {
      if (!wa.record_of(w).is_witness) return false;
    } catch (PreconditionError const&) {
      return false;
    }
    parts.push_back(coprincipal_component(ctx, w, opts).presentation);
  }
  auto meet = NormalFormSystem::complete(intersect_presentations(parts, opts.completion), {}, opts.completion);
  return meet.same_congruence(NormalFormSystem::complete(c.presentation, {}, opts.completion));
}

inline bool check_induced(NormalFormSystem const& sys, std::vector<Component> const& comps,
                          DecompositionOptions const& opts = {}) {
  return std::all_of(comps.begin(), comps.end(), [&](Component const& c) { return check_induced(sys, c, opts); });
}

struct CoverEntry {
  std::string clause;
  MonoidPrime prime;
  Exponent witness;
  std::optional<Exponent> partner;
  std::optional<std::size_t> component;
};

struct CoverReport {
  std::vector<CoverEntry> entries;
  bool ok() const {
    return std::all_of(entries.begin(), entries.end(), [](CoverEntry const& e) { return e.component.has_value(); });
  }
};

namespace detail {

struct CogeneratorIndex {
  std::vector<std::pair<MonoidPrime, std::vector<Exponent>>> per_component;

  // First component with a cogenerator Green's-equivalent to w at the prime.
  std::optional<std::size_t> find(LocalizedContext const& ctx, Exponent const& w) const {
    for (std::size_t i = 0; i < per_component.size(); ++i) {
      if (!(per_component[i].first == ctx.prime())) continue;
      for (auto const& c : per_component[i].second) {
        if (ctx.greens_equal_P(c, w)) return i;
      }
    }
    return std::nullopt;
  }
};

inline CogeneratorIndex index_cogenerators(std::vector<Component> const& comps, CompletionOptions const& opts) {
  CogeneratorIndex idx;
  for (auto const& c : comps) idx.per_component.emplace_back(c.prime, component_cogenerators(c, opts));
  return idx;
}

}  // namespace detail

inline CoverReport check_cogenerator_cover(CongruenceWitnesses const& cw, std::vector<Component> const& comps,
                                           CompletionOptions const& opts = {}) {
  CoverReport rep;
  auto idx = detail::index_cogenerators(comps, opts);
  auto minimal = cw.minimal_associated_primes();
  for (auto const& wa : cw.analyses()) {
    auto const& ctx = wa.context();
    bool is_min = std::find(minimal.begin(), minimal.end(), wa.prime()) != minimal.end();
    for (auto const& r : wa.witnesses(Tier::witness)) {
      if (!r.suspicious) rep.entries.push_back({"non-suspicious", wa.prime(), r.element, {}, idx.find(ctx, r.element)});
      if (r.is_key && r.is_maximal) {
        auto own = idx.find(ctx, r.element);
        for (auto const& q : r.key_aides) {
          CoverEntry e{"maximal-key", wa.prime(), r.element, q, own};
          if (!e.component && q) e.component = idx.find(ctx, *q);
          rep.entries.push_back(std::move(e));
        }
      }
      if (is_min && r.is_true) rep.entries.push_back({"minimal-true", wa.prime(), r.element, {}, idx.find(ctx, r.element)});
    }
  }
  return rep;
}

inline CoverReport check_cogenerator_cover(NormalFormSystem const& sys, std::vector<Component> const& comps,
                                           DecompositionOptions const& opts = {}) {
  return check_cogenerator_cover(CongruenceWitnesses(sys, opts.witness), comps, opts.completion);
}

struct TrulyAssociatedReport {
  std::vector<PrimeCongruence> missing;
  std::vector<std::size_t> flagged;
  bool ok() const { return missing.empty(); }
};

inline TrulyAssociatedReport check_truly_associated_cover(CongruenceWitnesses const& cw,
                                                          std::vector<Component> const& comps) {
  TrulyAssociatedReport rep;
  auto ta = cw.truly_associated();
  for (auto const& pc : ta) {
    bool hit = std::any_of(comps.begin(), comps.end(), [&](Component const& c) { return c.associated == pc; });
    if (!hit) rep.missing.push_back(pc);
  }
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (std::find(ta.begin(), ta.end(), comps[i].associated) == ta.end()) rep.flagged.push_back(i);
  }
  return rep;
}

inline TrulyAssociatedReport check_truly_associated_cover(NormalFormSystem const& sys,
                                                          std::vector<Component> const& comps,
                                                          WitnessOptions const& opts = {}) {
  return check_truly_associated_cover(CongruenceWitnesses(sys, opts), comps);
}

// The true-witness decomposition with components sharing an associated prime
// congruence merged into their common refinement.
inline MesoprimaryDecomposition irredundant_decomposition(CongruenceWitnesses const& cw,
                                                          DecompositionOptions const& opts = {}) {
  auto ps = cw.associated_primes();
  for (auto const& p : ps) {
    for (auto const& q : ps) {
      if (!(p == q) && p.subset_of(q)) {
        throw PreconditionError("embedded prime present: " + p.to_string(cw.system().presentation().names) +
                                " in " + q.to_string(cw.system().presentation().names));
      }
    }
  }
  auto d = decompose(cw, Tier::true_witness, opts);
  std::vector<Component> merged;
  for (auto& c : d.components) {
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](Component const& m) { return m.associated == c.associated; });
    if (it == merged.end()) {
      merged.push_back(std::move(c));
      continue;
    }
    it->presentation = intersect_two(it->presentation, c.presentation, opts.completion);
    it->cogenerators.insert(it->cogenerators.end(), c.cogenerators.begin(), c.cogenerators.end());
  }
  d.components = std::move(merged);
  d.tier = "irredundant";
  return d;
}

inline MesoprimaryDecomposition irredundant_decomposition(NormalFormSystem const& sys,
                                                          DecompositionOptions const& opts = {}) {
  return irredundant_decomposition(CongruenceWitnesses(sys, opts.witness), opts);
}

}  // namespace meso
