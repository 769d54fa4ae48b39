#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "meso/exponent.hpp"
#include "meso/lattice.hpp"
#include "meso/localization.hpp"
#include "meso/normal_form.hpp"

namespace meso {

enum class Tier { witness, key, true_witness, cogenerator };

inline std::string to_string(Tier t) {
  switch (t) {
    case Tier::witness: return "witness";
    case Tier::key: return "key";
    case Tier::true_witness: return "true";
    case Tier::cogenerator: return "cogenerator";
  }
  return "?";
}

inline Tier tier_from_string(std::string const& s) {
  if (s == "witness") return Tier::witness;
  if (s == "key") return Tier::key;
  if (s == "true") return Tier::true_witness;
  if (s == "cogenerator") return Tier::cogenerator;
  throw PreconditionError("unknown tier '" + s + "'");
}

enum class TrueReason { via_maximality, via_key_aide_nil, via_key_aide_greens, not_true };

inline std::string to_string(TrueReason r) {
  switch (r) {
    case TrueReason::via_maximality: return "via_maximality";
    case TrueReason::via_key_aide_nil: return "via_key_aide_nil";
    case TrueReason::via_key_aide_greens: return "via_key_aide_greens";
    case TrueReason::not_true: return "not_true";
  }
  return "?";
}

// An aide or key aide: a localized exponent, or nullopt for NIL.
using Aide = std::optional<Exponent>;

struct WitnessRecord {
  Exponent element;
  MonoidPrime prime;
  std::vector<Exponent> green_class;
  std::vector<std::vector<Aide>> aides;
  std::vector<Aide> key_aides;
  bool is_witness = false;
  bool is_key = false;
  bool is_cogenerator = false;
  bool is_maximal = false;
  bool is_true = false;
  std::vector<PrimeCongruence> testimony;
  bool suspicious = false;
  PrimeCongruence prime_congruence;
  bool has_greens_key_aide = false;
};

struct WitnessOptions {
  std::optional<Exponent> box;
  bool require_certified = false;
  std::int64_t margin = 2;
};

// Non-nil orbit classes of Q_P modulo units, by canonical S-vector.
struct WitnessRegion {
  Exponent box;
  std::vector<Exponent> reps;
  bool certified = false;
  std::string uncertified_direction;
};

// Witness data of a congruence at one prime. Elements are handled through
// their unit orbits, represented by S-vectors with zero unit part.
class WitnessAnalysis {
 public:
  WitnessAnalysis(LocalizedContext ctx, WitnessOptions opts = {})
      : ctx_(std::move(ctx)), opts_(std::move(opts)) {
    build_region();
    build_classes();
  }

  LocalizedContext const& context() const noexcept { return ctx_; }
  WitnessRegion const& region() const noexcept { return region_; }
  MonoidPrime const& prime() const noexcept { return ctx_.prime(); }

  // One record per non-nil Green's class in the region, in canonical order.
  std::vector<WitnessRecord> const& classes() const noexcept { return records_; }

  std::vector<WitnessRecord> witnesses(Tier tier) const {
    std::vector<WitnessRecord> out;
    for (auto const& r : records_) {
      if (meets(r, tier)) out.push_back(r);
    }
    return out;
  }

  static bool meets(WitnessRecord const& r, Tier tier) {
    switch (tier) {
      case Tier::witness: return r.is_witness;
      case Tier::key: return r.is_key;
      case Tier::true_witness: return r.is_true;
      case Tier::cogenerator: return r.is_cogenerator;
    }
    return false;
  }

  // The record of the Green's class containing w.
  WitnessRecord const& record_of(Exponent const& w) const {
    for (auto const& r : records_) {
      for (auto const& m : r.green_class) {
        if (ctx_.greens_equal_P(m, w)) return r;
      }
    }
    throw PreconditionError("element " + w.to_string() + " is nil or outside the witness region");
  }

  // Aide condition for a candidate q (nullopt = NIL), element w and generator e_i.
  bool is_aide(Aide const& q, Exponent const& w, std::size_t i) const {
    if (!ctx_.prime().contains(i)) throw PreconditionError("index not in prime");
    auto ei = Exponent::unit(ctx_.n(), i);
    if (!q) return ctx_.nil_P(w + ei) && !ctx_.nil_P(w);
    if (ctx_.equivalent_P(*q, w)) return false;
    if (!ctx_.equivalent_P(*q + ei, w + ei)) return false;
    return !strictly_below(*q, w);
  }

  // A single q serving as aide for every generator.
  bool is_key_aide(Aide const& q, Exponent const& w) const {
    if (ctx_.nil_P(w)) return false;
    if (!q) return !ctx_.prime().support.empty() && all_translates_nil(w);
    if (ctx_.equivalent_P(*q, w)) return false;
    if (strictly_below(*q, w)) return false;
    for (auto i : ctx_.prime().support) {
      auto ei = Exponent::unit(ctx_.n(), i);
      if (!ctx_.equivalent_P(*q + ei, w + ei)) return false;
    }
    return true;
  }

  bool is_maximal_witness(Exponent const& w) const {
    for (auto const& r : records_) {
      if (!r.is_witness) continue;
      if (ctx_.divides_P(w, r.element) && !ctx_.divides_P(r.element, w)) return false;
    }
    return true;
  }

  TrueReason true_witness_equiv_check(Exponent const& w) const {
    auto const& r = record_of(w);
    if (!r.is_witness) return TrueReason::not_true;
    if (r.is_key && !ctx_.prime().support.empty() && all_translates_nil(r.element)) {
      return TrueReason::via_key_aide_nil;
    }
    if (r.has_greens_key_aide) return TrueReason::via_key_aide_greens;
    if (r.is_maximal) return TrueReason::via_maximality;
    return TrueReason::not_true;
  }

  // q strictly divides w in Green's preorder (w in <q>, q not in <w>).
  bool strictly_below(Exponent const& q, Exponent const& w) const {
    return ctx_.divides_P(q, w) && !ctx_.divides_P(w, q);
  }

  bool all_translates_nil(Exponent const& w) const {
    for (auto i : ctx_.prime().support) {
      if (!ctx_.nil_P(w + Exponent::unit(ctx_.n(), i))) return false;
    }
    return true;
  }

 private:
  LocalizedContext ctx_;
  WitnessOptions opts_;
  WitnessRegion region_;
  std::vector<WitnessRecord> records_;

  void build_region() {
    auto const& s = ctx_.s_coords();
    std::size_t k = s.size();
    region_.box = Exponent(k);
    region_.certified = true;
    if (ctx_.nil_P(Exponent(ctx_.n()))) return;
    auto const& quot = ctx_.orbit_quotient();
    if (opts_.box) {
      if (opts_.box->size() != k) {
        throw PreconditionError("witness box needs " + std::to_string(k) + " bounds");
      }
      region_.box = *opts_.box;
    }
    for (std::size_t j = 0; j < k; ++j) {
      auto nil = quot.nilpotency(j);
      if (nil) {
        if (!opts_.box) region_.box[j] = *nil - 1;
        continue;
      }
      region_.certified = false;
      if (region_.uncertified_direction.empty()) {
        region_.uncertified_direction = ctx_.base().presentation().names[s[j]];
      }
      if (opts_.box) continue;
      std::int64_t mx = 0;
      for (auto const& [a, b] : ctx_.base().presentation().pairs) {
        mx = std::max({mx, a[s[j]], b[s[j]]});
      }
      for (auto const& m : ctx_.base().presentation().nils) mx = std::max(mx, m[s[j]]);
      region_.box[j] = mx + opts_.margin;
    }
    if (!region_.certified && opts_.require_certified) {
      throw CertificationError("witness region not certified finite: " +
                               region_.uncertified_direction + " is not nilpotent at " +
                               ctx_.prime().to_string(ctx_.base().presentation().names));
    }
    auto cmp = ctx_.orbit_order().comparator();
    std::set<Exponent, decltype(cmp)> forms(cmp);
    for (auto const& p : box_points(region_.box)) {
      if (auto f = ctx_.orbit_form(ctx_.from_s(p))) forms.insert(*f);
    }
    for (auto const& f : forms) region_.reps.push_back(ctx_.from_s(f));
  }

  struct Local {
    Exponent w;
    UnitLattice k;
    std::vector<bool> nil_after;
    std::vector<std::optional<Exponent>> after_form;
    std::vector<UnitLattice> k_after;
  };

  Local local(Exponent const& w) const {
    Local l{w, ctx_.stabilizer(w), {}, {}, {}};
    for (auto i : ctx_.prime().support) {
      auto wi = w + Exponent::unit(ctx_.n(), i);
      bool nil = ctx_.nil_P(wi);
      l.nil_after.push_back(nil);
      l.after_form.push_back(nil ? std::nullopt : ctx_.orbit_form(wi));
      l.k_after.push_back(nil ? UnitLattice::full(ctx_.unit_dim()) : ctx_.stabilizer(wi));
    }
    return l;
  }

  Exponent with_unit(Exponent const& v, Exponent const& u) const {
    return v + embed(u, ctx_.unit_coords(), ctx_.n());
  }

  // Units u with v + u + e_i ~ w + e_i, for generator index t.
  std::optional<LatticeCoset> aide_coset(Local const& lw, Exponent const& v, std::size_t t) const {
    auto ei = Exponent::unit(ctx_.n(), ctx_.prime().support[t]);
    if (lw.nil_after[t]) {
      if (!ctx_.nil_P(v + ei)) return std::nullopt;
      return LatticeCoset{Exponent(ctx_.unit_dim()), UnitLattice::full(ctx_.unit_dim())};
    }
    auto c = ctx_.find_unit(v + ei, lw.w + ei);
    if (!c) return std::nullopt;
    return LatticeCoset{lw.k_after[t].reduce(*c), lw.k_after[t]};
  }

  // Picks a unit from the coset avoiding u0 + K_w when v lies in w's orbit.
  std::optional<Exponent> pick(LatticeCoset const& c, Local const& lw, Exponent const& v) const {
    auto u0 = ctx_.find_unit(v, lw.w);
    if (!u0) return c.offset;
    if (!lw.k.contains(c.offset - *u0)) return c.offset;
    for (auto const& b : c.lattice.basis()) {
      if (!lw.k.contains(b)) return c.offset + b;
    }
    return std::nullopt;
  }

  WitnessRecord classify(Exponent const& w, std::vector<Exponent> const& members) const {
    WitnessRecord r;
    r.element = w;
    r.prime = ctx_.prime();
    r.green_class = members;
    auto lw = local(w);
    r.prime_congruence = PrimeCongruence{ctx_.prime(), lw.k, ctx_.n()};
    auto const& s = ctx_.prime().support;
    std::size_t k = s.size();
    if (k == 0) {
      r.is_witness = !lw.k.is_full();
      r.is_key = r.is_witness;
      if (r.is_key) {
        for (std::size_t j = 0; j < ctx_.unit_dim(); ++j) {
          auto e = Exponent::unit(ctx_.unit_dim(), j);
          if (!lw.k.contains(e)) {
            r.key_aides.push_back(with_unit(w, e));
            break;
          }
        }
        r.has_greens_key_aide = true;
      }
      r.is_cogenerator = r.is_key;
      r.suspicious = false;
      return r;
    }
    std::vector<bool> below(region_.reps.size());
    for (std::size_t m = 0; m < region_.reps.size(); ++m) {
      below[m] = strictly_below(region_.reps[m], w);
    }
    r.aides.resize(k);
    bool witness = true;
    for (std::size_t t = 0; t < k; ++t) {
      if (lw.nil_after[t]) r.aides[t].push_back(std::nullopt);
      for (std::size_t m = 0; m < region_.reps.size(); ++m) {
        if (below[m]) continue;
        auto const& v = region_.reps[m];
        auto c = aide_coset(lw, v, t);
        if (!c) continue;
        if (auto u = pick(*c, lw, v)) r.aides[t].push_back(with_unit(v, *u));
      }
      witness = witness && !r.aides[t].empty();
    }
    r.is_witness = witness;
    bool all_nil = std::all_of(lw.nil_after.begin(), lw.nil_after.end(), [](bool b) { return b; });
    if (all_nil) r.key_aides.push_back(std::nullopt);
    for (std::size_t m = 0; m < region_.reps.size(); ++m) {
      if (below[m]) continue;
      auto const& v = region_.reps[m];
      std::optional<LatticeCoset> acc =
          LatticeCoset{Exponent(ctx_.unit_dim()), UnitLattice::full(ctx_.unit_dim())};
      for (std::size_t t = 0; t < k && acc; ++t) {
        auto c = aide_coset(lw, v, t);
        acc = c ? coset_intersect(*acc, *c) : std::nullopt;
      }
      if (!acc) continue;
      auto u = pick(*acc, lw, v);
      if (!u) continue;
      r.key_aides.push_back(with_unit(v, *u));
      if (ctx_.greens_equal_P(v, w)) r.has_greens_key_aide = true;
    }
    r.is_key = r.is_witness && !r.key_aides.empty();
    r.is_cogenerator = r.is_key && all_nil;
    std::vector<PrimeCongruence> testimony;
    for (std::size_t t = 0; t < k; ++t) {
      if (lw.nil_after[t]) continue;
      PrimeCongruence pc{ctx_.prime(), lw.k_after[t], ctx_.n()};
      if (std::find(testimony.begin(), testimony.end(), pc) == testimony.end()) testimony.push_back(pc);
    }
    r.testimony = testimony;
    r.suspicious = !testimony.empty() && common_refinement_same_prime(testimony) == r.prime_congruence;
    return r;
  }

  void build_classes() {
    auto const& reps = region_.reps;
    std::vector<int> cls(reps.size(), -1);
    std::vector<std::vector<Exponent>> groups;
    for (std::size_t a = 0; a < reps.size(); ++a) {
      if (cls[a] >= 0) continue;
      cls[a] = static_cast<int>(groups.size());
      groups.push_back({reps[a]});
      for (std::size_t b = a + 1; b < reps.size(); ++b) {
        if (cls[b] < 0 && ctx_.greens_equal_P(reps[a], reps[b])) {
          cls[b] = cls[a];
          groups.back().push_back(reps[b]);
        }
      }
    }
    for (auto const& g : groups) records_.push_back(classify(g.front(), g));
    for (auto& r : records_) {
      r.is_maximal = r.is_witness && is_maximal_witness(r.element);
      r.is_true = r.is_witness && (r.is_maximal || !r.suspicious);
    }
  }
};

inline WitnessAnalysis analyze_witnesses(NormalFormSystem const& sys, MonoidPrime const& prime,
                                         WitnessOptions const& opts = {}) {
  return WitnessAnalysis(LocalizedContext(sys, prime), opts);
}

inline std::vector<WitnessRecord> enumerate_witnesses(NormalFormSystem const& sys, MonoidPrime const& prime,
                                                      Tier tier, WitnessOptions const& opts = {}) {
  return analyze_witnesses(sys, prime, opts).witnesses(tier);
}

inline WitnessRecord classify_witness(WitnessAnalysis const& wa, Exponent const& w) {
  return wa.record_of(w);
}

// All primes in canonical order: by decreasing size, then lexicographic.
inline std::vector<MonoidPrime> all_primes(std::size_t n) {
  std::vector<MonoidPrime> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) s.push_back(i);
    }
    out.emplace_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](MonoidPrime const& a, MonoidPrime const& b) {
    if (a.support.size() != b.support.size()) return a.support.size() > b.support.size();
    return a.support < b.support;
  });
  return out;
}

// Witness analyses for every prime with a non-nil localization.
class CongruenceWitnesses {
 public:
  CongruenceWitnesses(NormalFormSystem const& sys, WitnessOptions const& opts = {}) : sys_(sys) {
    for (auto const& p : all_primes(sys.n())) {
      WitnessOptions o = opts;
      if (o.box && o.box->size() != p.support.size()) o.box = restrict_to(*o.box, p.support);
      analyses_.emplace_back(LocalizedContext(sys, p), o);
    }
  }

  NormalFormSystem const& system() const noexcept { return sys_; }
  std::vector<WitnessAnalysis> const& analyses() const noexcept { return analyses_; }

  WitnessAnalysis const& at(MonoidPrime const& p) const {
    for (auto const& a : analyses_) {
      if (a.prime() == p) return a;
    }
    throw PreconditionError("unknown prime");
  }

  bool certified() const {
    return std::all_of(analyses_.begin(), analyses_.end(),
                       [](WitnessAnalysis const& a) { return a.region().certified; });
  }

  std::vector<MonoidPrime> associated_primes() const {
    std::vector<MonoidPrime> out;
    for (auto const& a : analyses_) {
      if (!a.witnesses(Tier::key).empty()) out.push_back(a.prime());
    }
    return out;
  }

  std::vector<PrimeCongruence> prime_congruences(Tier tier) const {
    std::vector<PrimeCongruence> out;
    for (auto const& a : analyses_) {
      for (auto const& r : a.witnesses(tier)) {
        if (std::find(out.begin(), out.end(), r.prime_congruence) == out.end()) {
          out.push_back(r.prime_congruence);
        }
      }
    }
    return out;
  }

  std::vector<PrimeCongruence> associated_prime_congruences() const { return prime_congruences(Tier::key); }
  std::vector<PrimeCongruence> truly_associated() const { return prime_congruences(Tier::true_witness); }

  // Associated primes that are minimal under containment.
  std::vector<MonoidPrime> minimal_associated_primes() const {
    auto ps = associated_primes();
    std::vector<MonoidPrime> out;
    for (auto const& p : ps) {
      bool minimal = true;
      for (auto const& q : ps) {
        if (!(q == p) && q.subset_of(p)) minimal = false;
      }
      if (minimal) out.push_back(p);
    }
    return out;
  }

 private:
  NormalFormSystem sys_;
  std::vector<WitnessAnalysis> analyses_;
};

struct Separator {
  MonoidPrime prime;
  Exponent u;
  Exponent witness;
  Exponent key_aide;
};

// Searches primes and translates u for a + u a key witness with key aide b + u
// (after possibly swapping a and b).
inline Separator separator_witness(NormalFormSystem const& sys, Exponent const& a, Exponent const& b,
                                   std::int64_t bound = 4) {
  if (sys.equivalent(a, b)) throw PreconditionError("elements are related");
  Exponent box(sys.n());
  for (std::size_t i = 0; i < sys.n(); ++i) box[i] = bound;
  auto us = box_points(box);
  std::stable_sort(us.begin(), us.end(), [](Exponent const& x, Exponent const& y) {
    return x.degree() < y.degree();
  });
  for (auto const& p : all_primes(sys.n())) {
    WitnessAnalysis wa(LocalizedContext(sys, p));
    for (auto const& u : us) {
      for (auto const& [w, q] : {std::pair{a, b}, std::pair{b, a}}) {
        auto wu = w + u, qu = q + u;
        if (wa.context().nil_P(wu)) continue;
        Aide aide = wa.context().nil_P(qu) ? Aide{} : Aide{qu};
        if (wa.is_key_aide(aide, wu)) return Separator{p, u, wu, qu};
      }
    }
  }
  throw CertificationError("separator search exhausted");
}

}  // namespace meso
