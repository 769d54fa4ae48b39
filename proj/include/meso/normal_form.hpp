#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "meso/exponent.hpp"
#include "meso/monomial_order.hpp"
#include "meso/presentation.hpp"
#include "meso/rewriting.hpp"

namespace meso {

struct ClassRegion {
  Exponent box;
  // Each class is listed with its label; nil points carry no label.
  struct Class {
    std::optional<Exponent> label;
    std::vector<Exponent> members;
  };
  std::vector<Class> classes;
  bool saturated = false;
};

inline std::vector<Relation> relations_of(CongruencePresentation const& p) {
  std::vector<Relation> rels;
  for (auto const& [a, b] : p.pairs) rels.push_back(Relation{a, b, Exponent()});
  for (auto const& m : p.nils) rels.push_back(Relation{m, std::nullopt, Exponent()});
  return rels;
}

namespace detail {

// Completes `rels` over N^m under the elimination order [elim block | keep
// block] and returns the rules that only involve kept variables, projected
// onto those coordinates. Works for plain relations only.
inline std::vector<Rule> eliminate(std::size_t m, std::vector<Relation> const& rels,
                                   std::vector<std::size_t> const& elim,
                                   MonomialOrder::Block keep_block,
                                   CompletionOptions const& opts) {
  MonomialOrder::Block eb{OrderKind::grlex, elim};
  std::vector<MonomialOrder::Block> blocks;
  if (!elim.empty()) blocks.push_back(eb);
  blocks.push_back(keep_block);
  RewriteSystem rs(m, 0, MonomialOrder::from_blocks(std::move(blocks)));
  rs.complete(rels, opts);
  std::vector<Rule> out;
  auto const& keep = keep_block.vars;
  for (auto const& r : rs.rules()) {
    bool involves = false;
    for (auto v : elim) {
      if (r.lhs[v] != 0 || (!r.nil && r.rhs[v] != 0)) involves = true;
    }
    if (involves) continue;
    Rule pr;
    pr.lhs = restrict_to(r.lhs, keep);
    pr.nil = r.nil;
    if (!r.nil) pr.rhs = restrict_to(r.rhs, keep);
    out.push_back(std::move(pr));
  }
  return out;
}

}  // namespace detail

// A congruence on N^n together with a confluent rewriting system deciding
// its word problem. Immutable after construction apart from internal caches.
class NormalFormSystem {
 public:
  NormalFormSystem() = default;

  static NormalFormSystem complete(CongruencePresentation pres,
                                   std::optional<MonomialOrder> order = {},
                                   CompletionOptions opts = {}) {
    NormalFormSystem s;
    s.order_ = order ? *order : MonomialOrder::standard(pres.n);
    s.opts_ = opts;
    s.rs_ = RewriteSystem(pres.n, 0, s.order_);
    s.rs_.complete(relations_of(pres), opts);
    s.pres_ = std::move(pres);
    s.cache_ = std::make_shared<Cache>();
    return s;
  }

  // Saturation of `pres` with respect to the product of `vars`: a ~' b iff
  // a + k*f ~ b + k*f for some k, where f is the sum of the unit vectors of
  // `vars`. The result is presented by its own (complete) rules.
  static NormalFormSystem saturate(CongruencePresentation const& pres,
                                   std::vector<std::size_t> const& vars,
                                   std::optional<MonomialOrder> order = {},
                                   CompletionOptions opts = {}) {
    auto ord = order ? *order : MonomialOrder::standard(pres.n);
    if (vars.empty()) return complete(pres, ord, opts);
    if (ord.blocks().size() != 1) {
      throw PreconditionError("saturation needs a single-block order");
    }
    std::size_t n = pres.n;
    auto rels = relations_of(pres);
    for (auto& r : rels) {
      r.a = embed(r.a, iota(n), n + 1);
      if (r.b) r.b = embed(*r.b, iota(n), n + 1);
    }
    Exponent tf(n + 1);
    tf[n] = 1;
    for (auto v : vars) tf[v] = 1;
    rels.push_back(Relation{tf, Exponent(n + 1), Exponent()});
    auto rules = detail::eliminate(n + 1, rels, {n}, ord.blocks().front(), opts);
    CongruencePresentation out(pres.names);
    for (auto const& r : rules) {
      if (r.nil) {
        out.add_nil(r.lhs);
      } else {
        out.add_pair(r.lhs, r.rhs);
      }
    }
    return complete(std::move(out), ord, opts);
  }

  CongruencePresentation const& presentation() const noexcept { return pres_; }
  MonomialOrder const& order() const noexcept { return order_; }
  std::vector<Rule> const& rules() const noexcept { return rs_.rules(); }
  bool is_confluent() const { return rs_.is_confluent(); }
  std::size_t n() const noexcept { return pres_.n; }
  CompletionOptions const& options() const noexcept { return opts_; }

  // Canonical representative, or nullopt for NIL.
  std::optional<Exponent> normal_form(Exponent const& a) const {
    check(a);
    auto r = rs_.reduce(a);
    if (r.nil) return std::nullopt;
    return r.value;
  }

  bool is_nil(Exponent const& a) const { return !normal_form(a).has_value(); }

  bool equivalent(Exponent const& a, Exponent const& b) const {
    return normal_form(a) == normal_form(b);
  }

  // True iff a is nil or a ~ b + c for some c >= 0.
  bool divides(Exponent const& b, Exponent const& a) const {
    if (is_nil(a)) return true;
    return with_nil(b).is_nil(a);
  }

  // The congruence generated by this one and the extra nil generator b.
  NormalFormSystem const& with_nil(Exponent const& b) const {
    check(b);
    std::lock_guard lock(cache_->mu);
    auto it = cache_->ideal.find(b);
    if (it != cache_->ideal.end()) return *it->second;
    auto p = pres_;
    p.add_nil(b);
    auto sys = std::make_unique<NormalFormSystem>(complete(std::move(p), order_, opts_));
    auto& ref = *sys;
    cache_->ideal.emplace(b, std::move(sys));
    return ref;
  }

  // True when every rule of `other` holds here, i.e. other refines this.
  bool contains_congruence(NormalFormSystem const& other) const {
    for (auto const& r : other.rules()) {
      if (r.nil) {
        if (!is_nil(r.lhs)) return false;
      } else if (!equivalent(r.lhs, r.rhs)) {
        return false;
      }
    }
    return true;
  }

  bool same_congruence(NormalFormSystem const& other) const {
    return contains_congruence(other) && other.contains_congruence(*this);
  }

  // Least k with k*e_i nil, or nullopt when x_i is not nilpotent.
  std::optional<std::int64_t> nilpotency(std::size_t i) const {
    auto loc = saturate(pres_, {i}, order_, opts_);
    if (!loc.is_nil(Exponent(n()))) return std::nullopt;
    for (std::int64_t k = 1;; ++k) {
      Exponent e(n());
      e[i] = k;
      if (is_nil(e)) return k;
    }
  }

  // Minimal nil exponents. Exact in the coordinates that are nilpotent; in the
  // other coordinates the search extends one step past the rule support.
  std::vector<Exponent> nil_staircase() const {
    Exponent box(n());
    for (std::size_t i = 0; i < n(); ++i) {
      if (auto k = nilpotency(i)) {
        box[i] = *k;
      } else {
        std::int64_t mx = 0;
        for (auto const& r : rules()) {
          mx = std::max(mx, r.lhs[i]);
          if (!r.nil) mx = std::max(mx, r.rhs[i]);
        }
        box[i] = mx + 1;
      }
    }
    std::vector<Exponent> out;
    for (auto const& p : box_points(box)) {
      if (!is_nil(p)) continue;
      bool minimal = true;
      for (std::size_t i = 0; i < n() && minimal; ++i) {
        if (p[i] == 0) continue;
        auto q = p;
        --q[i];
        if (is_nil(q)) minimal = false;
      }
      if (minimal) out.push_back(p);
    }
    std::sort(out.begin(), out.end(), order_.comparator());
    return out;
  }

  ClassRegion enumerate_classes(Exponent const& box) const {
    if (box.size() != n() || !box.nonnegative()) {
      throw PreconditionError("box must have " + std::to_string(n()) +
                              " nonnegative bounds");
    }
    ClassRegion region;
    region.box = box;
    auto cmp = order_.comparator();
    std::map<Exponent, std::vector<Exponent>, decltype(cmp)> groups(cmp);
    std::vector<Exponent> nil_points;
    auto pts = box_points(box);
    for (auto const& p : pts) {
      if (auto nf = normal_form(p)) {
        groups[*nf].push_back(p);
      } else {
        nil_points.push_back(p);
      }
    }
    for (auto& [label, members] : groups) {
      region.classes.push_back({label, std::move(members)});
    }
    if (!nil_points.empty()) {
      region.classes.push_back({std::nullopt, std::move(nil_points)});
    }
    // Closed under elementary moves from non-nil points => every non-nil
    // class meeting the box lies inside it.
    region.saturated = true;
    auto inside = [&](Exponent const& q) { return q.divides(box); };
    for (auto const& p : pts) {
      if (is_nil(p)) continue;
      for (auto const& [a, b] : pres_.pairs) {
        if (a.divides(p) && !inside(p - a + b)) region.saturated = false;
        if (b.divides(p) && !inside(p - b + a)) region.saturated = false;
      }
      if (!region.saturated) break;
    }
    return region;
  }

 private:
  struct Cache {
    std::mutex mu;
    std::unordered_map<Exponent, std::unique_ptr<NormalFormSystem>, ExponentHash> ideal;
  };

  CongruencePresentation pres_;
  MonomialOrder order_;
  CompletionOptions opts_;
  RewriteSystem rs_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();

  static std::vector<std::size_t> iota(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
  }

  void check(Exponent const& a) const {
    if (a.size() != n() || !a.nonnegative()) {
      throw PreconditionError("expected a nonnegative exponent of length " +
                              std::to_string(n()) + ", got " + a.to_string());
    }
  }
};

// Free-function spellings of the core operations.
inline NormalFormSystem complete(CongruencePresentation pres,
                                 std::optional<MonomialOrder> order = {},
                                 CompletionOptions opts = {}) {
  return NormalFormSystem::complete(std::move(pres), std::move(order), opts);
}

}  // namespace meso
