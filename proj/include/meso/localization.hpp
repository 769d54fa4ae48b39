#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "meso/exponent.hpp"
#include "meso/lattice.hpp"
#include "meso/monomial_order.hpp"
#include "meso/normal_form.hpp"
#include "meso/presentation.hpp"
#include "meso/rewriting.hpp"

namespace meso {

// The monoid prime P_S: vectors with a positive coordinate in S.
struct MonoidPrime {
  std::vector<std::size_t> support;

  MonoidPrime() = default;
  explicit MonoidPrime(std::vector<std::size_t> s) : support(std::move(s)) {
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
  }

  static MonoidPrime maximal(std::size_t n) {
    std::vector<std::size_t> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = i;
    return MonoidPrime(std::move(s));
  }

  bool contains(std::size_t i) const {
    return std::binary_search(support.begin(), support.end(), i);
  }

  bool subset_of(MonoidPrime const& o) const {
    return std::includes(o.support.begin(), o.support.end(), support.begin(), support.end());
  }

  std::vector<std::size_t> complement(std::size_t n) const {
    std::vector<std::size_t> c;
    for (std::size_t i = 0; i < n; ++i) {
      if (!contains(i)) c.push_back(i);
    }
    return c;
  }

  // True when a has a positive coordinate in S.
  bool meets(Exponent const& a) const {
    for (auto i : support) {
      if (a[i] > 0) return true;
    }
    return false;
  }

  std::vector<std::string> names(std::vector<std::string> const& all) const {
    std::vector<std::string> out;
    for (auto i : support) out.push_back(all[i]);
    return out;
  }

  std::string to_string(std::vector<std::string> const& all) const {
    std::string s = "{";
    for (std::size_t k = 0; k < support.size(); ++k) {
      if (k) s += ",";
      s += all[support[k]];
    }
    return s + "}";
  }

  friend bool operator==(MonoidPrime const&, MonoidPrime const&) = default;
  friend auto operator<=>(MonoidPrime const&, MonoidPrime const&) = default;
};

// A prime together with a lattice of the units Z^(S^c); the congruence on N^n
// that collapses P_S and identifies the rest modulo the lattice.
struct PrimeCongruence {
  MonoidPrime prime;
  UnitLattice lattice;
  std::size_t n = 0;

  bool relates(Exponent const& a, Exponent const& b) const {
    bool ma = prime.meets(a), mb = prime.meets(b);
    if (ma || mb) return ma && mb;
    auto u = prime.complement(n);
    return lattice.contains(restrict_to(a, u) - restrict_to(b, u));
  }

  friend bool operator==(PrimeCongruence const& a, PrimeCongruence const& b) {
    return a.n == b.n && a.prime == b.prime && a.lattice == b.lattice;
  }
};

// Every pc1-related pair is pc2-related. Same prime: lattice containment.
// Otherwise the pairs of a generating set of pc1 are tested in pc2.
inline bool refines(PrimeCongruence const& pc1, PrimeCongruence const& pc2) {
  if (pc1.n != pc2.n) throw PreconditionError("prime congruences on different monoids");
  if (pc1.prime == pc2.prime) return pc2.lattice.contains(pc1.lattice);
  std::size_t n = pc1.n;
  auto const& s1 = pc1.prime.support;
  for (auto i : s1) {
    auto ei = Exponent::unit(n, i);
    for (std::size_t j = 0; j < n; ++j) {
      if (!pc2.relates(ei, ei + Exponent::unit(n, j))) return false;
    }
    for (auto k : s1) {
      if (!pc2.relates(ei, Exponent::unit(n, k))) return false;
    }
  }
  auto u = pc1.prime.complement(n);
  for (auto const& b : pc1.lattice.basis()) {
    if (!pc2.relates(embed(b.pos(), u, n), embed(b.neg(), u, n))) return false;
  }
  return true;
}

inline PrimeCongruence common_refinement_same_prime(std::vector<PrimeCongruence> const& pcs) {
  if (pcs.empty()) throw PreconditionError("empty list of prime congruences");
  PrimeCongruence out = pcs.front();
  for (std::size_t k = 1; k < pcs.size(); ++k) {
    if (!(pcs[k].prime == out.prime) || pcs[k].n != out.n) {
      throw PreconditionError("mixed primes");
    }
    out.lattice = lattice_intersect(out.lattice, pcs[k].lattice);
  }
  return out;
}

// A congruence localized at a monoid prime P_S. Elements are localized
// exponents of length n whose coordinates outside S may be negative.
//
// Two rewriting systems back the queries. The full system works over N^(n+d)
// with an inverse variable for each unit coordinate and an order in which the
// S-block dominates; it decides equality in Q_P and yields stabilizers. The
// orbit system works over N^S, rules carrying unit displacements; it decides
// equality in Q_P modulo units, Green's preorder, and produces translating
// units.
class LocalizedContext {
 public:
  LocalizedContext() = default;

  LocalizedContext(NormalFormSystem base, MonoidPrime prime)
      : base_(std::move(base)), prime_(std::move(prime)) {
    std::size_t n = base_.n();
    for (auto i : prime_.support) {
      if (i >= n) throw PreconditionError("prime index out of range");
    }
    s_ = prime_.support;
    u_ = prime_.complement(n);
    auto prec = precedence();
    OrderKind kind = base_.order().blocks().empty() ? OrderKind::grlex
                                                    : base_.order().blocks().front().kind;
    std::vector<std::size_t> sblock, ublock;
    for (auto v : prec) (prime_.contains(v) ? sblock : ublock).push_back(v);
    auto ublock_full = ublock;
    for (std::size_t k = 0; k < u_.size(); ++k) ublock_full.push_back(n + k);
    std::vector<MonomialOrder::Block> blocks;
    if (!sblock.empty()) blocks.push_back({kind, sblock});
    if (!ublock_full.empty()) blocks.push_back({kind, ublock_full});
    full_ = RewriteSystem(n + u_.size(), 0, MonomialOrder::from_blocks(blocks));
    std::vector<Relation> rels;
    std::vector<std::size_t> id(n);
    for (std::size_t i = 0; i < n; ++i) id[i] = i;
    for (auto const& r : relations_of(base_.presentation())) {
      Relation e{embed(r.a, id, n + u_.size()), std::nullopt, Exponent()};
      if (r.b) e.b = embed(*r.b, id, n + u_.size());
      rels.push_back(std::move(e));
    }
    for (std::size_t k = 0; k < u_.size(); ++k) {
      Exponent inv(n + u_.size());
      inv[u_[k]] = 1;
      inv[n + k] = 1;
      rels.push_back(Relation{inv, Exponent(n + u_.size()), Exponent()});
    }
    full_.complete(rels, base_.options());

    std::vector<std::size_t> sprec;
    for (auto v : sblock) {
      sprec.push_back(static_cast<std::size_t>(std::find(s_.begin(), s_.end(), v) - s_.begin()));
    }
    orbit_order_ = MonomialOrder::with_precedence(sprec, kind);
    orbit_ = RewriteSystem(s_.size(), u_.size(), orbit_order_);
    orbit_.complete(orbit_relations(), base_.options());
    CongruencePresentation q(prime_.names(base_.presentation().names));
    for (auto const& [a, b] : base_.presentation().pairs) q.add_pair(s_part(a), s_part(b));
    for (auto const& m : base_.presentation().nils) q.add_nil(s_part(m));
    quotient_ = NormalFormSystem::complete(std::move(q), orbit_order_, base_.options());
  }

  NormalFormSystem const& base() const noexcept { return base_; }
  MonoidPrime const& prime() const noexcept { return prime_; }
  std::size_t n() const noexcept { return base_.n(); }
  std::vector<std::size_t> const& s_coords() const noexcept { return s_; }
  std::vector<std::size_t> const& unit_coords() const noexcept { return u_; }
  std::size_t unit_dim() const noexcept { return u_.size(); }
  RewriteSystem const& full_system() const noexcept { return full_; }
  RewriteSystem const& orbit_system() const noexcept { return orbit_; }
  MonomialOrder const& orbit_order() const noexcept { return orbit_order_; }

  Exponent s_part(Exponent const& a) const { return restrict_to(a, s_); }
  Exponent unit_part(Exponent const& a) const { return restrict_to(a, u_); }

  // The localized exponent with S-part s and unit part u.
  Exponent compose(Exponent const& s, Exponent const& u) const {
    Exponent a(n());
    for (std::size_t k = 0; k < s_.size(); ++k) a[s_[k]] = s[k];
    for (std::size_t k = 0; k < u_.size(); ++k) a[u_[k]] = u[k];
    return a;
  }

  Exponent from_s(Exponent const& s) const { return compose(s, Exponent(u_.size())); }

  // Canonical form in Q_P over the doubled variables, or nullopt for NIL.
  std::optional<Exponent> normal_form_P(Exponent const& a) const {
    auto r = full_.reduce(lift(a));
    if (r.nil) return std::nullopt;
    return r.value;
  }

  bool nil_P(Exponent const& a) const { return !normal_form_P(a).has_value(); }

  bool equivalent_P(Exponent const& a, Exponent const& b) const {
    return normal_form_P(a) == normal_form_P(b);
  }

  // Orbit normal form of a in N^S, or nullopt for NIL.
  std::optional<Exponent> orbit_form(Exponent const& a) const {
    check(a);
    auto r = orbit_.reduce(s_part(a));
    if (r.nil) return std::nullopt;
    return r.value;
  }

  bool orbit_equal(Exponent const& a, Exponent const& b) const {
    return orbit_form(a) == orbit_form(b);
  }

  // A unit u with a + u ~_P b, or nullopt when a and b lie in different
  // orbits or are nil.
  std::optional<Exponent> find_unit(Exponent const& a, Exponent const& b) const {
    check(a);
    check(b);
    auto ra = orbit_.reduce(s_part(a));
    auto rb = orbit_.reduce(s_part(b));
    if (ra.nil || rb.nil || ra.value != rb.value) return std::nullopt;
    // s_a ~ N + da, s_b ~ N + db.
    return unit_part(b) - unit_part(a) + rb.disp - ra.disp;
  }

  // a lies in the ideal generated by b in Q_P, or a is nil.
  bool divides_P(Exponent const& b, Exponent const& a) const {
    check(a);
    check(b);
    if (nil_P(a)) return true;
    return orbit_with_nil(s_part(b)).reduce(s_part(a)).nil;
  }

  bool greens_equal_P(Exponent const& a, Exponent const& b) const {
    return divides_P(a, b) && divides_P(b, a);
  }

  // The stabilizer {u : a + u ~_P a}. Rules whose S-part divides the S-part
  // of the normal form never change the S-part, and the unit displacements of
  // exactly these rules generate the stabilizer.
  UnitLattice stabilizer(Exponent const& a) const {
    auto nf = normal_form_P(a);
    if (!nf) throw PreconditionError("nil element has no stabilizer");
    std::vector<Exponent> gens;
    for (auto const& r : full_.rules()) {
      bool below = true;
      for (auto i : s_) below = below && r.lhs[i] <= (*nf)[i];
      if (!below) continue;
      bool keeps = !r.nil;
      if (keeps) {
        for (auto i : s_) keeps = keeps && r.lhs[i] == r.rhs[i];
      }
      if (!keeps) throw CertificationError("stabilizer not certified: rule leaves the S-class");
      gens.push_back(unit_value(r.rhs) - unit_value(r.lhs));
    }
    UnitLattice k(u_.size(), gens);
    for (auto const& b : k.basis()) {
      Exponent shifted = a;
      for (std::size_t j = 0; j < u_.size(); ++j) shifted[u_[j]] += b[j];
      if (normal_form_P(shifted) != nf) throw CertificationError("stabilizer not certified");
    }
    return k;
  }

  PrimeCongruence prime_congruence_at(Exponent const& a) const {
    if (nil_P(a)) throw PreconditionError("nil element has no prime congruence");
    return PrimeCongruence{prime_, stabilizer(a), n()};
  }

  // Orbit system with the extra nil generator s (an S-vector).
  RewriteSystem const& orbit_with_nil(Exponent const& s) const {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->ideal.find(s);
    if (it != cache_->ideal.end()) return *it->second;
    auto rels = orbit_relations();
    rels.push_back(Relation{s, std::nullopt, Exponent(u_.size())});
    auto sys = std::make_unique<RewriteSystem>(s_.size(), u_.size(), orbit_order_);
    sys->complete(rels, base_.options());
    auto& ref = *sys;
    cache_->ideal.emplace(s, std::move(sys));
    return ref;
  }

  // The orbit quotient as a plain congruence on N^S.
  NormalFormSystem const& orbit_quotient() const noexcept { return quotient_; }

 private:
  struct Cache {
    std::mutex mu;
    std::map<Exponent, std::unique_ptr<RewriteSystem>> ideal;
  };

  NormalFormSystem base_;
  MonoidPrime prime_;
  std::vector<std::size_t> s_, u_;
  RewriteSystem full_;
  MonomialOrder orbit_order_;
  RewriteSystem orbit_;
  NormalFormSystem quotient_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();

  std::vector<std::size_t> precedence() const {
    std::vector<std::size_t> p;
    for (auto const& b : base_.order().blocks()) p.insert(p.end(), b.vars.begin(), b.vars.end());
    if (p.size() != n()) {
      p.resize(n());
      for (std::size_t i = 0; i < n(); ++i) p[i] = i;
    }
    return p;
  }

  std::vector<Relation> orbit_relations() const {
    std::vector<Relation> rels;
    for (auto const& [a, b] : base_.presentation().pairs) {
      rels.push_back(Relation{s_part(a), s_part(b), unit_part(b) - unit_part(a)});
    }
    for (auto const& m : base_.presentation().nils) {
      rels.push_back(Relation{s_part(m), std::nullopt, Exponent(u_.size())});
    }
    return rels;
  }

  void check(Exponent const& a) const {
    if (a.size() != n()) {
      throw PreconditionError("expected a localized exponent of length " + std::to_string(n()));
    }
    for (auto i : s_) {
      if (a[i] < 0) throw PreconditionError("negative coordinate in the prime " + a.to_string());
    }
  }

  Exponent lift(Exponent const& a) const {
    check(a);
    std::size_t n = this->n();
    Exponent w(n + u_.size());
    for (auto i : s_) w[i] = a[i];
    for (std::size_t k = 0; k < u_.size(); ++k) {
      auto v = a[u_[k]];
      if (v >= 0) {
        w[u_[k]] = v;
      } else {
        w[n + k] = -v;
      }
    }
    return w;
  }

  Exponent unit_value(Exponent const& w) const {
    Exponent v(u_.size());
    for (std::size_t k = 0; k < u_.size(); ++k) v[k] = w[u_[k]] - w[n() + k];
    return v;
  }
};

inline LocalizedContext localize(NormalFormSystem const& sys, MonoidPrime const& prime) {
  return LocalizedContext(sys, prime);
}

}  // namespace meso
