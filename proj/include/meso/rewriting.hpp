#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "meso/exponent.hpp"
#include "meso/monomial_order.hpp"

namespace meso {

// An oriented rule lhs -> rhs on N^m, or lhs -> NIL. Rules may carry a
// displacement in Z^d: the rule then states lhs ~ rhs + disp, where disp lives
// in a group of units acting on the quotient. Plain systems use d = 0.
struct Rule {
  Exponent lhs;
  bool nil = false;
  Exponent rhs;
  Exponent disp;

  friend bool operator==(Rule const&, Rule const&) = default;
};

// Result of rewriting: a normal form plus the accumulated displacement, or
// NIL. For d = 0 the displacement is the empty vector.
struct Reduced {
  bool nil = false;
  Exponent value;
  Exponent disp;

  friend bool operator==(Reduced const&, Reduced const&) = default;
};

struct CompletionOptions {
  std::size_t max_rules = 20000;
};

// A relation a ~ b + disp, or a ~ NIL when b is empty.
struct Relation {
  Exponent a;
  std::optional<Exponent> b;
  Exponent disp;
};

// Confluent terminating rewriting system for a commutative monoid congruence,
// obtained by critical-pair completion. Every unital S-pair is again a pair
// or a monomial, so completion stops by Dickson's lemma.
class RewriteSystem {
 public:
  RewriteSystem() = default;

  RewriteSystem(std::size_t nvars, std::size_t disp_dim, MonomialOrder order)
      : nvars_(nvars), disp_dim_(disp_dim), order_(std::move(order)) {}

  std::size_t nvars() const noexcept { return nvars_; }
  std::size_t disp_dim() const noexcept { return disp_dim_; }
  MonomialOrder const& order() const noexcept { return order_; }
  std::vector<Rule> const& rules() const noexcept { return rules_; }

  Reduced reduce(Exponent a) const {
    Exponent d(disp_dim_);
    return reduce_from(std::move(a), std::move(d), rules_);
  }

  // Runs completion on `relations`.
  void complete(std::vector<Relation> const& relations,
                CompletionOptions const& opts = {}) {
    Completion c(*this, opts);
    for (auto const& r : relations) c.push(r);
    c.run();
    rules_ = c.finish();
  }

  // True when every critical pair of the current rule set is joinable.
  bool is_confluent() const {
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      for (std::size_t j = i + 1; j < rules_.size(); ++j) {
        if (!joinable(rules_[i], rules_[j], rules_)) return false;
      }
    }
    return true;
  }

 private:
  std::size_t nvars_ = 0;
  std::size_t disp_dim_ = 0;
  MonomialOrder order_;
  std::vector<Rule> rules_;

  static Reduced reduce_from(Exponent a, Exponent d,
                             std::vector<Rule> const& rules) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto const& r : rules) {
        if (!r.lhs.divides(a)) continue;
        if (r.nil) return Reduced{true, {}, {}};
        a -= r.lhs;
        a += r.rhs;
        d += r.disp;
        changed = true;
        break;
      }
    }
    return Reduced{false, std::move(a), std::move(d)};
  }

  // Both one-step rewrites of lcm(lhs) as relations against each other.
  static std::optional<Relation> critical_pair(Rule const& r1, Rule const& r2) {
    if (r1.nil && r2.nil) return std::nullopt;
    if (r1.lhs.disjoint_support(r2.lhs)) return std::nullopt;
    Exponent l = lcm(r1.lhs, r2.lhs);
    auto side = [&](Rule const& r) -> std::optional<Exponent> {
      if (r.nil) return std::nullopt;
      return l - r.lhs + r.rhs;
    };
    auto s1 = side(r1);
    auto s2 = side(r2);
    // l ~ s1 + d1 and l ~ s2 + d2, so s1 ~ s2 + (d2 - d1).
    if (!s1) return Relation{*s2, std::nullopt, Exponent(r1.disp.size())};
    if (!s2) return Relation{*s1, std::nullopt, Exponent(r1.disp.size())};
    return Relation{*s1, *s2, r2.disp - r1.disp};
  }

  bool joinable(Rule const& r1, Rule const& r2,
                std::vector<Rule> const& rules) const {
    auto cp = critical_pair(r1, r2);
    if (!cp) return true;
    auto a = reduce_from(cp->a, Exponent(disp_dim_), rules);
    if (!cp->b) return a.nil;
    auto b = reduce_from(*cp->b, Exponent(disp_dim_), rules);
    if (a.nil || b.nil) return a.nil == b.nil;
    return a.value == b.value;
  }

  class Completion {
   public:
    Completion(RewriteSystem const& sys, CompletionOptions const& opts)
        : sys_(sys), opts_(opts) {}

    void push(Relation r) { eqs_.push_back(std::move(r)); }

    void run() {
      while (true) {
        drain();
        if (pairs_.empty()) {
          if (!sweep()) break;
          continue;
        }
        auto [i, j] = pairs_.front();
        pairs_.pop_front();
        if (!active_[i] || !active_[j]) continue;
        if (auto cp = critical_pair(rules_[i], rules_[j])) push(*cp);
      }
    }

    std::vector<Rule> finish() {
      std::vector<Rule> out;
      for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (active_[i]) out.push_back(rules_[i]);
      }
      // Right-hand sides to normal form.
      for (std::size_t k = 0; k < out.size(); ++k) {
        if (out[k].nil) continue;
        std::vector<Rule> others;
        for (std::size_t m = 0; m < out.size(); ++m) {
          if (m != k) others.push_back(out[m]);
        }
        auto r = reduce_from(out[k].rhs, out[k].disp, others);
        if (r.nil) {
          out[k].nil = true;
          out[k].rhs = Exponent();
          out[k].disp = Exponent(sys_.disp_dim_);
        } else {
          out[k].rhs = std::move(r.value);
          out[k].disp = std::move(r.disp);
        }
      }
      auto const& ord = sys_.order_;
      std::sort(out.begin(), out.end(), [&](Rule const& a, Rule const& b) {
        return ord.less(a.lhs, b.lhs);
      });
      return out;
    }

   private:
    RewriteSystem const& sys_;
    CompletionOptions opts_;
    std::vector<Rule> rules_;
    std::vector<bool> active_;
    std::deque<Relation> eqs_;
    std::deque<std::pair<std::size_t, std::size_t>> pairs_;

    Reduced reduce(Exponent a, Exponent d) const {
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t i = 0; i < rules_.size(); ++i) {
          if (!active_[i]) continue;
          auto const& r = rules_[i];
          if (!r.lhs.divides(a)) continue;
          if (r.nil) return Reduced{true, {}, {}};
          a -= r.lhs;
          a += r.rhs;
          d += r.disp;
          changed = true;
          break;
        }
      }
      return Reduced{false, std::move(a), std::move(d)};
    }

    void drain() {
      while (!eqs_.empty()) {
        Relation e = std::move(eqs_.front());
        eqs_.pop_front();
        process(e);
      }
    }

    void process(Relation const& e) {
      std::size_t dd = sys_.disp_dim_;
      auto ra = reduce(e.a, Exponent(dd));
      if (!e.b) {
        if (!ra.nil) add_rule(Rule{ra.value, true, {}, Exponent(dd)});
        return;
      }
      auto rb = reduce(*e.b, Exponent(dd));
      if (ra.nil && rb.nil) return;
      if (ra.nil) {
        add_rule(Rule{rb.value, true, {}, Exponent(dd)});
        return;
      }
      if (rb.nil) {
        add_rule(Rule{ra.value, true, {}, Exponent(dd)});
        return;
      }
      if (ra.value == rb.value) return;
      // a ~ na + Da, b ~ nb + Db, a ~ b + d  =>  na ~ nb + (Db + d - Da).
      Exponent disp = rb.disp + e.disp - ra.disp;
      if (sys_.order_.less(rb.value, ra.value)) {
        add_rule(Rule{ra.value, false, rb.value, disp});
      } else {
        add_rule(Rule{rb.value, false, ra.value, -disp});
      }
    }

    void add_rule(Rule r) {
      if (rules_.size() >= opts_.max_rules) {
        throw CertificationError("completion cap exceeded (" +
                                 std::to_string(opts_.max_rules) + " rules)");
      }
      for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (!active_[i]) continue;
        if (!r.lhs.divides(rules_[i].lhs)) continue;
        active_[i] = false;
        auto const& s = rules_[i];
        if (s.nil) {
          push(Relation{s.lhs, std::nullopt, Exponent(sys_.disp_dim_)});
        } else {
          push(Relation{s.lhs, s.rhs, s.disp});
        }
      }
      std::size_t id = rules_.size();
      rules_.push_back(std::move(r));
      active_.push_back(true);
      for (std::size_t i = 0; i < id; ++i) {
        if (active_[i]) pairs_.emplace_back(i, id);
      }
    }

    // Final confluence sweep; queues every non-joinable pair.
    bool sweep() {
      bool found = false;
      for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (!active_[i]) continue;
        for (std::size_t j = i + 1; j < rules_.size(); ++j) {
          if (!active_[j]) continue;
          auto cp = critical_pair(rules_[i], rules_[j]);
          if (!cp) continue;
          auto a = reduce(cp->a, Exponent(sys_.disp_dim_));
          bool ok;
          if (!cp->b) {
            ok = a.nil;
          } else {
            auto b = reduce(*cp->b, Exponent(sys_.disp_dim_));
            ok = (a.nil || b.nil) ? a.nil == b.nil : a.value == b.value;
          }
          if (!ok) {
            push(*cp);
            found = true;
          }
        }
      }
      return found;
    }
  };
};

}  // namespace meso
