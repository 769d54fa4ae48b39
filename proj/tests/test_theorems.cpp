#include <catch_amalgamated.hpp>

#include <random>

#include "meso/decomposition.hpp"
#include "oracles.hpp"

using meso::Exponent;
using meso::Tier;

namespace {

meso::CongruencePresentation random_presentation(std::mt19937& rng) {
  std::uniform_int_distribution<int> nd(1, 3), gd(1, 4), ed(0, 3), kind(0, 1);
  std::size_t n = static_cast<std::size_t>(nd(rng));
  auto p = meso::CongruencePresentation::with_default_names(n);
  int gens = gd(rng);
  auto mono = [&] {
    Exponent e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = ed(rng);
    return e;
  };
  for (int g = 0; g < gens; ++g) {
    if (kind(rng) == 0) {
      auto m = mono();
      if (!m.is_zero()) p.add_nil(m);
    } else {
      p.add_pair(mono(), mono());
    }
  }
  if (kind(rng) == 0) {
    std::uniform_int_distribution<int> pd(3, 5);
    for (std::size_t i = 0; i < n; ++i) {
      Exponent e(n);
      e[i] = pd(rng);
      p.add_nil(e);
    }
  }
  return p;
}

// Components jointly separate exactly the classes of the box closure.
std::size_t oracle_mismatches(meso::CongruencePresentation const& p, std::vector<meso::Component> const& comps) {
  Exponent box(p.n), inner(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    box[i] = p.n == 3 ? 12 : 14;
    inner[i] = 3;
  }
  oracle::BoxClosure bc(p, box);
  std::vector<meso::NormalFormSystem> cs;
  for (auto const& c : comps) cs.push_back(meso::complete(c.presentation));
  std::size_t bad = 0;
  auto pts = meso::box_points(inner);
  for (auto const& a : pts) {
    bool nil = std::all_of(cs.begin(), cs.end(), [&](auto const& s) { return s.is_nil(a); });
    bad += nil != bc.nil(a);
    for (auto const& b : pts) {
      bool rel = std::all_of(cs.begin(), cs.end(), [&](auto const& s) { return s.equivalent(a, b); });
      bad += rel != bc.related(a, b);
    }
  }
  return bad;
}

struct Tally {
  std::size_t instances = 0, certified = 0, witnesses = 0, components = 0;
};

}  // namespace

TEST_CASE("theorem suites on random presentations", "[theorems][property]") {
  std::mt19937 rng(3141);
  Tally t;
  for (int trial = 0; trial < 250; ++trial) {
    auto p = random_presentation(rng);
    INFO(meso::serialize(p));
    auto sys = meso::complete(p);
    meso::CongruenceWitnesses cw(sys);
    ++t.instances;
    for (auto const& wa : cw.analyses()) {
      if (!wa.region().certified) continue;
      for (auto const& r : wa.classes()) {
        if (!r.is_witness) continue;
        ++t.witnesses;
        if (r.is_true) CHECK(r.is_key);
        CHECK((wa.true_witness_equiv_check(r.element) != meso::TrueReason::not_true) == r.is_true);
        if (r.is_cogenerator) CHECK(r.is_key);
      }
    }
    if (!cw.certified()) continue;
    ++t.certified;

    auto key = meso::decompose(cw, Tier::key);
    auto tru = meso::decompose(cw, Tier::true_witness);
    t.components += key.components.size();
    auto vk = meso::verify_decomposition(sys, key);
    auto vt = meso::verify_decomposition(sys, tru);
    CHECK(vk.status == meso::Verification::Status::verified_exact);
    CHECK(vt.status == meso::Verification::Status::verified_exact);
    CHECK(oracle_mismatches(p, key.components) == 0);
    CHECK(oracle_mismatches(p, tru.components) == 0);

    for (auto const& c : tru.components) {
      bool found = std::any_of(key.components.begin(), key.components.end(), [&](meso::Component const& k) {
        return k.prime == c.prime && k.cogenerators == c.cogenerators;
      });
      CHECK(found);
    }
    for (auto const& c : key.components) {
      CHECK(meso::check_mesoprimary(c.presentation, c.prime));
      CHECK(meso::check_coprincipal(c.presentation, c.prime));
    }
    CHECK(meso::check_cogenerator_consistency(sys, key.components).empty());
    CHECK(meso::check_cogenerator_cover(cw, tru.components).ok());
    CHECK(meso::check_cogenerator_cover(cw, key.components).ok());
    auto ta = meso::check_truly_associated_cover(cw, key.components);
    CHECK(ta.ok());
    CHECK(meso::check_truly_associated_cover(cw, tru.components).ok());
    if (!ta.flagged.empty()) {
      auto red = meso::find_redundant(sys, key);
      for (auto i : ta.flagged) CHECK(std::find(red.begin(), red.end(), i) != red.end());
    }
  }
  INFO(t.instances << " instances, " << t.certified << " certified, " << t.witnesses << " witnesses, "
                   << t.components << " key components");
  CHECK(t.certified >= 100);
  CHECK(t.components >= 150);
}

TEST_CASE("nil monotonicity of coprincipal components", "[theorems][property]") {
  for (auto const& f : {"keynottrue.cong", "i2.cong", "ex45.cong"}) {
    INFO(f);
    auto sys = meso::complete(oracle::fixture(f));
    meso::CongruenceWitnesses cw(sys);
    for (auto const& wa : cw.analyses()) {
      auto ws = wa.witnesses(Tier::witness);
      auto const& ctx = wa.context();
      for (auto const& v : ws) {
        for (auto const& w : ws) {
          if (!wa.strictly_below(w.element, v.element)) continue;
          auto cv = meso::complete(meso::coprincipal_component(ctx, v.element).presentation);
          auto cwc = meso::complete(meso::coprincipal_component(ctx, w.element).presentation);
          Exponent box(sys.n());
          for (std::size_t i = 0; i < sys.n(); ++i) box[i] = 4;
          for (auto const& q : meso::box_points(box)) {
            if (cv.is_nil(q)) CHECK(cwc.is_nil(q));
          }
        }
      }
    }
  }
}
