#include <catch_amalgamated.hpp>

#include <random>

#include "meso/normal_form.hpp"
#include "oracles.hpp"

using meso::Exponent;
using meso::OrderKind;

namespace {

meso::CongruencePresentation random_presentation(std::mt19937& rng) {
  std::uniform_int_distribution<int> nd(1, 3), gd(1, 4), ed(0, 3), kind(0, 3);
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
  return p;
}

}  // namespace

TEST_CASE("parsing", "[monoid-core]") {
  auto i1 = meso::parse_presentation("vars x, y;\nx^2 - x*y; x*y - y^2;");
  REQUIRE(i1.pairs.size() == 2);
  CHECK(i1.pairs[0] == std::pair{Exponent{2, 0}, Exponent{1, 1}});
  CHECK(i1.pairs[1] == std::pair{Exponent{1, 1}, Exponent{0, 2}});
  CHECK(i1.nils.empty());
  auto nil = meso::parse_presentation("vars x, y; x^4;");
  CHECK(nil.nils == std::vector<Exponent>{Exponent{4, 0}});
  auto z = meso::parse_presentation("vars x, y, z; z^4 - 1;");
  CHECK(z.pairs == std::vector<std::pair<Exponent, Exponent>>{{Exponent{0, 0, 4}, Exponent{0, 0, 0}}});
  auto sugar = meso::parse_presentation("vars x, y, z; x*(z - 1);");
  CHECK(sugar.pairs == std::vector<std::pair<Exponent, Exponent>>{{Exponent{1, 0, 1}, Exponent{1, 0, 0}}});
  CHECK(meso::parse_presentation("vars x; x - x;").pairs.empty());
  CHECK_THROWS_AS(meso::parse_presentation("vars x, y; 2*x - y;"), meso::ParseError);
  CHECK_THROWS_WITH(meso::parse_presentation("vars x, y; 2*x - y;"), Catch::Matchers::ContainsSubstring("non-unital"));
  CHECK_THROWS_AS(meso::parse_presentation("vars x, y; x - w;"), meso::ParseError);
  CHECK_THROWS_AS(meso::parse_presentation("vars x, y;\nx^2 - ;"), meso::ParseError);
  for (auto const& f : {"keynottrue.cong", "i2.cong", "symmetry.cong", "ex45.cong", "truewitness_i1.cong"}) {
    auto p = oracle::fixture(f);
    auto q = meso::parse_presentation(meso::serialize(p));
    CHECK(q.names == p.names);
    CHECK(q.pairs == p.pairs);
    CHECK(q.nils == p.nils);
  }
}

TEST_CASE("completion and normal forms", "[monoid-core]") {
  auto i1 = meso::complete(oracle::fixture("truewitness_i1.cong"));
  CHECK(i1.rules().size() == 2);
  CHECK(i1.normal_form(Exponent{3, 0}) == Exponent{0, 3});
  CHECK(i1.equivalent(Exponent{2, 0}, Exponent{0, 2}));
  CHECK_FALSE(i1.equivalent(Exponent{1, 0}, Exponent{0, 1}));
  CHECK(i1.divides(Exponent{1, 0}, Exponent{1, 1}));
  CHECK_FALSE(i1.divides(Exponent{1, 0}, Exponent{0, 1}));
  CHECK(i1.divides(Exponent{0, 1}, Exponent{2, 0}));
  CHECK(i1.normal_form(Exponent{0, 0}) == Exponent{0, 0});

  auto x = meso::complete(meso::parse_presentation("vars x; x;"));
  REQUIRE(x.rules().size() == 1);
  CHECK(x.rules()[0].nil);

  auto ex31 = meso::complete(oracle::fixture("keynottrue.cong"));
  auto stair = ex31.nil_staircase();
  CHECK(std::find(stair.begin(), stair.end(), Exponent{4, 0, 0, 0}) != stair.end());
  CHECK(std::find(stair.begin(), stair.end(), Exponent{0, 4, 0, 0}) != stair.end());
  CHECK_FALSE(ex31.normal_form(Exponent{4, 1, 0, 0}));
  CHECK_FALSE(ex31.is_nil(Exponent{3, 1, 0, 0}));
  CHECK(ex31.is_nil(Exponent{3, 2, 0, 0}));
}

TEST_CASE("class regions", "[monoid-core]") {
  auto i1 = meso::complete(oracle::fixture("truewitness_i1.cong"));
  auto r = i1.enumerate_classes(Exponent{3, 3});
  std::size_t deg2 = 0;
  for (auto const& c : r.classes) {
    if (c.label && c.label->degree() == 2) deg2 = c.members.size();
  }
  CHECK(deg2 == 3);
  auto free2 = meso::complete(meso::parse_presentation("vars x, y;"));
  auto f = free2.enumerate_classes(Exponent{1, 1});
  CHECK(f.classes.size() == 4);
  CHECK(f.saturated);
}

TEST_CASE("random presentations agree with the box closure oracle", "[monoid-core][oracle]") {
  std::mt19937 rng(20240611);
  std::size_t checked = 0, disagreements = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto p = random_presentation(rng);
    INFO(meso::serialize(p));
    std::size_t n = p.n;
    Exponent inner(n), box(n);
    for (std::size_t i = 0; i < n; ++i) {
      inner[i] = 3;
      box[i] = n == 3 ? 12 : 14;
    }
    oracle::BoxClosure bc(p, box);
    std::vector<meso::NormalFormSystem> systems;
    for (auto k : {OrderKind::grlex, OrderKind::grevlex, OrderKind::lex}) {
      systems.push_back(meso::complete(p, meso::MonomialOrder::standard(n, k)));
    }
    auto pts = meso::box_points(inner);
    for (auto const& a : pts) {
      bool nil = systems[0].is_nil(a);
      if (nil != bc.nil(a)) ++disagreements;
      for (auto const& s : systems) CHECK(s.is_nil(a) == nil);
      for (auto const& b : pts) {
        if (b < a) continue;
        bool rel = systems[0].equivalent(a, b);
        ++checked;
        if (rel != bc.related(a, b)) {
          ++disagreements;
          UNSCOPED_INFO("disagreement at " << a << " " << b);
        }
        for (std::size_t k = 1; k < systems.size(); ++k) CHECK(systems[k].equivalent(a, b) == rel);
      }
    }
    for (auto const& s : systems) CHECK(s.is_confluent());
  }
  CHECK(checked > 10000);
  CHECK(disagreements == 0);
}

TEST_CASE("congruence axioms and the divisibility preorder", "[monoid-core][property]") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    auto p = random_presentation(rng);
    INFO(meso::serialize(p));
    auto s = meso::complete(p);
    Exponent inner(p.n);
    for (std::size_t i = 0; i < p.n; ++i) inner[i] = 2;
    auto pts = meso::box_points(inner);
    for (auto const& a : pts) {
      CHECK(s.equivalent(a, a));
      CHECK(s.divides(a, a));
      auto nf = s.normal_form(a);
      if (nf) CHECK(s.normal_form(*nf) == nf);
      for (auto const& c : pts) {
        if (s.is_nil(a)) CHECK(s.is_nil(a + c));
        for (auto const& b : pts) {
          if (s.equivalent(a, b)) {
            CHECK(s.equivalent(a + c, b + c));
            CHECK(s.divides(a, b));
            CHECK(s.divides(b, a));
          }
          if (s.divides(a, b) && s.divides(b, c)) CHECK(s.divides(a, c));
        }
      }
    }
  }
}

TEST_CASE("fixtures agree with the box closure oracle", "[monoid-core][oracle]") {
  struct Case {
    char const* file;
    Exponent box, inner;
  };
  std::vector<Case> cases{{"keynottrue.cong", {7, 7, 6, 6}, {4, 4, 2, 2}},
                          {"i2.cong", {4, 4, 12}, {2, 2, 5}},
                          {"symmetry.cong", {14, 14}, {5, 5}},
                          {"truewitness_i1.cong", {14, 14}, {5, 5}},
                          {"ex45.cong", {8, 8}, {6, 6}}};
  for (auto const& c : cases) {
    INFO(c.file);
    auto p = oracle::fixture(c.file);
    auto s = meso::complete(p);
    oracle::BoxClosure bc(p, c.box);
    std::size_t disagreements = 0;
    auto pts = meso::box_points(c.inner);
    for (auto const& a : pts) {
      disagreements += s.is_nil(a) != bc.nil(a);
      for (auto const& b : pts) disagreements += s.equivalent(a, b) != bc.related(a, b);
    }
    CHECK(disagreements == 0);
  }
}
