#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "meso/posets.hpp"
#include "oracles.hpp"

using meso::Convention;
using meso::FinitePoset;

namespace {

FinitePoset chain(std::size_t k) {
  std::vector<std::string> l;
  std::vector<std::pair<std::size_t, std::size_t>> r;
  for (std::size_t i = 0; i < k; ++i) {
    l.push_back("c" + std::to_string(i));
    if (i > 0) r.emplace_back(i - 1, i);
  }
  return FinitePoset(l, r);
}

FinitePoset boolean4() { return FinitePoset({"0", "a", "b", "ab"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}); }

FinitePoset vee() { return FinitePoset({"0", "a", "b"}, {{0, 1}, {0, 2}}); }

FinitePoset antichain2() { return FinitePoset({"a", "b"}, {}); }

}  // namespace

TEST_CASE("finite posets", "[posets]") {
  CHECK(meso::check_unique_minimum(chain(3)));
  CHECK_FALSE(meso::check_unique_minimum(antichain2()));
  CHECK(meso::poset_isomorphic(chain(2), chain(2)));
  CHECK_FALSE(meso::poset_isomorphic(chain(2), antichain2()));
  CHECK_FALSE(meso::poset_isomorphic(chain(4), boolean4()));
  CHECK(boolean4().covers().size() == 4);
  CHECK(chain(3).covers().size() == 2);
  CHECK_THROWS_AS(FinitePoset({"a", "b"}, {{0, 1}, {1, 0}}), meso::PreconditionError);
  auto e = meso::downset_embedding(boolean4());
  CHECK(e[0].empty());
  CHECK(e[3].size() == 3);
}

TEST_CASE("prime products realize down-set embeddings", "[posets]") {
  std::vector<std::vector<std::size_t>> omega{{}, {0}, {1}, {0, 1}};
  auto b = meso::realize_numbers(omega, {2, 3});
  CHECK(b == std::vector<std::int64_t>{1, 2, 3, 6});
  auto d = meso::divisibility_poset(b);
  auto iso = meso::poset_isomorphism(d, boolean4());
  REQUIRE(iso);
  CHECK(*iso == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(meso::check_no_redundant_intersection(b));
  CHECK(meso::realize_numbers({{}}, {}) == std::vector<std::int64_t>{1});
  CHECK_THROWS_AS(meso::realize_numbers(omega, {2, 2}), meso::PreconditionError);
  CHECK(meso::redundant_intersections({1, 2, 3, 6, 2 * 3 * 5, 5}).empty());
  CHECK(meso::redundant_intersections({2, 3, 6}).empty());
  CHECK(meso::redundant_intersections({1, 2, 4}).empty());
}

TEST_CASE("flat realization of a 2-chain", "[posets]") {
  auto r = meso::realize_flat(chain(2));
  CHECK(r.recipe.global == 2);
  CHECK(r.recipe.exponents[1] == 1);
  CHECK_FALSE(r.recipe.extra_prime);
  auto sys = meso::complete(r.presentation);
  auto m = meso::mesoass_poset(sys);
  CHECK(meso::poset_isomorphic(m, chain(2)));
}

TEST_CASE("realizations round trip", "[posets]") {
  std::vector<FinitePoset> ps{FinitePoset({"pt"}, {}), chain(2), chain(3), vee(), boolean4(), chain(4),
                              FinitePoset({"0", "a", "b", "c"}, {{0, 1}, {0, 2}, {0, 3}}),
                              FinitePoset({"0", "a", "b", "c"}, {{0, 1}, {1, 2}, {1, 3}}),
                              FinitePoset({"0", "a", "b", "c"}, {{0, 1}, {0, 2}, {1, 3}})};
  for (auto const& p : ps) {
    INFO(p.size() << " elements, " << p.covers().size() << " covers");
    auto flat = meso::realize_flat(p);
    INFO(meso::serialize(flat.presentation));
    auto fs = meso::complete(flat.presentation);
    auto m = meso::mesoass_poset(fs);
    CHECK(meso::poset_isomorphic(m, p));
    CHECK(meso::check_unique_minimum(m));
    auto graded = meso::realize_graded(p);
    INFO(meso::serialize(graded.presentation));
    auto gs = meso::complete(graded.presentation);
    auto o = meso::omega_poset(gs, meso::realization_prime(graded));
    CHECK(meso::poset_isomorphic(o.poset, p));
  }
}

TEST_CASE("omega posets", "[posets]") {
  auto i2 = meso::complete(oracle::fixture("i2.cong"));
  auto o = meso::omega_poset(i2, meso::MonoidPrime({0, 1}));
  CHECK(meso::poset_isomorphic(o.poset, vee()));
  auto m = meso::mesoass_poset(i2);
  CHECK(meso::poset_isomorphic(m, chain(3)));
  auto i1 = meso::complete(oracle::fixture("truewitness_i1.cong"));
  auto mi1 = meso::mesoass_poset(i1);
  CHECK(mi1.size() == 2);
  CHECK(meso::poset_isomorphic(mi1, chain(2)));
  meso::CongruenceWitnesses cw(i1);
  std::size_t at_max = 0;
  for (auto const& pc : cw.truly_associated()) at_max += pc.prime == meso::MonoidPrime({0, 1});
  CHECK(at_max == 1);
  auto ex31 = meso::complete(oracle::fixture("keynottrue.cong"));
  CHECK(meso::mesoass_poset(ex31).minimal().size() == 2);
}

namespace {

// All posets on k labelled points with point 0 as minimum, up to isomorphism.
std::vector<FinitePoset> rooted_posets(std::size_t k) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 1; i < k; ++i) {
    for (std::size_t j = 1; j < k; ++j) {
      if (i < j) slots.emplace_back(i, j);
    }
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < k; ++i) labels.push_back("p" + std::to_string(i));
  std::vector<FinitePoset> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << slots.size()); ++mask) {
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t i = 1; i < k; ++i) rel.emplace_back(0, i);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (mask >> s & 1) rel.push_back(slots[s]);
    }
    FinitePoset p(labels, rel);
    bool fresh = std::none_of(out.begin(), out.end(), [&](FinitePoset const& q) { return meso::poset_isomorphic(p, q); });
    if (fresh) out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("every rooted poset with at most 4 elements is realized", "[posets][property]") {
  std::size_t count = 0;
  for (std::size_t k = 1; k <= 4; ++k) {
    for (auto const& p : rooted_posets(k)) {
      ++count;
      INFO(k << " elements, " << p.covers().size() << " covers");
      for (auto conv : {Convention::working}) {
        auto flat = meso::realize_flat(p, conv);
        INFO(meso::serialize(flat.presentation));
        auto m = meso::mesoass_poset(meso::complete(flat.presentation));
        CHECK(meso::poset_isomorphic(m, p));
        CHECK(meso::check_unique_minimum(m));
        auto graded = meso::realize_graded(p, conv);
        INFO(meso::serialize(graded.presentation));
        auto o = meso::omega_poset(meso::complete(graded.presentation), meso::realization_prime(graded));
        CHECK(meso::poset_isomorphic(o.poset, p));
      }
    }
  }
  CHECK(count == 1 + 1 + 2 + 5);
}

TEST_CASE("binomial containment against polynomial arithmetic mod p", "[posets][property]") {
  std::mt19937 rng(54);
  std::vector<std::int64_t> pool{2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  oracle::PolyModP f{1000003};
  for (std::size_t k = 1; k <= 4; ++k) {
    for (auto const& p : rooted_posets(k)) {
      for (int trial = 0; trial < 3; ++trial) {
        std::shuffle(pool.begin(), pool.end(), rng);
        auto subsets = meso::downset_embedding(p);
        std::vector<std::int64_t> primes(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k - 1));
        auto b = meso::realize_numbers(subsets, primes);
        CHECK(meso::poset_isomorphic(meso::divisibility_poset(b), p));
        for (std::size_t i = 0; i < b.size(); ++i) {
          for (std::size_t j = 0; j < b.size(); ++j) {
            auto g = f.gcd(f.binomial(b[i]), f.binomial(b[j]));
            bool contains = g == f.binomial(b[j]);
            CHECK(contains == (b[i] % b[j] == 0));
          }
        }
      }
    }
  }
  std::vector<std::vector<std::int64_t>> lists{{1, 2, 3, 6}, {2, 3, 6}, {1, 2, 4}, {2, 3, 5, 30}, {4, 6, 12},
                                               {2, 3, 4, 12}, {6, 10, 15, 30}, {2, 5, 10}, {2, 2, 3}, {6, 2, 3, 6}};
  for (auto const& bs : lists) {
    std::vector<std::size_t> expected;
    for (std::size_t i = 0; i < bs.size(); ++i) {
      std::vector<std::int64_t> acc{1};
      bool any = false;
      for (std::size_t j = 0; j < bs.size(); ++j) {
        if (j == i || bs[i] % bs[j] != 0) continue;
        acc = any ? f.lcm(acc, f.binomial(bs[j])) : f.binomial(bs[j]);
        any = true;
      }
      if (any && acc == f.binomial(bs[i])) expected.push_back(i);
    }
    INFO(bs.size());
    CHECK(meso::redundant_intersections(bs) == expected);
  }
}

TEST_CASE("equal exponents are redundant", "[posets]") {
  CHECK(meso::redundant_intersections({2, 2, 3}) == std::vector<std::size_t>{0, 1});
  CHECK_FALSE(meso::check_no_redundant_intersection({6, 2, 3, 6}));
}

TEST_CASE("the literal convention collapses the unit structure", "[posets]") {
  for (auto const& p : {chain(2), boolean4()}) {
    auto flat = meso::realize_flat(p, Convention::paper);
    CHECK(flat.recipe.global == 1);
    CHECK(meso::mesoass_poset(meso::complete(flat.presentation)).size() == 1);
    auto graded = meso::realize_graded(p, Convention::paper);
    CHECK(meso::omega_poset(meso::complete(graded.presentation), meso::realization_prime(graded)).poset.size() == 1);
  }
}

TEST_CASE("random subset posets realize with distinct primes", "[posets][property]") {
  std::mt19937 rng(5030);
  std::vector<std::int64_t> pool{2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  oracle::PolyModP f{1000003};
  std::size_t instances = 0, polynomial = 0;
  while (instances < 50) {
    std::uniform_int_distribution<std::size_t> md(1, 5), sd(2, 7);
    std::size_t m = md(rng), size = sd(rng);
    std::set<std::vector<std::size_t>> family{{}};
    std::bernoulli_distribution coin(0.5);
    for (std::size_t t = 0; t < 4 * size && family.size() < size; ++t) {
      std::vector<std::size_t> s;
      for (std::size_t j = 0; j < m; ++j) {
        if (coin(rng)) s.push_back(j);
      }
      family.insert(s);
    }
    std::vector<std::vector<std::size_t>> subsets(family.begin(), family.end());
    std::vector<std::string> labels;
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      labels.push_back("s" + std::to_string(i));
      for (std::size_t j = 0; j < subsets.size(); ++j) {
        if (i != j && std::includes(subsets[j].begin(), subsets[j].end(), subsets[i].begin(), subsets[i].end())) {
          rel.emplace_back(i, j);
        }
      }
    }
    meso::FinitePoset p(labels, rel);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<std::int64_t> primes(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));
    auto b = meso::realize_numbers(subsets, primes);
    INFO("family of " << subsets.size() << " subsets of " << m);
    ++instances;
    CHECK(meso::poset_isomorphic(meso::divisibility_poset(b), p));
    CHECK(meso::check_no_redundant_intersection(b));
    if (*std::max_element(b.begin(), b.end()) > 210) continue;
    ++polynomial;
    for (std::size_t i = 0; i < b.size(); ++i) {
      std::vector<std::int64_t> acc;
      for (std::size_t j = 0; j < b.size(); ++j) {
        CHECK((f.gcd(f.binomial(b[i]), f.binomial(b[j])) == f.binomial(b[j])) == (b[i] % b[j] == 0));
        if (j == i || b[i] % b[j] != 0) continue;
        acc = acc.empty() ? f.binomial(b[j]) : f.lcm(acc, f.binomial(b[j]));
      }
      CHECK(acc != f.binomial(b[i]));
    }
  }
  CHECK(polynomial >= 20);
}
