#include <random>
#include <set>

#include "doctest.h"
#include "maltsev/error.hpp"
#include "maltsev/lambda.hpp"
#include "oracles/lambda_oracle.hpp"

using namespace maltsev;

namespace {

  std::vector<int> items_of(LambdaPresentation const& p) {
    return p.items;
  }

  // Square over the library's ids, renamed to oracle ids through repr.
  oracle::LSqSet rename(SquareSet const& s, LambdaFree const& f, oracle::NaiveLambda& o) {
    oracle::LSqSet out;
    for (auto const& q : s.squares()) {
      out.insert({o.intern(f.repr(q.a)), o.intern(f.repr(q.b)), o.intern(f.repr(q.c)),
                  o.intern(f.repr(q.d))});
    }
    return out;
  }

}  // namespace

TEST_CASE("lambda presentation") {
  auto p1 = build_lambda(1);
  CHECK(p1.signature.size() == 4);
  CHECK(p1.identities.size() == 12);
  CHECK(std::count(p1.items.begin(), p1.items.end(), 5) == 0);

  auto p2 = build_lambda(2);
  CHECK(p2.signature.size() == 6);
  CHECK(std::count(p2.items.begin(), p2.items.end(), 4) == 4);
  CHECK(std::count(p2.items.begin(), p2.items.end(), 5) == 2);
  CHECK(print_identity(p2.pool, p2.identities.back()) == "s5(x,y,y,y) = x");

  std::vector<std::string> item6;
  for (std::size_t k = 0; k < p2.identities.size(); ++k) {
    if (p2.items[k] == 6) {
      item6.push_back(print_identity(p2.pool, p2.identities[k]));
    }
  }
  CHECK(item6 == std::vector<std::string>{"s4(x,y,x,x) = s5(x,y,x,x)"});

  CHECK_THROWS_AS(build_lambda(0), InputError);
}

TEST_CASE("restricting to Lambda_{l,i}") {
  auto p  = build_lambda(1);
  auto r0 = restrict_lambda(p, 0);
  CHECK(items_of(r0) == std::vector<int>{1, 1, 1, 4, 4, 6, 7, 8});
  CHECK_FALSE(r0.signature.contains("s0"));
  CHECK(r0.signature.size() == 3);

  auto r3 = restrict_lambda(p, 3);
  CHECK(items_of(r3) == std::vector<int>{1, 1, 1, 2, 3, 3, 4, 4});

  CHECK_THROWS_AS(restrict_lambda(p, 4), InputError);
}

TEST_CASE("projection models satisfy Lambda_{l,i}") {
  for (std::size_t l = 1; l <= 3; ++l) {
    auto p = build_lambda(l);
    for (std::size_t i = 0; i <= 2 * l + 1; ++i) {
      auto r = restrict_lambda(p, i);
      for (std::size_t m = 1; m <= 3; ++m) {
        auto a   = projection_model(l, i, m);
        auto rep = check_identities(a, r.pool, r.identities);
        CHECK_MESSAGE(rep.pass, "l=" << l << " i=" << i << " m=" << m);
      }
    }
  }
  auto a = projection_model(1, 0, 3);
  CHECK(a.apply(0, std::vector<Elem>{2, 0, 1, 1}) == 2);
  auto b = projection_model(1, 3, 3);
  CHECK(b.apply(0, std::vector<Elem>{1, 0, 0, 0}) == 0);
  auto c = projection_model(2, 2, 2);
  CHECK(c.signature()[1].name == "s1");
  CHECK(c.apply(1, std::vector<Elem>{0, 0, 1, 0}) == 1);
  CHECK(c.apply(2, std::vector<Elem>{0, 0, 1, 0}) == 0);
}

TEST_CASE("no single-projection model of the full Lambda_1") {
  auto p = build_lambda(1);
  for (int code = 0; code < 256; ++code) {
    Signature                      sig;
    std::vector<std::vector<Elem>> tables;
    for (int j = 0; j < 4; ++j) {
      sig.add(lambda_symbol(j), 4);
      int const         arg = code >> (2 * j) & 3;
      std::vector<Elem> t(16);
      for (int idx = 0; idx < 16; ++idx) {
        t[idx] = idx >> (3 - arg) & 1;
      }
      tables.push_back(t);
    }
    FiniteAlgebra a(2, sig, tables);
    CHECK_FALSE(check_identities(a, p.pool, p.identities).pass);
  }
}

TEST_CASE("generated table agrees with the hand-written one") {
  for (std::size_t l = 1; l <= 4; ++l) {
    auto table = lambda_cell_table(l);
    for (std::size_t j = 0; j < 2 * l + 2; ++j) {
      for (unsigned pattern = 1; pattern < 8; ++pattern) {
        std::string w;
        for (int k = 3; k >= 0; --k) {
          w += (pattern >> k & 1) ? 'y' : 'x';
        }
        auto        c = table[j * 16 + pattern];
        std::string got =
            c.kind == LambdaFree::Cell::Kind::p   ? "x"
            : c.kind == LambdaFree::Cell::Kind::q ? "y"
                                                  : lambda_symbol(c.symbol);
        CHECK_MESSAGE(got == oracle::lambda_cell(static_cast<int>(l), static_cast<int>(j), w),
                      "l=" << l << " s" << j << "(" << w << ")");
      }
    }
  }
}

TEST_CASE("first level of the free algebra") {
  for (int l = 1; l <= 3; ++l) {
    oracle::NaiveLambda o{l};
    for (int j = 0; j < 2 * l + 2; ++j) {
      for (int w = 0; w < 16; ++w) {
        o.apply(j, {w >> 3 & 1, w >> 2 & 1, w >> 1 & 1, w & 1});
      }
    }
    LambdaFree f(l);
    auto       r = f.build(1);
    CHECK_FALSE(r.partial);
    CHECK(f.size() == o.name.size());
    for (Elem e = 0; e < f.size(); ++e) {
      CHECK(o.id.count(f.repr(e)) == 1);
    }
  }

  LambdaFree f(1);
  f.build(1);
  CHECK(f.size() == 42);
  auto const x = LambdaFree::x, y = LambdaFree::y;
  CHECK(f.apply(0, {y, x, x, x}) == x);
  CHECK(f.apply(3, {x, y, y, y}) == x);
  CHECK(f.apply(2, {x, x, y, x}) == f.apply(1, {x, x, y, x}));
  CHECK(f.apply(2, {y, y, x, x}) == f.apply(3, {y, y, x, x}));
  CHECK(f.apply(1, {x, y, x, x}) != f.apply(2, {x, y, x, x}));

  auto dump = f.dump();
  CHECK(std::count(dump.begin(), dump.end(), '\n') == 42);
  CHECK(dump.rfind("0 0 x\n1 0 y\n", 0) == 0);
}

TEST_CASE("second level: patterns over earlier elements") {
  LambdaFree f(1);
  f.build(1);
  auto const x = LambdaFree::x, y = LambdaFree::y;
  auto       p = f.apply(1, {x, y, y, x});
  auto       q = y;
  CHECK(f.level(p) == 1);
  CHECK(f.apply(0, {p, q, q, q}) == q);
  CHECK(f.apply(0, {q, p, p, p}) == p);
  CHECK(f.apply(3, {p, q, q, q}) == p);
  CHECK(f.apply(2, {p, p, q, p}) == f.apply(1, {p, p, q, p}));
  CHECK(f.level(f.apply(2, {p, p, q, p})) == 2);
  CHECK(f.apply(2, {p, p, p, p}) == p);

  // three distinct arguments never identify symbols
  auto r = f.apply(0, {x, y, p, x});
  CHECK(r != f.apply(1, {x, y, p, x}));
  CHECK(f.level(r) == 2);
}

TEST_CASE("operations are idempotent and raise the level by at most one") {
  LambdaFree f(2);
  f.build(1);
  auto const       pool = f.up_to_level(1);
  std::mt19937     rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int t = 0; t < 2000; ++t) {
    std::array<Elem, 4> a{pool[pick(rng)], pool[pick(rng)], pool[pick(rng)], pool[pick(rng)]};
    auto                j = static_cast<std::size_t>(t) % f.symbols();
    CHECK(f.level(f.apply(j, a)) <= 2);
    CHECK(f.apply(j, {a[1], a[1], a[1], a[1]}) == a[1]);
  }
}

TEST_CASE("validation on the free algebra") {
  for (std::size_t l = 1; l <= 2; ++l) {
    for (std::size_t k = 1; k <= 2; ++k) {
      LambdaFree f(l);
      auto       v = validate_lambda_on_free(f, k);
      CHECK_MESSAGE(v.pass, "l=" << l << " k=" << k << " " << v.failure);
      CHECK(v.instances > 0);
    }
  }
  LambdaFree f(1);
  CHECK(validate_lambda_on_free(f, 2).domain == 42);

  LambdaFree tight(1, 10);
  auto       v = validate_lambda_on_free(tight, 2);
  CHECK_FALSE(v.pass);
  CHECK_FALSE(v.budget_note.empty());
}

TEST_CASE("E_k chain") {
  for (int l = 1; l <= 2; ++l) {
    LambdaFree f(l);
    auto       chain = ek_chain(f, 1, {0, true});
    REQUIRE(chain.levels.size() == 2);
    CHECK(chain.levels[0].size() == 6);
    CHECK(chain.nested);
    CHECK_FALSE(chain.partial);

    oracle::NaiveLambda o{l};
    auto                e1 = oracle::lambda_e_next(o, oracle::lambda_e0());
    CHECK(rename(chain.levels[1], f, o) == e1);
    CHECK(chain.levels[1].size() <= std::size_t(2 * l + 2) * 1296);

    auto const x = LambdaFree::x, y = LambdaFree::y;
    for (auto const& e : chain.levels) {
      CHECK(e.contains({x, x, x, x}));
      CHECK(e.contains({y, y, y, y}));
    }
    auto const& why = chain.levels[1].derivations();
    CHECK(why.size() == chain.levels[1].size());
    CHECK(why[0].kind == Derivation::Kind::operation);
    CHECK(why[0].parents.size() == 4);
  }

  LambdaFree f(1);
  auto       chain = ek_chain(f, 2, {5000, false});
  CHECK(chain.partial);
  CHECK(chain.levels.size() == 2);
}

TEST_CASE("search for the target square") {
  CHECK_THROWS_AS(search_sigma_in_lambda(1, 1, 1), InputError);

  LambdaSearchOptions o;
  o.override_margin = true;
  auto r            = search_sigma_in_lambda(1, 3, 1, o);
  auto naive        = oracle::lambda_search(1, 3, 1);
  REQUIRE(naive.found);
  CHECK(r.outcome == SearchOutcome::present);
  CHECK(r.expected == "present");
  REQUIRE(r.found_at.has_value());
  CHECK(r.found_at->first == std::size_t(naive.rounds));
  CHECK(r.found_at->second == std::size_t(naive.depth));
  CHECK(r.sizes == naive.sizes);

  auto none = search_sigma_in_lambda(3, 0, 0);
  CHECK(none.margin_holds);
  CHECK(none.outcome == SearchOutcome::absent);
  CHECK(none.label == "bounded confirmation");

  LambdaSearchOptions small;
  small.budget_squares = 2000;
  auto b               = search_sigma_in_lambda(9, 1, 1, small);
  CHECK(b.outcome == SearchOutcome::undecided);
  CHECK(b.label == "undecided at budget");
}

TEST_CASE("search is independent of the worker count") {
  LambdaSearchOptions o;
  o.override_margin = true;
  auto one          = search_sigma_in_lambda(1, 2, 1, o);
  o.workers         = 4;
  auto four         = search_sigma_in_lambda(1, 2, 1, o);
  CHECK(one.sizes == four.sizes);
  CHECK(one.found_at == four.found_at);
}

TEST_CASE("reduction to projections") {
  auto r = lemma5_reduction_check(3, 3, {0, 5, 6, 7}, {1000, 1, 6, 11});
  CHECK_MESSAGE(r.pass, r.failure);
  CHECK(r.samples == 1000);
  CHECK(r.equal_pairs > 0);

  CHECK(lemma5_reduction_check(3, 3, {0, 1, 5, 6, 7}, {300, 1, 6, 5}).pass);
  CHECK(lemma5_reduction_check(3, 3, {0, 5, 6, 7}, {300, 2, 6, 5}).pass);
  CHECK(lemma5_reduction_check(1, 3, {0}, {300, 1, 4, 3}).pass);

  try {
    lemma5_reduction_check(3, 3, {0, 2, 5}, {});
    FAIL("expected a refusal");
  } catch (InputError const& e) {
    CHECK(std::string(e.what()).find("s2") != std::string::npos);
  }
  CHECK_THROWS_AS(lemma5_reduction_check(3, 3, {4}, {}), InputError);
  CHECK_THROWS_AS(lemma5_reduction_check(1, 0, {9}, {}), InputError);
}
