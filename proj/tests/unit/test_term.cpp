#include <string>

#include "doctest.h"
#include "maltsev/error.hpp"
#include "maltsev/term.hpp"

using namespace maltsev;

namespace {
  Signature tau1() {
    return Signature{{"s0", 4}, {"s1", 4}, {"s2", 4}, {"s3", 4}};
  }
}  // namespace

TEST_CASE("signature rejects duplicates and nullary symbols") {
  Signature sig{{"f", 2}};
  CHECK_THROWS_AS(sig.add("f", 3), InputError);
  CHECK_THROWS_AS(sig.add("c", 0), InputError);
  CHECK(sig.find("f") == 0);
  CHECK(sig.find("g") == -1);
}

TEST_CASE("terms are interned") {
  TermPool pool;
  auto     x = pool.variable("x");
  auto     y = pool.variable("y");
  CHECK(pool.node("s0", {x, y, x, x}) == pool.node("s0", {x, y, x, x}));
  CHECK(pool.node("s0", {x, y, x, x}) != pool.node("s0", {y, x, x, x}));
  CHECK_THROWS_AS(pool.node("s0", {x, y}), InputError);
}

TEST_CASE("apply_substitution") {
  auto     sig = tau1();
  TermPool pool;
  auto     t = parse_term("s0(x,y,x,x)", sig, pool);
  auto     x = pool.variable("x");
  auto     y = pool.variable("y");

  SUBCASE("identity map") {
    CHECK(apply_substitution(pool, t, {{"x", x}, {"y", y}}) == t);
  }
  SUBCASE("swap") {
    auto s = apply_substitution(pool, t, {{"x", y}, {"y", x}});
    CHECK(print_term(pool, s) == "s0(y,x,y,y)");
  }
  SUBCASE("renaming") {
    auto u = parse_term("s1(x,x,y,x)", sig, pool);
    auto s = apply_substitution(pool, u, {{"x", pool.variable("p")}, {"y", pool.variable("q")}});
    CHECK(print_term(pool, s) == "s1(p,p,q,p)");
  }
  SUBCASE("missing binding names the variable") {
    try {
      apply_substitution(pool, t, {{"x", x}});
      FAIL("expected an error");
    } catch (InputError const& e) {
      CHECK(std::string(e.what()).find(" y") != std::string::npos);
    }
  }
  SUBCASE("composition") {
    auto p  = pool.variable("p");
    auto s1 = Substitution{{"x", parse_term("s2(x,y,y,y)", sig, pool)}, {"y", p}};
    auto s2 = Substitution{{"x", y}, {"y", x}, {"p", x}};
    Substitution composed;
    for (auto const& [v, u] : s1) {
      composed[v] = apply_substitution(pool, u, s2);
    }
    CHECK(apply_substitution(pool, apply_substitution(pool, t, s1), s2)
          == apply_substitution(pool, t, composed));
  }
}

TEST_CASE("enumerate_instances") {
  auto     sig = tau1();
  TermPool pool;
  auto     x      = pool.variable("x");
  auto     y      = pool.variable("y");
  TermId   pts[2] = {x, y};

  SUBCASE("item 2 over {x,y}") {
    auto id   = parse_identity("s0(y,x,x,x) = x", sig, pool);
    auto inst = enumerate_instances(pool, id, pts);
    REQUIRE(inst.size() == 4);
    CHECK(print_identity(pool, inst[0]) == "s0(x,x,x,x) = x");
    CHECK(print_identity(pool, inst[1]) == "s0(y,x,x,x) = x");
    CHECK(print_identity(pool, inst[2]) == "s0(x,y,y,y) = y");
    CHECK(print_identity(pool, inst[3]) == "s0(y,y,y,y) = y");
  }
  SUBCASE("singleton domain") {
    auto   id  = parse_identity("s0(x,y,x,x) = s1(x,y,x,x)", sig, pool);
    TermId one[1] = {x};
    auto   inst   = enumerate_instances(pool, id, one);
    REQUIRE(inst.size() == 1);
    CHECK(print_identity(pool, inst[0]) == "s0(x,x,x,x) = s1(x,x,x,x)");
  }
  SUBCASE("count is m^v") {
    auto   id = parse_identity("s0(x,y,z,x) = s1(z,z,y,x)", sig, pool);
    TermId three[3] = {x, y, pool.variable("z")};
    CHECK(enumerate_instances(pool, id, three).size() == 27);
  }
  SUBCASE("item 4 instances cover the xxyx / yyxy rows") {
    auto id   = parse_identity("s1(x,x,y,x) = s2(x,x,y,x)", sig, pool);
    auto inst = enumerate_instances(pool, id, pts);
    REQUIRE(inst.size() == 4);
    CHECK(print_identity(pool, inst[1]) == "s1(x,x,y,x) = s2(x,x,y,x)");
    CHECK(print_identity(pool, inst[2]) == "s1(y,y,x,y) = s2(y,y,x,y)");
  }
}

TEST_CASE("parse and print") {
  auto     sig = tau1();
  TermPool pool;

  CHECK(pool.is_variable(parse_term("x", sig, pool)));
  auto t = parse_term("s0(y,x,x,x)", sig, pool);
  CHECK(pool.name(t) == "s0");
  CHECK(pool.children(t).size() == 4);

  auto nested = parse_term(" s1( s0(x,y,x,x) , x,y,x)", sig, pool);
  CHECK(pool.depth(nested) == 2);
  CHECK(print_term(pool, nested) == "s1(s0(x,y,x,x),x,y,x)");
  CHECK(parse_term(print_term(pool, nested), sig, pool) == nested);

  CHECK_THROWS_AS(parse_term("s9(x,x,x,x)", sig, pool), ParseError);
  CHECK_THROWS_AS(parse_term("s0(x,x)", sig, pool), ParseError);
  CHECK_THROWS_AS(parse_term("s0(x,x,x,x", sig, pool), ParseError);
  try {
    parse_term("s0(x,,x,x)", sig, pool);
    FAIL("expected a parse error");
  } catch (ParseError const& e) {
    CHECK(e.position() == 5);
  }
}

TEST_CASE("parse_identities reports absolute positions") {
  auto     sig = tau1();
  TermPool pool;
  auto     ids = parse_identities("# header\ns0(x,x,x,x) = x\n\ns3(x,y,y,y) = x\n", sig, pool);
  CHECK(ids.size() == 2);
  try {
    parse_identities("s0(x,x,x,x) = x\ns0(x) = x\n", sig, pool);
    FAIL("expected a parse error");
  } catch (ParseError const& e) {
    CHECK(e.position() == 16);
    CHECK(e.message().find("expects 4") != std::string::npos);
  }
}
