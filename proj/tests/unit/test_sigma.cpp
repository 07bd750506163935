#include <set>

#include "doctest.h"
#include "maltsev/catalog.hpp"
#include "maltsev/error.hpp"
#include "maltsev/sigma.hpp"
#include "oracles/square_oracle.hpp"

using namespace maltsev;

namespace {

  // Leaf squares of every 6-ary term operation of `a`, entries being the
  // binary operations they induce, as value tables over A^2.
  oracle::SqSet leaf_squares_of_all_terms(FiniteAlgebra const& a,
                                          std::vector<std::vector<int>>& entries) {
    auto raw = oracle::raw(a);
    int  n   = raw.n;
    std::set<std::vector<int>> proj;
    auto args = oracle::tuples(n, 6);
    for (int i = 0; i < 6; ++i) {
      std::vector<int> p;
      for (auto const& t : args) {
        p.push_back(t[i]);
      }
      proj.insert(p);
    }
    auto          ops = oracle::naive_sg(raw, proj);
    int const     corner[4][6] = {{0, 1, 0, 1, 0, 1}, {0, 1, 1, 0, 0, 1},
                                  {0, 1, 0, 1, 1, 0}, {0, 1, 1, 0, 1, 0}};
    oracle::SqSet out;
    auto id = [&](std::vector<int> const& e) {
      auto it = std::find(entries.begin(), entries.end(), e);
      if (it == entries.end()) {
        entries.push_back(e);
        return static_cast<int>(entries.size() - 1);
      }
      return static_cast<int>(it - entries.begin());
    };
    for (auto const& op : ops) {
      oracle::Sq sq{};
      for (int k = 0; k < 4; ++k) {
        std::vector<int> table;
        for (int x = 0; x < n; ++x) {
          for (int y = 0; y < n; ++y) {
            int code = 0;
            for (int j = 0; j < 6; ++j) {
              code = code * n + (corner[k][j] == 0 ? x : y);
            }
            table.push_back(op[code]);
          }
        }
        sq[k] = id(table);
      }
      out.insert(sq);
    }
    return out;
  }

}  // namespace

TEST_CASE("sigma symbol counts") {
  CHECK(emit_sigma(0).signature.size() == 1);
  CHECK(emit_sigma(1).signature.size() == 4);
  CHECK(emit_sigma(2).signature.size() == 16);
  CHECK(emit_sigma(3).signature.size() == 64);
  CHECK_THROWS_AS(emit_sigma(max_sigma_level + 1), InputError);
}

TEST_CASE("sigma_0 is the read-off of the generators") {
  CHECK(print_sigma(emit_sigma(0))
        == "sigma n=0 symbols=1 convention=h-shares-column\n"
           "t1(x,x,x,x,x,x) = x\n"
           "t1(x,y,x,y,x,y) = x\n"
           "t1(x,y,x,y,y,x) = x\n"
           "t1(x,y,y,x,x,y) = x\n"
           "t1(x,y,y,x,y,x) = y\n");
}

TEST_CASE("sigma_1 gluing") {
  auto p = emit_sigma(1);
  // 4 gluing equations for the two H nodes, 2 for V, 4 corners, 4 idempotence
  CHECK(p.identities.size() == 14);
  auto text = print_sigma(p);
  CHECK(text.find("t1(x,y,y,x,x,y) = t2(x,y,x,y,x,y)") != std::string::npos);
  CHECK(text.find("t1(x,y,x,y,y,x) = t3(x,y,x,y,x,y)") != std::string::npos);
  CHECK(text.find("t4(x,y,y,x,y,x) = y") != std::string::npos);
}

TEST_CASE("sigma package round trip") {
  for (std::size_t n : {0u, 1u, 2u}) {
    auto p = emit_sigma(n);
    auto q = parse_sigma(print_sigma(p));
    CHECK(q.n == n);
    CHECK(print_sigma(q) == print_sigma(p));
  }
  CHECK_THROWS_AS(parse_sigma("sigma n=1 symbols=5 convention=h-shares-column\n"), ParseError);
  CHECK_THROWS_AS(parse_sigma("sigma n=1 symbols=4 convention=other\n"), ParseError);
  CHECK_THROWS_AS(parse_sigma("sigma n=0 symbols=1 convention=h-shares-column\nt2(x,x,x,x,x,x) = x\n"),
                  ParseError);
}

TEST_CASE("witnesses round trip through the checker") {
  for (auto const& a : {catalog::trivial(), catalog::semilattice_chain(2),
                        catalog::semilattice_chain(3), catalog::majority2(),
                        catalog::lattice2()}) {
    auto run = decide_sdmeet(a, {2'000'000, 2, true});
    REQUIRE(run.verdict.verdict == Verdict::yes);
    auto w = extract_sigma_witness(run);
    CHECK(w.n == *run.verdict.minimal_level);
    CHECK(w.assignment.terms.size() == std::size_t{1} << (2 * w.n));
    CHECK(w.tree.nodes[w.tree.root].square == target_square(run.free));
    for (auto const& node : w.tree.nodes) {
      if (node.kind == WitnessNode::Kind::horizontal) {
        auto const& l = w.tree.nodes[node.children[0]].square;
        auto const& r = w.tree.nodes[node.children[1]].square;
        CHECK(node.square == Square{l.a, r.b, l.c, r.d});
        CHECK(l.b == r.a);
        CHECK(l.d == r.c);
      } else if (node.kind == WitnessNode::Kind::vertical) {
        auto const& t = w.tree.nodes[node.children[0]].square;
        auto const& b = w.tree.nodes[node.children[1]].square;
        CHECK(node.square == Square{t.a, t.b, b.c, b.d});
      }
    }
    auto check = check_sigma_model(a, w.n, w.assignment);
    CHECK_MESSAGE(check.pass, check.failure);

    // ladder: a model of Sigma_n pads to a model of Sigma_{n+1}
    auto padded = w.assignment;
    for (auto m = w.n + 1; m <= 2; ++m) {
      padded = pad_assignment(padded);
      CHECK(check_sigma_model(a, m, padded).pass);
    }
  }
}

TEST_CASE("extraction needs provenance and a YES") {
  CHECK_THROWS_AS(extract_sigma_witness(decide_sdmeet(catalog::semilattice_chain(2))),
                  InputError);
  CHECK_THROWS_AS(extract_sigma_witness(decide_sdmeet(catalog::affine2(), {2'000'000, 1, true})),
                  InputError);
}

TEST_CASE("a wrong assignment is rejected with a counterexample") {
  SigmaAssignment s;
  s.terms.push_back(s.pool.variable("v1"));
  auto r = check_sigma_model(catalog::semilattice_chain(2), 0, s);
  CHECK_FALSE(r.pass);
  CHECK(r.failure.find("= y") != std::string::npos);
  CHECK_THROWS_AS(check_sigma_model(catalog::semilattice_chain(2), 1, s), InputError);
}

TEST_CASE("sigma_0 holds exactly when the target is an elementary matrix") {
  // over all 6-ary term operations of the semilattice, none satisfies Sigma_0
  std::vector<std::vector<int>> entries;
  auto leaves = leaf_squares_of_all_terms(catalog::semilattice_chain(2), entries);
  auto f      = free_on_two(catalog::semilattice_chain(2));
  CHECK(leaves.size() == elementary_matrices(f).size());
  std::vector<int> x{0, 0, 1, 1}, y{0, 1, 0, 1};
  auto             ix = std::find(entries.begin(), entries.end(), x) - entries.begin();
  auto             iy = std::find(entries.begin(), entries.end(), y) - entries.begin();
  oracle::Sq       target{int(ix), int(ix), int(ix), int(iy)};
  CHECK(leaves.count(target) == 0);
  CHECK(oracle::naive_v(oracle::naive_h(leaves)).count(target) == 1);
}

TEST_CASE("the affine algebra has no Sigma_n model for n <= 2") {
  std::vector<std::vector<int>> entries;
  auto leaves = leaf_squares_of_all_terms(catalog::affine2(), entries);
  CHECK(leaves.size() == 8);
  std::vector<int> x{0, 0, 1, 1}, y{0, 1, 0, 1};
  auto             ix = std::find(entries.begin(), entries.end(), x) - entries.begin();
  auto             iy = std::find(entries.begin(), entries.end(), y) - entries.begin();
  oracle::Sq       target{int(ix), int(ix), int(ix), int(iy)};
  auto             level = leaves;
  for (int n = 0; n <= 2; ++n) {
    CHECK(level.count(target) == 0);
    level = oracle::naive_v(oracle::naive_h(level));
  }
}
