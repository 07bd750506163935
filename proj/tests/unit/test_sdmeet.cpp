#include "doctest.h"
#include "maltsev/catalog.hpp"
#include "maltsev/error.hpp"
#include "maltsev/sdmeet.hpp"
#include "oracles/bfs_decider.hpp"

using namespace maltsev;

TEST_CASE("free algebra on two generators") {
  CHECK(free_on_two(catalog::trivial()).carrier.size() == 1);
  auto semi = free_on_two(catalog::semilattice_chain(2));
  CHECK(semi.carrier.size() == 3);
  CHECK(semi.x == 0);
  CHECK(semi.y == 1);
  CHECK(free_on_two(catalog::majority2()).carrier.size()
        == oracle::bfs_decide(oracle::raw(catalog::majority2())).free_size);
  CHECK_THROWS_AS(free_on_two(FiniteAlgebra(2, Signature{{"neg", 1}}, {{1, 0}})),
                  InputError);
}

TEST_CASE("elementary matrices") {
  auto one = elementary_matrices(free_on_two(catalog::trivial()));
  CHECK(one.size() == 1);

  auto f = free_on_two(catalog::semilattice_chain(2));
  auto e = elementary_matrices(f);
  CHECK(e.size() == oracle::bfs_decide(oracle::raw(catalog::semilattice_chain(2))).e_size);
  for (std::uint32_t g = 0; g < 6; ++g) {
    CHECK(e.derivations()[g].kind == Derivation::Kind::generator);
    CHECK(e.derivations()[g].tag == g);
  }
  CHECK(e[2] == Square{f.x, f.y, f.x, f.y});
  CHECK(e[5] == Square{f.y, f.y, f.x, f.x});
  CHECK(is_reflexive_symmetric(e));
}

TEST_CASE("decider agrees with the breadth-first oracle") {
  for (auto const& a : {catalog::trivial(), catalog::semilattice_chain(2),
                        catalog::semilattice_chain(3), catalog::majority2(),
                        catalog::affine2(), catalog::lattice2()}) {
    auto oracle_run = oracle::bfs_decide(oracle::raw(a));
    for (unsigned workers : {1u, 4u}) {
      auto run = decide_sdmeet(a, {2'000'000, workers, workers == 4});
      auto v   = run.verdict;
      CHECK(v.free_size == oracle_run.free_size);
      CHECK(v.e_size == oracle_run.e_size);
      CHECK(v.tolerance_audit);
      if (oracle_run.yes) {
        CHECK(v.verdict == Verdict::yes);
        REQUIRE(v.minimal_level);
        CHECK(*v.minimal_level == static_cast<std::size_t>(*oracle_run.level));
      } else {
        CHECK(v.verdict == Verdict::no);
        CHECK(v.fixpoint_size == oracle_run.last_size);
      }
      CHECK(v.level_sizes == oracle_run.sizes);
    }
  }
}

TEST_CASE("known verdicts") {
  auto semi = decide_sdmeet(catalog::semilattice_chain(2)).verdict;
  CHECK(semi.verdict == Verdict::yes);
  CHECK(semi.minimal_level == 1u);
  CHECK(decide_sdmeet(catalog::majority2()).verdict.minimal_level == 0u);
  CHECK(decide_sdmeet(catalog::trivial()).verdict.minimal_level == 0u);
  auto affine = decide_sdmeet(catalog::affine2()).verdict;
  CHECK(affine.verdict == Verdict::no);
  CHECK(affine.fixpoint_size == 8);
}

TEST_CASE("budget gives an undecided verdict, not NO") {
  auto v = decide_sdmeet(catalog::semilattice_chain(3), {30, 1, false}).verdict;
  CHECK(v.verdict == Verdict::undecided);
  CHECK_FALSE(v.budget_note.empty());
}

TEST_CASE("renaming carrier elements does not change the verdict") {
  // the 3-chain with 0 and 2 swapped, i.e. a join semilattice order
  auto              chain = catalog::semilattice_chain(3);
  std::vector<Elem> perm{2, 1, 0};
  std::vector<Elem> t(9);
  for (Elem a = 0; a < 3; ++a) {
    for (Elem b = 0; b < 3; ++b) {
      Elem args[2] = {a, b};
      t[perm[a] * 3 + perm[b]] = perm[chain.apply(0, args)];
    }
  }
  FiniteAlgebra renamed(3, chain.signature(), {t});
  auto          x = decide_sdmeet(chain).verdict;
  auto          y = decide_sdmeet(renamed).verdict;
  CHECK(x.verdict == y.verdict);
  CHECK(x.minimal_level == y.minimal_level);
  CHECK(x.level_sizes == y.level_sizes);
}

TEST_CASE("delta equals rectangles exactly for the SD(meet) members") {
  for (auto const& a : {catalog::trivial(), catalog::semilattice_chain(2),
                        catalog::semilattice_chain(3), catalog::majority2(),
                        catalog::lattice2()}) {
    auto r = verify_delta_equals_rectangles(a);
    CHECK(r.pass);
    CHECK(r.congruences == con_all(a).size());
  }
  auto r = verify_delta_equals_rectangles(catalog::affine2());
  CHECK_FALSE(r.pass);
  REQUIRE(r.failing);
  CHECK(*r.failing == Congruence::full(2));
  REQUIRE(r.missing);
}
