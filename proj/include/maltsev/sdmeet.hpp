#pragma once

// Deciding congruence meet semidistributivity of the variety generated by a
// finite idempotent algebra A.
//
// F is the subalgebra of A^(A^2) generated by the projections x and y. E is
// the subalgebra of F^4 generated by the six squares
//   (x x / x x), (y y / y y), (x y / x y), (y x / y x), (x x / y y), (y y / x x)
// in that order. The variety is SD(meet) iff the square (x x / x y) lies in
// (V o H)^n (E) for some n; the least such n is the level reported.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "maltsev/finite_algebra.hpp"
#include "maltsev/squares.hpp"

namespace maltsev {

  struct FreeOnTwo {
    FiniteAlgebra ambient;
    // Members are maps A^2 -> A, listed as tuples indexed by a * |A| + b.
    TupleSet                carrier;
    std::vector<Derivation> provenance;
    Elem                    x = 0;
    Elem                    y = 0;
  };

  // Throws InputError when `a` is not idempotent and BudgetExceeded when the
  // free algebra has more than `max_size` elements (0: unlimited).
  FreeOnTwo free_on_two(FiniteAlgebra const& a, std::size_t max_size = 0);

  // Squares over F (entries are carrier indexes of F). Derivations are kept:
  // generator tags are positions in the display order above, operation tags
  // are symbol indexes of the ambient algebra.
  SquareSet elementary_matrices(FreeOnTwo const& f, std::size_t max_size = 0);

  Square target_square(FreeOnTwo const& f);

  struct SdMeetOptions {
    std::size_t budget_squares = 2'000'000;
    unsigned    workers        = 1;
    // Keep every level with derivations, for witness extraction.
    bool provenance = false;
  };

  enum class Verdict { yes, no, undecided };

  std::string to_string(Verdict v);

  struct SdMeetVerdict {
    Verdict                    verdict = Verdict::undecided;
    std::optional<std::size_t> minimal_level;
    std::size_t                rounds        = 0;
    std::size_t                free_size     = 0;
    std::size_t                e_size        = 0;
    std::size_t                fixpoint_size = 0;  // size of the last level built
    std::size_t                budget_used   = 0;  // largest set materialized
    std::vector<std::size_t>   level_sizes;        // |(V o H)^n (E)|, n = 0, 1, ...
    // E was already closed under the reflexive and symmetric rules
    bool        tolerance_audit = true;
    std::string budget_note;  // what ran out, when undecided
  };

  struct SdMeetRun {
    SdMeetVerdict verdict;
    FreeOnTwo     free;
    // With provenance: levels[n] = (V o H)^n (E) and halves[n] = H of
    // levels[n - 1] (halves[0] unused). Without, only levels[0] = E.
    std::vector<SquareSet> levels;
    std::vector<SquareSet> halves;
  };

  SdMeetRun decide_sdmeet(FiniteAlgebra const& a, SdMeetOptions const& options = {});

  struct DeltaReport {
    bool                      pass = true;
    std::size_t               congruences = 0;
    std::optional<Congruence> failing;
    std::optional<Square>     missing;  // in R(alpha, alpha) but not Delta
  };

  // Compares delta(a, alpha, alpha) with rectangles(a, alpha, alpha) for
  // every congruence alpha. Throws InputError past the con_all bound.
  DeltaReport verify_delta_equals_rectangles(FiniteAlgebra const& a, unsigned workers = 1);

}  // namespace maltsev
