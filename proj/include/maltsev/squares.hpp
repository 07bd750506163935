#pragma once

// Squares (2x2 matrices over a carrier) and the two-dimensional closure
// machinery: horizontal and vertical composition, the (2)-reflexive and
// (2)-symmetric rules, matrix algebras, and centralization tests.
//
// A square (a b / c d) has top row a b and bottom row c d. Horizontal
// composition glues two squares along a shared column:
//   (a e / c f) H (e b / f d) = (a b / c d)
// and vertical composition along a shared row:
//   (a b / e f) V (e f / c d) = (a b / c d).

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "maltsev/detail/flat_index.hpp"
#include "maltsev/finite_algebra.hpp"

namespace maltsev {

  struct Square {
    Elem a = 0, b = 0, c = 0, d = 0;

    friend auto operator<=>(Square const&, Square const&) = default;

    [[nodiscard]] std::array<Elem, 4> entries() const {
      return {a, b, c, d};
    }
  };

  // Identifies the composition convention in reports.
  inline constexpr std::string_view square_convention = "h-shares-column";

  std::string to_string(Square const& s);
  // "a b / c d"; throws ParseError.
  Square parse_square(std::string_view text);

  // Insertion-ordered duplicate-free set of squares, with an optional
  // derivation per member.
  class SquareSet {
   public:
    static constexpr std::uint32_t npos = detail::FlatIndex::npos;

    SquareSet() = default;

    // Returns (index, inserted).
    std::pair<std::uint32_t, bool> insert(Square const& s);
    // As insert, and records `why` when the square is new and a derivation
    // log is being kept.
    std::pair<std::uint32_t, bool> insert(Square const& s, Derivation why);

    [[nodiscard]] std::size_t size() const noexcept {
      return _squares.size();
    }
    [[nodiscard]] Square const& operator[](std::size_t i) const {
      return _squares[i];
    }
    [[nodiscard]] std::uint32_t find(Square const& s) const;
    [[nodiscard]] bool          contains(Square const& s) const {
      return find(s) != npos;
    }
    [[nodiscard]] std::vector<Square> const& squares() const noexcept {
      return _squares;
    }
    [[nodiscard]] std::vector<Square> sorted() const;

    // Set inclusion / equality, ignoring order.
    [[nodiscard]] bool subset_of(SquareSet const& other) const;
    [[nodiscard]] bool same_members(SquareSet const& other) const {
      return size() == other.size() && subset_of(other);
    }

    void keep_derivations(bool on) {
      _keep = on;
    }
    [[nodiscard]] bool keeps_derivations() const noexcept {
      return _keep;
    }
    [[nodiscard]] std::vector<Derivation> const& derivations() const noexcept {
      return _why;
    }

    void reserve(std::size_t n);

    // One square per line, sorted.
    [[nodiscard]] std::string dump() const;

   private:
    std::vector<Square>     _squares;
    std::vector<Derivation> _why;
    detail::FlatIndex       _index;
    bool                    _keep = false;
  };

  SquareSet square_set(std::initializer_list<Square> squares);

  struct ComposeOptions {
    unsigned    workers = 1;
    std::size_t max_size = 0;  // 0: unlimited; otherwise BudgetExceeded
    // Record, per result square, the indexes (into the input) of the left
    // and right (resp. top and bottom) operands of its first witness.
    bool provenance = false;
  };

  // Results are listed in the order a sequential scan over the left (top)
  // operand finds them, for any worker count.
  SquareSet h_compose(SquareSet const& s, ComposeOptions const& options = {});
  SquareSet v_compose(SquareSet const& s, ComposeOptions const& options = {});

  enum Rule : unsigned {
    reflexive = 1,
    // swap the columns, swap the rows
    symmetric = 2,
    // (b a / d c) and (c b / a d), the second flip taken literally; kept to
    // exhibit that it does not make alternating closure agree with
    // saturation
    symmetric_as_printed = 4,
  };

  // Least superset closed under the selected rules.
  SquareSet close2(SquareSet const& s, unsigned rules);

  struct Eq2Options {
    unsigned    workers  = 1;
    std::size_t max_size = 0;
  };

  // Alternating V(H(.)) until nothing changes. Equals the least
  // (2)-equivalence when `s` is (2)-reflexive and (2)-symmetric.
  SquareSet alternating_closure(SquareSet const& s, Eq2Options const& options = {});

  // Least set containing `s` and closed under `rules`, H and V, computed by
  // saturating all of them together.
  SquareSet saturate(SquareSet const& s,
                     unsigned         rules   = reflexive | symmetric,
                     Eq2Options const& options = {});

  // Least (2)-equivalence containing `s`: alternating closure when `s` is
  // already (2)-reflexive and (2)-symmetric, saturation otherwise.
  SquareSet eq2_closure(SquareSet const& s, Eq2Options const& options = {});

  bool is_reflexive_symmetric(SquareSet const& s);

  ////////////////////////////////////////////////////////////////////////
  // Matrices of a pair of congruences
  ////////////////////////////////////////////////////////////////////////
  //
  // Orientation: the generators (x x / y y), (x,y) in theta1, have columns
  // in theta1, and the generators (x y / x y), (x,y) in theta2, have rows in
  // theta2. All three sets below keep that orientation, so
  // M <= Delta <= R.

  SquareSet m_matrices(FiniteAlgebra const& a,
                       Congruence const&    theta1,
                       Congruence const&    theta2);

  struct DeltaOptions {
    unsigned    workers = 1;
    std::size_t max_size = 0;
    // Re-close the result under the operations and throw Error if that adds
    // anything.
    bool audit = false;
  };

  SquareSet delta(FiniteAlgebra const& a,
                  Congruence const&    theta1,
                  Congruence const&    theta2,
                  DeltaOptions const&  options = {});

  // All squares with theta1-related columns and theta2-related rows.
  SquareSet rectangles(FiniteAlgebra const& a,
                       Congruence const&    theta1,
                       Congruence const&    theta2);

  // True when no square of `s` has one row constant and the other row not,
  // modulo `delta` (pass the identity for the plain test).
  bool rows_centralize(SquareSet const& s, Congruence const& delta);

  bool       tc_centralizes(FiniteAlgebra const& a,
                            Congruence const&    theta1,
                            Congruence const&    theta2);
  Congruence tc_commutator(FiniteAlgebra const& a,
                           Congruence const&    theta1,
                           Congruence const&    theta2);
  bool       hyper_centralizes(FiniteAlgebra const& a,
                               Congruence const&    theta1,
                               Congruence const&    theta2);
  Congruence hyper_commutator(FiniteAlgebra const& a,
                              Congruence const&    theta1,
                              Congruence const&    theta2);

}  // namespace maltsev
