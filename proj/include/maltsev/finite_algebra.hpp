#pragma once

// Finite algebras given by operation tables, with the machinery the rest of
// the library runs on: subpower generation, congruence generation and the
// congruence lattice of small algebras, and exhaustive identity checking.
//
// Carrier elements are the dense integers 0 .. size()-1.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "maltsev/detail/flat_index.hpp"
#include "maltsev/term.hpp"

namespace maltsev {

  using Elem = std::uint32_t;

  // How a member of a generated set came about. Parents index into the same
  // set (or, for compositions, into the set the composition was applied to).
  struct Derivation {
    enum class Kind : std::uint8_t { generator, operation, rule, horizontal, vertical };

    Kind                       kind = Kind::generator;
    std::uint32_t              tag  = 0;  // generator index, symbol index or rule id
    std::vector<std::uint32_t> parents;
  };

  class FiniteAlgebra {
   public:
    FiniteAlgebra() = default;
    // tables[i] lists f_i(args) for all args in lexicographic order, first
    // argument most significant. Throws InputError on size mismatches or
    // out-of-range values.
    FiniteAlgebra(std::size_t                      size,
                  Signature                        sig,
                  std::vector<std::vector<Elem>>   tables,
                  std::vector<std::string>         names = {});

    [[nodiscard]] std::size_t size() const noexcept {
      return _size;
    }
    [[nodiscard]] Signature const& signature() const noexcept {
      return _sig;
    }
    [[nodiscard]] std::vector<std::string> const& names() const noexcept {
      return _names;
    }
    [[nodiscard]] std::span<Elem const> table(std::size_t op) const {
      return _tables[op];
    }

    [[nodiscard]] Elem apply(std::size_t op, std::span<Elem const> args) const {
      std::size_t i = 0;
      for (auto a : args) {
        i = i * _size + a;
      }
      return _tables[op][i];
    }

    [[nodiscard]] bool is_idempotent() const;

    friend bool operator==(FiniteAlgebra const&, FiniteAlgebra const&) = default;

   private:
    std::size_t                    _size = 0;
    Signature                      _sig;
    std::vector<std::vector<Elem>> _tables;
    std::vector<std::string>       _names;
  };

  // Text format:
  //   carrier <n>
  //   names <name_0> ... <name_{n-1}>        (optional)
  //   op <name> <arity>
  //   <t1> ... <tk> -> <v>                   (n^k lines, lexicographic order)
  // `#` starts a comment. ParseError positions are 1-based line numbers.
  FiniteAlgebra parse_algebra(std::string_view text);
  std::string   print_algebra(FiniteAlgebra const& a);

  ////////////////////////////////////////////////////////////////////////
  // Congruences
  ////////////////////////////////////////////////////////////////////////

  class Congruence {
   public:
    Congruence() = default;
    // Any labelling of the carrier by block names; stored canonically (blocks
    // numbered by first occurrence).
    explicit Congruence(std::vector<Elem> labels);

    static Congruence identity(std::size_t n);
    static Congruence full(std::size_t n);

    [[nodiscard]] std::size_t size() const noexcept {
      return _block.size();
    }
    [[nodiscard]] std::size_t num_blocks() const noexcept {
      return _num_blocks;
    }
    [[nodiscard]] bool related(Elem a, Elem b) const {
      return _block[a] == _block[b];
    }
    [[nodiscard]] Elem block(Elem a) const {
      return _block[a];
    }
    [[nodiscard]] std::vector<Elem> const& blocks() const noexcept {
      return _block;
    }
    // All related ordered pairs, lexicographically.
    [[nodiscard]] std::vector<std::pair<Elem, Elem>> pairs() const;

    [[nodiscard]] Congruence join(Congruence const& other) const;
    [[nodiscard]] Congruence meet(Congruence const& other) const;
    [[nodiscard]] bool       refines(Congruence const& other) const;

    friend bool operator==(Congruence const& x, Congruence const& y) {
      return x._block == y._block;
    }
    friend auto operator<=>(Congruence const& x, Congruence const& y) {
      return x._block <=> y._block;
    }

   private:
    std::vector<Elem> _block;
    std::size_t       _num_blocks = 0;
  };

  // Least congruence of `a` containing `pairs`.
  Congruence cg(FiniteAlgebra const& a, std::span<std::pair<Elem, Elem> const> pairs);

  // True when every operation of `a` preserves `theta`.
  bool is_compatible(FiniteAlgebra const& a, Congruence const& theta);

  inline constexpr std::size_t default_con_bound = 8;

  // All congruences, finest first (by block count, descending), ties broken
  // lexicographically. Throws InputError when the carrier exceeds `bound`.
  std::vector<Congruence> con_all(FiniteAlgebra const& a,
                                  std::size_t          bound = default_con_bound);

  ////////////////////////////////////////////////////////////////////////
  // Subpowers
  ////////////////////////////////////////////////////////////////////////

  // Duplicate-free set of fixed-width tuples, kept in insertion order.
  class TupleSet {
   public:
    static constexpr std::uint32_t npos = detail::FlatIndex::npos;

    explicit TupleSet(std::size_t width = 0) : _width(width) {}

    [[nodiscard]] std::size_t width() const noexcept {
      return _width;
    }
    [[nodiscard]] std::size_t size() const noexcept {
      return _width == 0 ? _zero_width_count : _data.size() / _width;
    }
    [[nodiscard]] std::span<Elem const> operator[](std::size_t i) const {
      return {_data.data() + i * _width, _width};
    }

    // Returns (index, inserted). Throws InputError on a width mismatch.
    std::pair<std::uint32_t, bool> insert(std::span<Elem const> t);
    [[nodiscard]] std::uint32_t    find(std::span<Elem const> t) const;
    [[nodiscard]] bool             contains(std::span<Elem const> t) const {
      return find(t) != npos;
    }

    // Tuples in lexicographic order.
    [[nodiscard]] std::vector<std::vector<Elem>> sorted() const;

   private:
    std::size_t       _width;
    std::vector<Elem> _data;
    detail::FlatIndex _index;
    std::size_t       _zero_width_count = 0;
  };

  struct SgOptions {
    // Abort with BudgetExceeded once the set would exceed this many tuples.
    std::size_t max_size = 0;  // 0: unlimited
    // When set, receives one Derivation per member of the result.
    std::vector<Derivation>* provenance = nullptr;
  };

  // Least set containing `gens` closed under coordinatewise application of
  // every operation of `a`. Members appear in the order they are found;
  // generators first, in their given order.
  TupleSet sg_closure(FiniteAlgebra const& a,
                      std::size_t          width,
                      TupleSet const&      gens,
                      SgOptions const&     options = {});

  ////////////////////////////////////////////////////////////////////////
  // Identities
  ////////////////////////////////////////////////////////////////////////

  using Assignment = std::vector<std::pair<std::string, Elem>>;

  // Evaluates `t` with variables bound by `env`. Symbols are looked up by name
  // in the algebra's signature. Throws InputError on unknown symbols or
  // unbound variables.
  Elem evaluate(FiniteAlgebra const& a,
                TermPool const&      pool,
                TermId               t,
                Assignment const&    env);

  struct IdentityFailure {
    std::size_t identity;  // index into the checked list
    Assignment  assignment;
    Elem        lhs;
    Elem        rhs;
  };

  struct IdentityReport {
    bool                           pass = true;
    std::size_t                    instances = 0;
    std::optional<IdentityFailure> failure;
  };

  // Checks every identity under every assignment of its variables into the
  // carrier, in the order enumerate_instances uses. Stops at the first failure.
  IdentityReport check_identities(FiniteAlgebra const&     a,
                                  TermPool const&          pool,
                                  std::span<Identity const> ids);

}  // namespace maltsev
