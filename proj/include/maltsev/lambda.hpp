#pragma once

// The Lambda_l family: 2l+2 quaternary symbols s0 .. s{2l+1} and the
// identities
//   1. s_j(x,x,x,x) = x                                for every j
//   2. s0(y,x,x,x) = x
//   3. s0(w) = s1(w)                                   w in {xyxx, yyxx}
//   4. s{2i+1}(w) = s{2i+2}(w)     0 <= i < l,         w in {xxyx, yxyx}
//   5. s{2i}(w) = s{2i+1}(w)       1 <= i < l,         w in {xyxx, yyxx}
//   6. s{2l}(x,y,x,x) = s{2l+1}(x,y,x,x)
//   7. s{2l}(y,y,x,x) = s{2l+1}(y,y,x,x)
//   8. s{2l+1}(x,y,y,y) = x
// Lambda_{l,i} keeps the identities that do not mention s_i.
//
// LambdaFree is the free algebra of the family on x, y, built lazily. Every
// element is x, y or a node s_j(a,b,c,d) in normal form; the level of a node
// is one more than the largest level of its arguments. An operation on
// arguments with two distinct values p (the first argument) and q is looked
// up in a table of forced cells generated from the identity instances over
// {x,y}; everything else is a fresh node.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maltsev/detail/flat_index.hpp"
#include "maltsev/finite_algebra.hpp"
#include "maltsev/squares.hpp"
#include "maltsev/term.hpp"

namespace maltsev {

  struct LambdaPresentation {
    std::size_t           l = 0;
    Signature             signature;
    TermPool              pool;
    std::vector<Identity> identities;
    std::vector<int>      items;  // item number (1..8) of each identity
    std::optional<std::size_t> omitted;  // i, for Lambda_{l,i}
  };

  // "s0", "s1", ...
  std::string lambda_symbol(std::size_t j);

  // Throws InputError for l = 0.
  LambdaPresentation build_lambda(std::size_t l);
  // Lambda_{l,i}. The signature drops s_i. Throws InputError for i > 2l+1.
  LambdaPresentation restrict_lambda(LambdaPresentation const& p, std::size_t i);

  // Argument position (0 or 2) that s_j projects to in the model of
  // Lambda_{l,i}: s_j with j < i is the third projection, the rest the first.
  std::size_t projection_argument(std::size_t i, std::size_t j);

  // Every s_j, j != i, as a projection on {0 .. m-1}.
  FiniteAlgebra projection_model(std::size_t l, std::size_t i, std::size_t m);

  class LambdaFree {
   public:
    static constexpr Elem x = 0;
    static constexpr Elem y = 1;

    // One cell of the two-valued table: p, q, or the node s_symbol(args).
    struct Cell {
      enum class Kind : std::uint8_t { p, q, node };
      Kind          kind   = Kind::node;
      std::uint32_t symbol = 0;

      friend bool operator==(Cell, Cell) = default;
    };

    // max_nodes bounds the number of elements (0: unlimited); exceeding it
    // throws BudgetExceeded.
    explicit LambdaFree(std::size_t l, std::size_t max_nodes = 0);

    [[nodiscard]] std::size_t l() const noexcept {
      return _l;
    }
    [[nodiscard]] std::size_t symbols() const noexcept {
      return 2 * _l + 2;
    }
    [[nodiscard]] std::size_t size() const noexcept {
      return _nodes.size();
    }
    [[nodiscard]] std::size_t max_nodes() const noexcept {
      return _max_nodes;
    }

    // Pattern bit k (most significant first) is set when argument k is q.
    // Patterns with the first bit set are never consulted.
    [[nodiscard]] Cell cell(std::size_t j, unsigned pattern) const {
      return _table[j * 16 + pattern];
    }

    Elem apply(std::size_t j, std::array<Elem, 4> const& args);

    // Evaluates a term over the signature of build_lambda(l).
    Elem evaluate(TermPool const& pool, TermId t, Assignment const& env);

    [[nodiscard]] std::uint32_t level(Elem e) const {
      return _nodes[e].level;
    }
    // -1 for x and y.
    [[nodiscard]] std::int32_t symbol(Elem e) const {
      return _nodes[e].symbol;
    }
    [[nodiscard]] std::array<Elem, 4> const& args(Elem e) const {
      return _nodes[e].args;
    }
    [[nodiscard]] std::string repr(Elem e) const;

    // Materializes every element of level <= k, level by level. Returns the
    // highest level completed; stops early (and sets `partial`) when the node
    // budget runs out.
    struct BuildResult {
      std::size_t complete_level = 0;
      bool        partial        = false;
      std::string budget_note;
    };
    BuildResult build(std::size_t k);

    // Elements of level <= k, in id order. Only meaningful once build(k)
    // completed.
    [[nodiscard]] std::vector<Elem> up_to_level(std::size_t k) const;
    [[nodiscard]] std::size_t       built_level() const noexcept {
      return _built;
    }

    // One line per element: `id level repr`.
    [[nodiscard]] std::string dump() const;

   private:
    struct Node {
      std::int32_t        symbol = -1;
      std::uint32_t       level  = 0;
      std::array<Elem, 4> args{};
    };

    Elem intern(std::uint32_t j, std::array<Elem, 4> const& args);

    std::size_t       _l;
    std::size_t       _max_nodes;
    std::vector<Cell> _table;
    std::vector<Node> _nodes;
    detail::FlatIndex _index;
    std::size_t       _built = 0;
  };

  // The two-valued table read off the identity instances of Lambda_l over
  // {x,y}: entry [j * 16 + pattern], as LambdaFree::cell.
  std::vector<LambdaFree::Cell> lambda_cell_table(std::size_t l);

  struct LambdaValidation {
    bool        pass      = true;
    std::size_t instances = 0;
    std::size_t domain    = 0;  // |F^{k-1}|
    std::string failure;
    std::string budget_note;  // set when F^{k-1} could not be built
  };

  // Every identity of Lambda_l under every assignment into F^{k-1}.
  LambdaValidation validate_lambda_on_free(LambdaFree& f, std::size_t k);

  struct EkOptions {
    std::size_t budget_squares = 5'000'000;
    bool        provenance     = false;
  };

  // levels[k] = E_k. Generator tags of E_0 are display indexes (as in
  // sdmeet.hpp); operation tags are symbol indexes with parents into E_{k-1}.
  struct EkChain {
    std::vector<SquareSet> levels;
    bool                   nested  = true;  // E_{k-1} <= E_k throughout
    bool                   partial = false;
    std::string            budget_note;
  };

  EkChain ek_chain(LambdaFree& f, std::size_t k, EkOptions const& options = {});

  struct LambdaSearchOptions {
    std::size_t budget_squares  = 5'000'000;
    unsigned    workers         = 1;
    bool        override_margin = false;
  };

  enum class SearchOutcome { present, absent, undecided };
  std::string to_string(SearchOutcome o);

  struct LambdaSearchReport {
    std::size_t   l = 0, rounds = 0, depth = 0;
    bool          margin_holds = false;  // l > 2 * 4^N
    std::string   expected;              // "absent" or "present"
    SearchOutcome outcome = SearchOutcome::undecided;
    // Least (N, k), k first, with the target in (V o H)^N (E_k).
    std::optional<std::pair<std::size_t, std::size_t>> found_at;
    // sizes[k] lists |E_k|, |(V o H)(E_k)|, ... as far as computed.
    std::vector<std::vector<std::size_t>> sizes;
    std::size_t                           free_size = 0;
    std::string                           label;
    std::string                           budget_note;
  };

  // Scans k' = 0 .. depth and, for each, N' = 0 .. rounds. Throws InputError
  // when the margin fails and is not overridden.
  LambdaSearchReport search_sigma_in_lambda(std::size_t                l,
                                            std::size_t                rounds,
                                            std::size_t                depth,
                                            LambdaSearchOptions const& options = {});

  struct Lemma5Options {
    std::size_t   samples  = 1000;
    std::size_t   depth    = 1;  // argument level, at most 2
    std::size_t   set_size = 6;
    std::uint64_t seed     = 1;
  };

  struct Lemma5Report {
    bool        pass         = true;
    std::size_t samples      = 0;
    std::size_t pairs        = 0;
    std::size_t equal_pairs  = 0;
    std::size_t pool_size    = 0;
    std::string failure;
  };

  // Samples sets of terms s_z(a,b,c,d), z in `roots`, arguments of level <=
  // depth, and checks that every pair equal in the free algebra stays equal
  // when each s_z is read as its projection in the model of Lambda_{l,i}.
  // Throws InputError naming a root with |z - i| < 2 or z > 2l+1.
  Lemma5Report lemma5_reduction_check(std::size_t                     l,
                                      std::size_t                     i,
                                      std::vector<std::size_t> const& roots,
                                      Lemma5Options const&            options = {});

}  // namespace maltsev
