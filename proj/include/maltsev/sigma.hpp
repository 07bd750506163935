#pragma once

// The identity packages Sigma_n: 4^n six-ary symbols t1 .. t{4^n} whose
// leaf squares, glued along the complete (V o H)^n composition tree, yield
// the square (x x / x y).
//
// Leaf w carries the square
//   ( t(x,y,x,y,x,y)  t(x,y,y,x,x,y) / t(x,y,x,y,y,x)  t(x,y,y,x,y,x) ),
// argument i being the entry of the i-th elementary generator (in the order
// listed in sdmeet.hpp). The tree is: root V, both children H, their
// children level n-1 trees; leaves are numbered depth first.

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "maltsev/finite_algebra.hpp"
#include "maltsev/sdmeet.hpp"
#include "maltsev/squares.hpp"
#include "maltsev/term.hpp"

namespace maltsev {

  inline constexpr std::size_t max_sigma_level = 10;

  struct SigmaPackage {
    std::size_t           n = 0;
    Signature             signature;
    TermPool              pool;
    std::vector<Identity> identities;  // sorted by printed form
  };

  // "t1", "t2", ...; `w` counts from 0.
  std::string sigma_symbol(std::size_t w);

  // Throws InputError for n > max_sigma_level.
  SigmaPackage emit_sigma(std::size_t n);

  // Header line `sigma n=<n> symbols=<4^n> convention=<id>`, then one
  // identity per line.
  std::string  print_sigma(SigmaPackage const& p);
  SigmaPackage parse_sigma(std::string_view text);

  // terms[w] interprets t{w+1}: a term over the algebra's signature in the
  // variables v1 .. v6.
  struct SigmaAssignment {
    TermPool            pool;
    std::vector<TermId> terms;
  };

  struct SigmaCheck {
    bool        pass       = true;
    std::size_t identities = 0;
    std::size_t instances  = 0;
    std::string failure;  // the failing identity and assignment
  };

  // Throws InputError if the assignment has the wrong length or uses
  // symbols outside the algebra's signature.
  SigmaCheck check_sigma_model(FiniteAlgebra const&   a,
                               SigmaPackage const&    p,
                               SigmaAssignment const& s);
  SigmaCheck check_sigma_model(FiniteAlgebra const&   a,
                               std::size_t            n,
                               SigmaAssignment const& s);

  struct WitnessNode {
    enum class Kind : std::uint8_t { leaf, horizontal, vertical };

    Kind                         kind = Kind::leaf;
    Square                       square;  // over the free algebra on x, y
    std::array<std::uint32_t, 2> children{};
    std::uint32_t                leaf = 0;  // leaf number, for leaves
  };

  struct WitnessTree {
    std::vector<WitnessNode> nodes;
    std::uint32_t            root = 0;
  };

  struct SigmaWitness {
    std::size_t     n = 0;
    SigmaAssignment assignment;
    WitnessTree     tree;
  };

  // Needs a YES run made with provenance; throws InputError otherwise.
  SigmaWitness extract_sigma_witness(SdMeetRun const& run);

  // A Sigma_n assignment turned into a Sigma_{n+1} assignment: leaf w
  // becomes the four leaves 4w .. 4w+3 carrying s, (b b / d d), (c d / c d)
  // and (d d / d d) for the leaf square s = (a b / c d).
  SigmaAssignment pad_assignment(SigmaAssignment const& s);

}  // namespace maltsev
