#pragma once

// Small stock algebras used by the CLI, the tests and the examples in the
// README. All are idempotent.

#include <cstddef>

#include "maltsev/finite_algebra.hpp"

namespace maltsev::catalog {

  // The n-element chain 0 < 1 < ... < n-1 as a meet semilattice (min).
  FiniteAlgebra semilattice_chain(std::size_t n);

  // {0,1} with the ternary majority operation.
  FiniteAlgebra majority2();

  // {0,1} with the idempotent affine operation x + y + z mod 2.
  FiniteAlgebra affine2();

  // {0,1} with meet and join.
  FiniteAlgebra lattice2();

  // One element, one binary operation.
  FiniteAlgebra trivial();

}  // namespace maltsev::catalog
