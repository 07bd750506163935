#include "maltsev/catalog.hpp"

#include <algorithm>

namespace maltsev::catalog {

  FiniteAlgebra semilattice_chain(std::size_t n) {
    std::vector<Elem> meet;
    for (Elem a = 0; a < n; ++a) {
      for (Elem b = 0; b < n; ++b) {
        meet.push_back(std::min(a, b));
      }
    }
    return FiniteAlgebra(n, Signature{{"meet", 2}}, {meet});
  }

  FiniteAlgebra majority2() {
    std::vector<Elem> maj;
    for (Elem i = 0; i < 8; ++i) {
      maj.push_back(((i >> 2) & 1) + ((i >> 1) & 1) + (i & 1) >= 2 ? 1 : 0);
    }
    return FiniteAlgebra(2, Signature{{"maj", 3}}, {maj});
  }

  FiniteAlgebra affine2() {
    std::vector<Elem> m;
    for (Elem i = 0; i < 8; ++i) {
      m.push_back(((i >> 2) ^ (i >> 1) ^ i) & 1);
    }
    return FiniteAlgebra(2, Signature{{"m", 3}}, {m});
  }

  FiniteAlgebra lattice2() {
    return FiniteAlgebra(
        2, Signature{{"meet", 2}, {"join", 2}}, {{0, 0, 0, 1}, {0, 1, 1, 1}});
  }

  FiniteAlgebra trivial() {
    return FiniteAlgebra(1, Signature{{"f", 2}}, {{0}});
  }

}  // namespace maltsev::catalog
