#include "maltsev/squares.hpp"

#include <algorithm>
#include <exception>
#include <sstream>
#include <thread>

#include "maltsev/error.hpp"

namespace maltsev {

  namespace {

    std::uint64_t hash_square(Square const& s) {
      auto e = s.entries();
      return detail::hash_span(e);
    }

    std::uint64_t key(Elem x, Elem y) {
      return (static_cast<std::uint64_t>(x) << 32) | y;
    }

  }  // namespace

  std::string to_string(Square const& s) {
    return std::to_string(s.a) + " " + std::to_string(s.b) + " / "
           + std::to_string(s.c) + " " + std::to_string(s.d);
  }

  Square parse_square(std::string_view text) {
    std::string spaced;
    for (char ch : text) {
      if (ch == '/') {
        spaced += " / ";
      } else {
        spaced += ch;
      }
    }
    std::istringstream in{spaced};
    unsigned long      v[4];
    std::string        slash;
    if (!(in >> v[0] >> v[1] >> slash >> v[2] >> v[3]) || slash != "/") {
      throw ParseError("expected 'a b / c d'", 0);
    }
    std::string rest;
    if (in >> rest) {
      throw ParseError("trailing input after square", 0);
    }
    return {static_cast<Elem>(v[0]),
            static_cast<Elem>(v[1]),
            static_cast<Elem>(v[2]),
            static_cast<Elem>(v[3])};
  }

  ////////////////////////////////////////////////////////////////////////
  // SquareSet
  ////////////////////////////////////////////////////////////////////////

  std::pair<std::uint32_t, bool> SquareSet::insert(Square const& s) {
    auto h  = hash_square(s);
    auto id = _index.find(h, [&](std::uint32_t i) { return _squares[i] == s; });
    if (id != npos) {
      return {id, false};
    }
    auto fresh = static_cast<std::uint32_t>(_squares.size());
    _squares.push_back(s);
    _index.insert(h, fresh);
    if (_keep) {
      _why.emplace_back();
    }
    return {fresh, true};
  }

  std::pair<std::uint32_t, bool> SquareSet::insert(Square const& s, Derivation why) {
    auto r = insert(s);
    if (r.second && _keep) {
      _why.back() = std::move(why);
    }
    return r;
  }

  std::uint32_t SquareSet::find(Square const& s) const {
    return _index.find(hash_square(s), [&](std::uint32_t i) { return _squares[i] == s; });
  }

  std::vector<Square> SquareSet::sorted() const {
    auto out = _squares;
    std::sort(out.begin(), out.end());
    return out;
  }

  bool SquareSet::subset_of(SquareSet const& other) const {
    return std::all_of(_squares.begin(), _squares.end(), [&](Square const& s) {
      return other.contains(s);
    });
  }

  void SquareSet::reserve(std::size_t n) {
    _squares.reserve(n);
    _index.reserve(n);
  }

  std::string SquareSet::dump() const {
    std::string out;
    for (auto const& s : sorted()) {
      out += to_string(s);
      out += '\n';
    }
    return out;
  }

  SquareSet square_set(std::initializer_list<Square> squares) {
    SquareSet s;
    for (auto const& q : squares) {
      s.insert(q);
    }
    return s;
  }

  ////////////////////////////////////////////////////////////////////////
  // Composition
  ////////////////////////////////////////////////////////////////////////

  namespace {

    struct Partial {
      SquareSet                                        found;
      std::vector<std::pair<std::uint32_t, std::uint32_t>> parents;
    };

    SquareSet compose(SquareSet const& s, ComposeOptions const& options, bool horizontal) {
      auto const n = s.size();
      // right (bottom) operands sorted by the column (row) they share
      std::vector<std::pair<std::uint64_t, std::uint32_t>> by_key(n);
      for (std::uint32_t i = 0; i < n; ++i) {
        auto const& r = s[i];
        by_key[i]     = {horizontal ? key(r.a, r.c) : key(r.a, r.b), i};
      }
      std::sort(by_key.begin(), by_key.end());

      auto const budget = options.max_size;
      auto run = [&](std::size_t lo, std::size_t hi, Partial& out) {
        for (auto i = lo; i < hi; ++i) {
          auto const& l = s[i];
          auto k = horizontal ? key(l.b, l.d) : key(l.c, l.d);
          auto it = std::lower_bound(by_key.begin(), by_key.end(),
                                     std::make_pair(k, std::uint32_t{0}));
          for (; it != by_key.end() && it->first == k; ++it) {
            auto const& r = s[it->second];
            Square      q = horizontal ? Square{l.a, r.b, l.c, r.d}
                                       : Square{l.a, l.b, r.c, r.d};
            if (out.found.insert(q).second) {
              if (options.provenance) {
                out.parents.emplace_back(static_cast<std::uint32_t>(i), it->second);
              }
              if (budget != 0 && out.found.size() > budget) {
                throw BudgetExceeded(horizontal ? "horizontal composition"
                                                : "vertical composition",
                                     budget);
              }
            }
          }
        }
      };

      auto workers = std::max(1u, options.workers);
      if (n < 2 * workers) {
        workers = 1;
      }
      std::vector<Partial>            parts(workers);
      std::vector<std::exception_ptr> errors(workers);
      if (workers == 1) {
        run(0, n, parts[0]);
      } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
          pool.emplace_back([&, w] {
            try {
              run(n * w / workers, n * (w + 1) / workers, parts[w]);
            } catch (...) {
              errors[w] = std::current_exception();
            }
          });
        }
        for (auto& t : pool) {
          t.join();
        }
        for (auto& e : errors) {
          if (e) {
            std::rethrow_exception(e);
          }
        }
      }

      if (workers == 1 && !options.provenance) {
        return std::move(parts[0].found);
      }
      SquareSet out;
      out.keep_derivations(options.provenance);
      auto kind = horizontal ? Derivation::Kind::horizontal : Derivation::Kind::vertical;
      for (auto& p : parts) {
        for (std::size_t j = 0; j < p.found.size(); ++j) {
          if (options.provenance) {
            out.insert(p.found[j], {kind, 0, {p.parents[j].first, p.parents[j].second}});
          } else {
            out.insert(p.found[j]);
          }
          if (budget != 0 && out.size() > budget) {
            throw BudgetExceeded(horizontal ? "horizontal composition"
                                            : "vertical composition",
                                 budget);
          }
        }
        p = Partial{};
      }
      return out;
    }

  }  // namespace

  SquareSet h_compose(SquareSet const& s, ComposeOptions const& options) {
    return compose(s, options, true);
  }

  SquareSet v_compose(SquareSet const& s, ComposeOptions const& options) {
    return compose(s, options, false);
  }

  ////////////////////////////////////////////////////////////////////////
  // (2)-rules and closures
  ////////////////////////////////////////////////////////////////////////

  SquareSet close2(SquareSet const& s, unsigned rules) {
    SquareSet out;
    out.reserve(s.size());
    for (auto const& q : s.squares()) {
      out.insert(q);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      auto const q = out[i];
      if (rules & reflexive) {
        out.insert({q.a, q.a, q.c, q.c});
        out.insert({q.b, q.b, q.d, q.d});
        out.insert({q.c, q.d, q.c, q.d});
        out.insert({q.a, q.b, q.a, q.b});
      }
      if (rules & symmetric) {
        out.insert({q.b, q.a, q.d, q.c});
        out.insert({q.c, q.d, q.a, q.b});
      }
      if (rules & symmetric_as_printed) {
        out.insert({q.b, q.a, q.d, q.c});
        out.insert({q.c, q.b, q.a, q.d});
      }
    }
    return out;
  }

  bool is_reflexive_symmetric(SquareSet const& s) {
    return close2(s, reflexive | symmetric).size() == s.size();
  }

  namespace {

    void absorb(SquareSet& into, SquareSet const& from) {
      for (auto const& q : from.squares()) {
        into.insert(q);
      }
    }

    void check_budget(SquareSet const& s, std::size_t max_size, char const* what) {
      if (max_size != 0 && s.size() > max_size) {
        throw BudgetExceeded(what, max_size);
      }
    }

  }  // namespace

  SquareSet alternating_closure(SquareSet const& s, Eq2Options const& options) {
    ComposeOptions co{options.workers, options.max_size, false};
    SquareSet      x;
    absorb(x, s);
    while (true) {
      auto y = v_compose(h_compose(x, co), co);
      auto before = x.size();
      absorb(x, y);
      check_budget(x, options.max_size, "alternating closure");
      if (x.size() == before) {
        return x;
      }
    }
  }

  SquareSet saturate(SquareSet const& s, unsigned rules, Eq2Options const& options) {
    ComposeOptions co{options.workers, options.max_size, false};
    SquareSet      x;
    absorb(x, s);
    while (true) {
      auto before = x.size();
      x           = close2(x, rules);
      auto h      = h_compose(x, co);
      auto v      = v_compose(x, co);
      absorb(x, h);
      absorb(x, v);
      check_budget(x, options.max_size, "saturation");
      if (x.size() == before) {
        return x;
      }
    }
  }

  SquareSet eq2_closure(SquareSet const& s, Eq2Options const& options) {
    if (is_reflexive_symmetric(s)) {
      return alternating_closure(s, options);
    }
    return saturate(s, reflexive | symmetric, options);
  }

  ////////////////////////////////////////////////////////////////////////
  // Matrices of a pair of congruences
  ////////////////////////////////////////////////////////////////////////

  namespace {

    SquareSet from_tuples(TupleSet const& t) {
      SquareSet out;
      out.reserve(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) {
        auto q = t[i];
        out.insert({q[0], q[1], q[2], q[3]});
      }
      return out;
    }

    void require_same_carrier(FiniteAlgebra const& a,
                              Congruence const&    t1,
                              Congruence const&    t2) {
      if (t1.size() != a.size() || t2.size() != a.size()) {
        throw InputError("congruence and algebra have different carriers");
      }
    }

  }  // namespace

  SquareSet m_matrices(FiniteAlgebra const& a,
                       Congruence const&    theta1,
                       Congruence const&    theta2) {
    require_same_carrier(a, theta1, theta2);
    TupleSet gens(4);
    for (auto [x, y] : theta1.pairs()) {
      gens.insert(std::array<Elem, 4>{x, x, y, y});
    }
    for (auto [x, y] : theta2.pairs()) {
      gens.insert(std::array<Elem, 4>{x, y, x, y});
    }
    return from_tuples(sg_closure(a, 4, gens));
  }

  SquareSet delta(FiniteAlgebra const& a,
                  Congruence const&    theta1,
                  Congruence const&    theta2,
                  DeltaOptions const&  options) {
    auto out = alternating_closure(m_matrices(a, theta1, theta2),
                                   {options.workers, options.max_size});
    if (options.audit) {
      TupleSet t(4);
      for (auto const& q : out.squares()) {
        t.insert(q.entries());
      }
      if (sg_closure(a, 4, t).size() != out.size()) {
        throw Error("alternating closure of the matrix algebra is not a subalgebra");
      }
    }
    return out;
  }

  SquareSet rectangles(FiniteAlgebra const& a,
                       Congruence const&    theta1,
                       Congruence const&    theta2) {
    require_same_carrier(a, theta1, theta2);
    SquareSet  out;
    auto const n = static_cast<Elem>(a.size());
    for (Elem p = 0; p < n; ++p) {
      for (Elem q = 0; q < n; ++q) {
        if (!theta2.related(p, q)) {
          continue;
        }
        for (Elem r = 0; r < n; ++r) {
          if (!theta1.related(p, r)) {
            continue;
          }
          for (Elem t = 0; t < n; ++t) {
            if (theta1.related(q, t) && theta2.related(r, t)) {
              out.insert({p, q, r, t});
            }
          }
        }
      }
    }
    return out;
  }

  bool rows_centralize(SquareSet const& s, Congruence const& delta) {
    return std::none_of(s.squares().begin(), s.squares().end(), [&](Square const& q) {
      return delta.related(q.a, q.b) != delta.related(q.c, q.d);
    });
  }

  namespace {

    // Least delta such that, in every square of s, one row is delta-related
    // exactly when the other is.
    Congruence least_centralizing(FiniteAlgebra const& a, SquareSet const& s) {
      auto delta = Congruence::identity(a.size());
      while (true) {
        auto pairs = delta.pairs();
        auto before = pairs.size();
        for (auto const& q : s.squares()) {
          bool top = delta.related(q.a, q.b);
          bool bot = delta.related(q.c, q.d);
          if (top && !bot) {
            pairs.emplace_back(q.c, q.d);
          } else if (bot && !top) {
            pairs.emplace_back(q.a, q.b);
          }
        }
        if (pairs.size() == before) {
          return delta;
        }
        delta = cg(a, pairs);
      }
    }

  }  // namespace

  bool tc_centralizes(FiniteAlgebra const& a,
                      Congruence const&    theta1,
                      Congruence const&    theta2) {
    return rows_centralize(m_matrices(a, theta1, theta2), Congruence::identity(a.size()));
  }

  Congruence tc_commutator(FiniteAlgebra const& a,
                           Congruence const&    theta1,
                           Congruence const&    theta2) {
    return least_centralizing(a, m_matrices(a, theta1, theta2));
  }

  bool hyper_centralizes(FiniteAlgebra const& a,
                         Congruence const&    theta1,
                         Congruence const&    theta2) {
    return rows_centralize(delta(a, theta1, theta2), Congruence::identity(a.size()));
  }

  Congruence hyper_commutator(FiniteAlgebra const& a,
                              Congruence const&    theta1,
                              Congruence const&    theta2) {
    return least_centralizing(a, delta(a, theta1, theta2));
  }

}  // namespace maltsev
