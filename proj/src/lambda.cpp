#include "maltsev/lambda.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "maltsev/error.hpp"

namespace maltsev {

  std::string lambda_symbol(std::size_t j) {
    return "s" + std::to_string(j);
  }

  namespace {

    void check_l(std::size_t l) {
      if (l == 0) {
        throw InputError("lambda family needs l >= 1");
      }
    }

    // Symbol index of "s<j>".
    std::size_t symbol_index(std::string const& name) {
      return std::stoul(name.substr(1));
    }

    bool mentions(TermPool const& pool, TermId t, std::string const& symbol) {
      if (pool.is_variable(t)) {
        return false;
      }
      if (pool.name(t) == symbol) {
        return true;
      }
      for (auto c : pool.children(t)) {
        if (mentions(pool, c, symbol)) {
          return true;
        }
      }
      return false;
    }

  }  // namespace

  LambdaPresentation build_lambda(std::size_t l) {
    check_l(l);
    LambdaPresentation p;
    p.l          = l;
    auto const n = 2 * l + 2;
    for (std::size_t j = 0; j < n; ++j) {
      p.signature.add(lambda_symbol(j), 4);
    }
    auto& pool = p.pool;
    auto  x    = pool.variable("x");
    auto  y    = pool.variable("y");
    auto  s    = [&](std::size_t j, char const* w) {
      std::vector<TermId> args;
      for (auto const* c = w; *c != '\0'; ++c) {
        args.push_back(*c == 'x' ? x : y);
      }
      return pool.node(lambda_symbol(j), args);
    };
    auto add = [&](int item, TermId lhs, TermId rhs) {
      p.identities.push_back({lhs, rhs});
      p.items.push_back(item);
    };
    auto same = [&](int item, std::size_t j, std::size_t k, char const* w) {
      add(item, s(j, w), s(k, w));
    };

    for (std::size_t j = 0; j < n; ++j) {
      add(1, s(j, "xxxx"), x);
    }
    add(2, s(0, "yxxx"), x);
    same(3, 0, 1, "xyxx");
    same(3, 0, 1, "yyxx");
    for (std::size_t i = 0; i < l; ++i) {
      same(4, 2 * i + 1, 2 * i + 2, "xxyx");
      same(4, 2 * i + 1, 2 * i + 2, "yxyx");
    }
    for (std::size_t i = 1; i < l; ++i) {
      same(5, 2 * i, 2 * i + 1, "xyxx");
      same(5, 2 * i, 2 * i + 1, "yyxx");
    }
    // Item 6 pairs s{2l} with s{2l+1}, like item 7.
    same(6, 2 * l, 2 * l + 1, "xyxx");
    same(7, 2 * l, 2 * l + 1, "yyxx");
    add(8, s(2 * l + 1, "xyyy"), x);
    return p;
  }

  LambdaPresentation restrict_lambda(LambdaPresentation const& p, std::size_t i) {
    if (i > 2 * p.l + 1) {
      throw InputError("no symbol s" + std::to_string(i) + " in the lambda family with l = " +
                       std::to_string(p.l));
    }
    LambdaPresentation out;
    out.l       = p.l;
    out.omitted = i;
    auto const dropped = lambda_symbol(i);
    for (auto const& sym : p.signature.symbols()) {
      if (sym.name != dropped) {
        out.signature.add(sym.name, sym.arity);
      }
    }
    for (std::size_t k = 0; k < p.identities.size(); ++k) {
      auto id = p.identities[k];
      if (mentions(p.pool, id.lhs, dropped) || mentions(p.pool, id.rhs, dropped)) {
        continue;
      }
      out.identities.push_back(
          {import_term(p.pool, id.lhs, out.pool), import_term(p.pool, id.rhs, out.pool)});
      out.items.push_back(p.items[k]);
    }
    return out;
  }

  std::size_t projection_argument(std::size_t i, std::size_t j) {
    return j < i ? 2 : 0;
  }

  FiniteAlgebra projection_model(std::size_t l, std::size_t i, std::size_t m) {
    check_l(l);
    if (i > 2 * l + 1) {
      throw InputError("projection model index out of range");
    }
    if (m == 0) {
      throw InputError("projection model needs a nonempty carrier");
    }
    Signature                      sig;
    std::vector<std::vector<Elem>> tables;
    for (std::size_t j = 0; j < 2 * l + 2; ++j) {
      if (j == i) {
        continue;
      }
      sig.add(lambda_symbol(j), 4);
      auto const        arg = projection_argument(i, j);
      std::vector<Elem> t(m * m * m * m);
      for (std::size_t idx = 0; idx < t.size(); ++idx) {
        // digit 0 is the most significant
        auto v = idx;
        for (std::size_t k = 0; k < 3 - arg; ++k) {
          v /= m;
        }
        t[idx] = static_cast<Elem>(v % m);
      }
      tables.push_back(std::move(t));
    }
    return FiniteAlgebra(m, std::move(sig), std::move(tables));
  }

  ////////////////////////////////////////////////////////////////////////
  // The two-valued table
  ////////////////////////////////////////////////////////////////////////

  std::vector<LambdaFree::Cell> lambda_cell_table(std::size_t l) {
    using Cell     = LambdaFree::Cell;
    auto       p   = build_lambda(l);
    auto const n   = 2 * l + 2;
    auto const vx  = n * 16;
    auto const vy  = vx + 1;
    std::vector<std::size_t> parent(vx + 2);
    for (std::size_t k = 0; k < parent.size(); ++k) {
      parent[k] = k;
    }
    auto find = [&](std::size_t k) {
      while (parent[k] != k) {
        k = parent[k] = parent[parent[k]];
      }
      return k;
    };

    auto const x = p.pool.variable("x");
    auto const y = p.pool.variable("y");
    std::array<TermId, 2> points{x, y};
    // Node of one side of a ground instance, or npos for a constant cell.
    auto side = [&](TermId t) -> std::size_t {
      if (p.pool.is_variable(t)) {
        return t == x ? vx : vy;
      }
      unsigned pattern = 0;
      for (auto c : p.pool.children(t)) {
        pattern = pattern << 1 | (c == y ? 1 : 0);
      }
      if (pattern == 0 || pattern == 15) {
        return std::string::npos;
      }
      return symbol_index(p.pool.name(t)) * 16 + pattern;
    };
    for (auto const& id : p.identities) {
      for (auto const& g : enumerate_instances(p.pool, id, points)) {
        auto a = side(g.lhs);
        auto b = side(g.rhs);
        if (a == std::string::npos || b == std::string::npos) {
          continue;
        }
        parent[find(a)] = find(b);
      }
    }
    if (find(vx) == find(vy)) {
      throw Error("lambda identities identify x and y");
    }

    std::vector<std::size_t> least(parent.size(), std::string::npos);
    for (std::size_t c = 0; c < vx; ++c) {
      auto& m = least[find(c)];
      m       = std::min(m, c / 16);
    }
    // Reading with x as p; for patterns with the first bit set that is not
    // the first argument, so they are checked against their mirror image.
    auto read = [&](std::size_t j, unsigned pattern, bool x_is_p) {
      auto r = find(j * 16 + pattern);
      if (r == find(vx)) {
        return Cell{x_is_p ? Cell::Kind::p : Cell::Kind::q, 0};
      }
      if (r == find(vy)) {
        return Cell{x_is_p ? Cell::Kind::q : Cell::Kind::p, 0};
      }
      return Cell{Cell::Kind::node, static_cast<std::uint32_t>(least[r])};
    };
    std::vector<Cell> table(n * 16);
    for (std::size_t j = 0; j < n; ++j) {
      for (unsigned pattern = 1; pattern < 15; ++pattern) {
        table[j * 16 + pattern] = read(j, pattern, true);
      }
      for (unsigned pattern = 8; pattern < 15; ++pattern) {
        if (read(j, pattern, false) != table[j * 16 + (pattern ^ 15u)]) {
          throw Error("lambda table is not symmetric under swapping x and y");
        }
      }
    }
    return table;
  }

  ////////////////////////////////////////////////////////////////////////
  // LambdaFree
  ////////////////////////////////////////////////////////////////////////

  namespace {

    std::uint64_t node_hash(std::uint32_t j, std::array<Elem, 4> const& a) {
      std::array<std::uint32_t, 5> key{j, a[0], a[1], a[2], a[3]};
      return detail::hash_span(key);
    }

  }  // namespace

  LambdaFree::LambdaFree(std::size_t l, std::size_t max_nodes)
      : _l(l), _max_nodes(max_nodes), _table(lambda_cell_table(l)) {
    _nodes.push_back({});
    _nodes.push_back({});
  }

  Elem LambdaFree::intern(std::uint32_t j, std::array<Elem, 4> const& args) {
    auto h  = node_hash(j, args);
    auto id = _index.find(h, [&](std::uint32_t k) {
      return _nodes[k].symbol == static_cast<std::int32_t>(j) && _nodes[k].args == args;
    });
    if (id != detail::FlatIndex::npos) {
      return id;
    }
    if (_max_nodes != 0 && _nodes.size() >= _max_nodes) {
      throw BudgetExceeded("free algebra nodes", _max_nodes);
    }
    std::uint32_t lv = 0;
    for (auto a : args) {
      lv = std::max(lv, _nodes[a].level);
    }
    auto e = static_cast<Elem>(_nodes.size());
    _nodes.push_back({static_cast<std::int32_t>(j), lv + 1, args});
    _index.insert(h, e);
    return e;
  }

  Elem LambdaFree::apply(std::size_t j, std::array<Elem, 4> const& args) {
    if (j >= symbols()) {
      throw InputError("no symbol " + lambda_symbol(j));
    }
    auto const p = args[0];
    Elem       q = p;
    for (auto a : args) {
      if (a != p) {
        q = a;
        break;
      }
    }
    if (q == p) {
      return p;
    }
    unsigned pattern = 0;
    for (auto a : args) {
      if (a != p && a != q) {
        return intern(static_cast<std::uint32_t>(j), args);
      }
      pattern = pattern << 1 | (a == q ? 1 : 0);
    }
    auto c = cell(j, pattern);
    switch (c.kind) {
      case Cell::Kind::p:
        return p;
      case Cell::Kind::q:
        return q;
      case Cell::Kind::node:
        break;
    }
    return intern(c.symbol, args);
  }

  Elem LambdaFree::evaluate(TermPool const& pool, TermId t, Assignment const& env) {
    if (pool.is_variable(t)) {
      auto const& name = pool.name(t);
      for (auto const& [v, e] : env) {
        if (v == name) {
          return e;
        }
      }
      throw InputError("unbound variable " + name);
    }
    auto children = pool.children(t);
    if (children.size() != 4) {
      throw InputError("lambda symbols are quaternary: " + pool.name(t));
    }
    std::array<Elem, 4> args{};
    for (std::size_t k = 0; k < 4; ++k) {
      args[k] = evaluate(pool, children[k], env);
    }
    return apply(symbol_index(pool.name(t)), args);
  }

  std::string LambdaFree::repr(Elem e) const {
    auto const& n = _nodes[e];
    if (n.symbol < 0) {
      return e == x ? "x" : "y";
    }
    std::string out = lambda_symbol(n.symbol) + "(";
    for (std::size_t k = 0; k < 4; ++k) {
      out += (k == 0 ? "" : ",") + repr(n.args[k]);
    }
    return out + ")";
  }

  std::vector<Elem> LambdaFree::up_to_level(std::size_t k) const {
    std::vector<Elem> out;
    for (Elem e = 0; e < _nodes.size(); ++e) {
      if (_nodes[e].level <= k) {
        out.push_back(e);
      }
    }
    return out;
  }

  LambdaFree::BuildResult LambdaFree::build(std::size_t k) {
    BuildResult r;
    try {
      for (auto m = _built + 1; m <= k; ++m) {
        auto const prev = up_to_level(m - 1);
        auto const top  = static_cast<std::uint32_t>(m - 1);
        auto const n    = prev.size();
        std::array<Elem, 4> args{};
        for (std::size_t i0 = 0; i0 < n; ++i0) {
          for (std::size_t i1 = 0; i1 < n; ++i1) {
            for (std::size_t i2 = 0; i2 < n; ++i2) {
              for (std::size_t i3 = 0; i3 < n; ++i3) {
                args = {prev[i0], prev[i1], prev[i2], prev[i3]};
                if (std::none_of(args.begin(), args.end(),
                                 [&](Elem a) { return _nodes[a].level == top; })) {
                  continue;
                }
                for (std::size_t j = 0; j < symbols(); ++j) {
                  apply(j, args);
                }
              }
            }
          }
        }
        _built = m;
      }
    } catch (BudgetExceeded const& e) {
      r.partial     = true;
      r.budget_note = e.what();
    }
    r.complete_level = _built;
    return r;
  }

  std::string LambdaFree::dump() const {
    std::ostringstream out;
    for (Elem e = 0; e < _nodes.size(); ++e) {
      out << e << ' ' << _nodes[e].level << ' ' << repr(e) << '\n';
    }
    return out.str();
  }

  ////////////////////////////////////////////////////////////////////////
  // Validation, E_k and the search
  ////////////////////////////////////////////////////////////////////////

  LambdaValidation validate_lambda_on_free(LambdaFree& f, std::size_t k) {
    if (k == 0) {
      throw InputError("validation needs k >= 1");
    }
    LambdaValidation v;
    auto             built = f.build(k - 1);
    if (built.partial) {
      v.pass        = false;
      v.budget_note = built.budget_note;
      return v;
    }
    auto const domain = f.up_to_level(k - 1);
    v.domain          = domain.size();
    auto p            = build_lambda(f.l());
    for (auto const& id : p.identities) {
      auto vl = p.pool.variables(id.lhs);
      auto vr = p.pool.variables(id.rhs);
      std::vector<std::string> vars;
      std::set_union(vl.begin(), vl.end(), vr.begin(), vr.end(), std::back_inserter(vars));
      std::vector<std::size_t> digit(vars.size(), 0);
      Assignment               env(vars.size());
      while (true) {
        for (std::size_t i = 0; i < vars.size(); ++i) {
          env[i] = {vars[i], domain[digit[i]]};
        }
        ++v.instances;
        auto a = f.evaluate(p.pool, id.lhs, env);
        auto b = f.evaluate(p.pool, id.rhs, env);
        if (a != b) {
          v.pass = false;
          std::ostringstream msg;
          msg << print_identity(p.pool, id) << " fails at";
          for (auto const& [name, e] : env) {
            msg << ' ' << name << '=' << f.repr(e);
          }
          v.failure = msg.str();
          return v;
        }
        std::size_t i = vars.size();
        while (i > 0 && ++digit[i - 1] == domain.size()) {
          digit[--i] = 0;
        }
        if (i == 0) {
          break;
        }
      }
    }
    return v;
  }

  namespace {

    // Entries of the six generators, display order; true means y.
    constexpr std::array<std::array<bool, 4>, 6> generator_pattern = {{
        {false, false, false, false},
        {true, true, true, true},
        {false, true, false, true},
        {true, false, true, false},
        {false, false, true, true},
        {true, true, false, false},
    }};

    SquareSet e_zero(bool provenance) {
      SquareSet e;
      e.keep_derivations(provenance);
      for (std::uint32_t g = 0; g < generator_pattern.size(); ++g) {
        auto const& p = generator_pattern[g];
        auto        v = [&](int k) { return p[k] ? LambdaFree::y : LambdaFree::x; };
        e.insert({v(0), v(1), v(2), v(3)}, {Derivation::Kind::generator, g, {}});
      }
      return e;
    }

    // Every r(alpha, beta, gamma, delta) over `prev`, in lexicographic order
    // of the operand indexes, symbols innermost.
    SquareSet e_next(LambdaFree& f, SquareSet const& prev, EkOptions const& options) {
      SquareSet next;
      next.keep_derivations(options.provenance);
      auto const& s = prev.squares();
      auto const  n = static_cast<std::uint32_t>(s.size());
      auto entry    = [&](std::size_t j, std::array<std::uint32_t, 4> const& i, int c) {
        std::array<Elem, 4> args{};
        for (int k = 0; k < 4; ++k) {
          args[k] = s[i[k]].entries()[c];
        }
        return f.apply(j, args);
      };
      std::array<std::uint32_t, 4> i{};
      for (i[0] = 0; i[0] < n; ++i[0]) {
        for (i[1] = 0; i[1] < n; ++i[1]) {
          for (i[2] = 0; i[2] < n; ++i[2]) {
            for (i[3] = 0; i[3] < n; ++i[3]) {
              for (std::size_t j = 0; j < f.symbols(); ++j) {
                Square sq{entry(j, i, 0), entry(j, i, 1), entry(j, i, 2), entry(j, i, 3)};
                auto   added = options.provenance
                                   ? next.insert(sq,
                                                 {Derivation::Kind::operation,
                                                  static_cast<std::uint32_t>(j),
                                                  {i[0], i[1], i[2], i[3]}})
                                   : next.insert(sq);
                if (added.second && options.budget_squares != 0 &&
                    next.size() > options.budget_squares) {
                  throw BudgetExceeded("E_k squares", options.budget_squares);
                }
              }
            }
          }
        }
      }
      return next;
    }

  }  // namespace

  EkChain ek_chain(LambdaFree& f, std::size_t k, EkOptions const& options) {
    EkChain chain;
    chain.levels.push_back(e_zero(options.provenance));
    try {
      for (std::size_t m = 1; m <= k; ++m) {
        auto next = e_next(f, chain.levels.back(), options);
        chain.nested = chain.nested && chain.levels.back().subset_of(next);
        chain.levels.push_back(std::move(next));
      }
    } catch (BudgetExceeded const& e) {
      chain.partial     = true;
      chain.budget_note = e.what();
    }
    return chain;
  }

  std::string to_string(SearchOutcome o) {
    switch (o) {
      case SearchOutcome::present:
        return "present";
      case SearchOutcome::absent:
        return "absent";
      case SearchOutcome::undecided:
        return "undecided at budget";
    }
    return "?";
  }

  LambdaSearchReport search_sigma_in_lambda(std::size_t                l,
                                            std::size_t                rounds,
                                            std::size_t                depth,
                                            LambdaSearchOptions const& options) {
    check_l(l);
    LambdaSearchReport r;
    r.l      = l;
    r.rounds = rounds;
    r.depth  = depth;
    // l > 2 * 4^N, without overflow
    r.margin_holds = rounds < 31 && l > (std::size_t{2} << (2 * rounds));
    if (!r.margin_holds && !options.override_margin) {
      throw InputError("search needs l > 2*4^N (l = " + std::to_string(l) +
                       ", N = " + std::to_string(rounds) + "); pass the margin override to run anyway");
    }
    r.expected = r.margin_holds ? "absent" : "present";

    auto const  budget = options.budget_squares;
    LambdaFree  f(l, budget == 0 ? 0 : 4 * budget);
    Square const target{LambdaFree::x, LambdaFree::x, LambdaFree::x, LambdaFree::y};
    EkOptions    eo{budget, false};
    ComposeOptions co{options.workers, budget, false};
    try {
      SquareSet e = e_zero(false);
      for (std::size_t k = 0; k <= depth; ++k) {
        if (k > 0) {
          e = e_next(f, e, eo);
        }
        r.sizes.push_back({e.size()});
        if (e.contains(target)) {
          r.found_at = {0, k};
          break;
        }
        auto const* x = &e;
        SquareSet   level;
        for (std::size_t n = 1; n <= rounds; ++n) {
          auto next = v_compose(h_compose(*x, co), co);
          r.sizes.back().push_back(next.size());
          auto const grew = next.size() != x->size();
          level           = std::move(next);
          x               = &level;
          if (level.contains(target)) {
            r.found_at = {n, k};
            break;
          }
          if (!grew) {
            break;
          }
        }
        if (r.found_at) {
          break;
        }
      }
      r.outcome = r.found_at ? SearchOutcome::present : SearchOutcome::absent;
    } catch (BudgetExceeded const& e) {
      r.outcome     = SearchOutcome::undecided;
      r.budget_note = e.what();
    }
    r.free_size = f.size();
    switch (r.outcome) {
      case SearchOutcome::present:
        r.label = "target present";
        break;
      case SearchOutcome::absent:
        r.label = r.margin_holds ? "bounded confirmation" : "absent at the tested prefix";
        break;
      case SearchOutcome::undecided:
        r.label = "undecided at budget";
        break;
    }
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // Reduction check
  ////////////////////////////////////////////////////////////////////////

  Lemma5Report lemma5_reduction_check(std::size_t                     l,
                                      std::size_t                     i,
                                      std::vector<std::size_t> const& roots,
                                      Lemma5Options const&            options) {
    check_l(l);
    if (i > 2 * l + 1) {
      throw InputError("index i out of range");
    }
    if (roots.empty()) {
      throw InputError("no root symbols given");
    }
    for (auto z : roots) {
      if (z > 2 * l + 1) {
        throw InputError("no symbol s" + std::to_string(z));
      }
      if ((z > i ? z - i : i - z) < 2) {
        throw InputError("root s" + std::to_string(z) + " is within distance 1 of s" +
                         std::to_string(i));
      }
    }
    if (options.depth > 2) {
      throw InputError("argument level is limited to 2");
    }

    Lemma5Report       r;
    LambdaFree         f(l);
    std::mt19937_64    rng(options.seed);
    auto               pick = [&](std::size_t n) {
      return static_cast<std::size_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    };
    auto const base = std::min<std::size_t>(options.depth, 1);
    f.build(base);
    auto pool = f.up_to_level(base);
    if (options.depth == 2) {
      // a sample of level-2 elements
      auto const first = pool;
      std::size_t const want = pool.size() + 256;
      while (pool.size() < want) {
        std::array<Elem, 4> a{first[pick(first.size())], first[pick(first.size())],
                              first[pick(first.size())], first[pick(first.size())]};
        auto e = f.apply(pick(f.symbols()), a);
        if (f.level(e) == 2) {
          pool.push_back(e);
        }
      }
    }
    r.pool_size = pool.size();

    struct Term {
      std::size_t         z;
      std::array<Elem, 4> args;
      Elem                value;
    };
    std::vector<Term> t(options.set_size);
    for (std::size_t s = 0; s < options.samples; ++s) {
      ++r.samples;
      auto u = pool[pick(pool.size())];
      auto v = u;
      while (v == u) {
        v = pool[pick(pool.size())];
      }
      auto w = pool[pick(pool.size())];
      for (auto& term : t) {
        term.z = roots[pick(roots.size())];
        if (pick(4) < 3) {
          auto pattern = pick(16);
          for (int k = 0; k < 4; ++k) {
            term.args[k] = (pattern >> (3 - k) & 1) ? v : u;
          }
        } else {
          for (auto& a : term.args) {
            auto c = pick(3);
            a      = c == 0 ? u : c == 1 ? v : w;
          }
        }
        term.value = f.apply(term.z, term.args);
      }
      for (std::size_t a = 0; a < t.size(); ++a) {
        for (std::size_t b = a + 1; b < t.size(); ++b) {
          ++r.pairs;
          if (t[a].value != t[b].value) {
            continue;
          }
          ++r.equal_pairs;
          auto pa = t[a].args[projection_argument(i, t[a].z)];
          auto pb = t[b].args[projection_argument(i, t[b].z)];
          if (pa != pb) {
            r.pass = false;
            auto show = [&](Term const& term) {
              std::string out = lambda_symbol(term.z) + "(";
              for (int k = 0; k < 4; ++k) {
                out += (k == 0 ? "" : ",") + f.repr(term.args[k]);
              }
              return out + ")";
            };
            r.failure = show(t[a]) + " = " + show(t[b]) +
                        " in the free algebra, but their projections differ";
            return r;
          }
        }
      }
    }
    return r;
  }

}  // namespace maltsev
