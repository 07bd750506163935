#include "maltsev/finite_algebra.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "maltsev/error.hpp"

namespace maltsev {

  namespace {

    std::size_t ipow(std::size_t b, std::size_t e) {
      std::size_t r = 1;
      while (e-- > 0) {
        r *= b;
      }
      return r;
    }

    class UnionFind {
     public:
      explicit UnionFind(std::size_t n) : _parent(n) {
        std::iota(_parent.begin(), _parent.end(), 0);
      }

      Elem find(Elem x) {
        while (_parent[x] != x) {
          _parent[x] = _parent[_parent[x]];
          x          = _parent[x];
        }
        return x;
      }

      bool unite(Elem x, Elem y) {
        x = find(x);
        y = find(y);
        if (x == y) {
          return false;
        }
        if (y < x) {
          std::swap(x, y);
        }
        _parent[y] = x;
        return true;
      }

      std::vector<Elem> labels() {
        std::vector<Elem> out(_parent.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
          out[i] = find(static_cast<Elem>(i));
        }
        return out;
      }

     private:
      std::vector<Elem> _parent;
    };

  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // FiniteAlgebra
  ////////////////////////////////////////////////////////////////////////

  FiniteAlgebra::FiniteAlgebra(std::size_t                    size,
                               Signature                      sig,
                               std::vector<std::vector<Elem>> tables,
                               std::vector<std::string>       names)
      : _size(size),
        _sig(std::move(sig)),
        _tables(std::move(tables)),
        _names(std::move(names)) {
    if (_size == 0) {
      throw InputError("an algebra needs a nonempty carrier");
    }
    if (_tables.size() != _sig.size()) {
      throw InputError("expected one table per symbol");
    }
    for (std::size_t i = 0; i < _tables.size(); ++i) {
      if (_tables[i].size() != ipow(_size, _sig[i].arity)) {
        throw InputError("table of " + _sig[i].name + " has wrong length");
      }
      for (auto v : _tables[i]) {
        if (v >= _size) {
          throw InputError("table of " + _sig[i].name + " leaves the carrier");
        }
      }
    }
    if (!_names.empty() && _names.size() != _size) {
      throw InputError("name table must list every element");
    }
  }

  bool FiniteAlgebra::is_idempotent() const {
    for (std::size_t op = 0; op < _tables.size(); ++op) {
      std::vector<Elem> args(_sig[op].arity);
      for (Elem a = 0; a < _size; ++a) {
        std::fill(args.begin(), args.end(), a);
        if (apply(op, args) != a) {
          return false;
        }
      }
    }
    return true;
  }

  FiniteAlgebra parse_algebra(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string        line;
    std::size_t        lineno = 0;
    std::size_t        n      = 0;
    Signature          sig;
    std::vector<std::vector<Elem>> tables;
    std::vector<std::string>       names;

    std::size_t expect_rows = 0;
    std::vector<Elem> expected_args;

    auto fail = [&](std::string const& msg) { throw ParseError(msg, lineno); };

    while (std::getline(in, line)) {
      ++lineno;
      if (auto h = line.find('#'); h != std::string::npos) {
        line.resize(h);
      }
      std::istringstream words(line);
      std::vector<std::string> w;
      for (std::string s; words >> s;) {
        w.push_back(s);
      }
      if (w.empty()) {
        continue;
      }
      auto number = [&](std::string const& s) -> std::size_t {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
          v = std::stoul(s, &pos);
        } catch (std::exception const&) {
          fail("expected a number, got '" + s + "'");
        }
        if (pos != s.size()) {
          fail("expected a number, got '" + s + "'");
        }
        return v;
      };
      if (n == 0) {
        if (w.size() != 2 || w[0] != "carrier") {
          fail("expected 'carrier <n>'");
        }
        n = number(w[1]);
        if (n == 0) {
          fail("carrier must be nonempty");
        }
        continue;
      }
      if (w[0] == "names") {
        if (!tables.empty() || !names.empty()) {
          fail("'names' must directly follow 'carrier'");
        }
        if (w.size() != n + 1) {
          fail("'names' must list " + std::to_string(n) + " names");
        }
        names.assign(w.begin() + 1, w.end());
        continue;
      }
      if (w[0] == "op") {
        if (expect_rows != 0) {
          fail("table of " + sig[sig.size() - 1].name + " is incomplete");
        }
        if (w.size() != 3) {
          fail("expected 'op <name> <arity>'");
        }
        auto arity = number(w[2]);
        try {
          sig.add(w[1], static_cast<std::uint32_t>(arity));
        } catch (InputError const& e) {
          fail(e.what());
        }
        expect_rows = ipow(n, arity);
        tables.emplace_back();
        tables.back().reserve(expect_rows);
        expected_args.assign(arity, 0);
        continue;
      }
      if (sig.size() == 0 || expect_rows == 0) {
        fail("table row outside an 'op' block");
      }
      auto arity = sig[sig.size() - 1].arity;
      if (w.size() != arity + 2 || w[arity] != "->") {
        fail("expected " + std::to_string(arity) + " arguments, '->' and a value");
      }
      for (std::size_t i = 0; i < arity; ++i) {
        if (number(w[i]) != expected_args[i]) {
          fail("table rows must be in lexicographic order");
        }
      }
      auto v = number(w[arity + 1]);
      if (v >= n) {
        fail("value " + std::to_string(v) + " outside the carrier");
      }
      tables.back().push_back(static_cast<Elem>(v));
      --expect_rows;
      for (std::size_t i = arity; i-- > 0;) {
        if (++expected_args[i] < n) {
          break;
        }
        expected_args[i] = 0;
      }
    }
    if (n == 0) {
      throw ParseError("missing 'carrier' line", lineno);
    }
    if (expect_rows != 0) {
      throw ParseError("table of " + sig[sig.size() - 1].name + " is incomplete",
                       lineno);
    }
    return FiniteAlgebra(n, std::move(sig), std::move(tables), std::move(names));
  }

  std::string print_algebra(FiniteAlgebra const& a) {
    std::ostringstream out;
    out << "carrier " << a.size() << '\n';
    if (!a.names().empty()) {
      out << "names";
      for (auto const& s : a.names()) {
        out << ' ' << s;
      }
      out << '\n';
    }
    for (std::size_t op = 0; op < a.signature().size(); ++op) {
      auto const& sym = a.signature()[op];
      out << "op " << sym.name << ' ' << sym.arity << '\n';
      std::vector<Elem> args(sym.arity, 0);
      for (auto v : a.table(op)) {
        for (auto x : args) {
          out << x << ' ';
        }
        out << "-> " << v << '\n';
        for (std::size_t i = sym.arity; i-- > 0;) {
          if (++args[i] < a.size()) {
            break;
          }
          args[i] = 0;
        }
      }
    }
    return out.str();
  }

  ////////////////////////////////////////////////////////////////////////
  // Congruence
  ////////////////////////////////////////////////////////////////////////

  Congruence::Congruence(std::vector<Elem> labels) : _block(std::move(labels)) {
    std::unordered_map<Elem, Elem> renumber;
    for (auto& b : _block) {
      auto [it, fresh] = renumber.try_emplace(b, static_cast<Elem>(renumber.size()));
      b                = it->second;
    }
    _num_blocks = renumber.size();
  }

  Congruence Congruence::identity(std::size_t n) {
    std::vector<Elem> b(n);
    std::iota(b.begin(), b.end(), 0);
    return Congruence(std::move(b));
  }

  Congruence Congruence::full(std::size_t n) {
    return Congruence(std::vector<Elem>(n, 0));
  }

  std::vector<std::pair<Elem, Elem>> Congruence::pairs() const {
    std::vector<std::pair<Elem, Elem>> out;
    for (Elem a = 0; a < size(); ++a) {
      for (Elem b = 0; b < size(); ++b) {
        if (related(a, b)) {
          out.emplace_back(a, b);
        }
      }
    }
    return out;
  }

  Congruence Congruence::join(Congruence const& other) const {
    UnionFind uf(size());
    std::vector<Elem> first_a(_num_blocks, ~Elem{0});
    std::vector<Elem> first_b(other._num_blocks, ~Elem{0});
    auto link = [&](Elem& first, Elem x) {
      if (first == ~Elem{0}) {
        first = x;
      } else {
        uf.unite(first, x);
      }
    };
    for (Elem x = 0; x < size(); ++x) {
      link(first_a[_block[x]], x);
      link(first_b[other._block[x]], x);
    }
    return Congruence(uf.labels());
  }

  Congruence Congruence::meet(Congruence const& other) const {
    std::map<std::pair<Elem, Elem>, Elem> label;
    std::vector<Elem>                     b(size());
    for (Elem x = 0; x < size(); ++x) {
      auto key = std::make_pair(_block[x], other._block[x]);
      b[x] = label.try_emplace(key, static_cast<Elem>(label.size())).first->second;
    }
    return Congruence(std::move(b));
  }

  bool Congruence::refines(Congruence const& other) const {
    for (Elem x = 0; x < size(); ++x) {
      for (Elem y = x + 1; y < size(); ++y) {
        if (related(x, y) && !other.related(x, y)) {
          return false;
        }
      }
    }
    return true;
  }

  Congruence cg(FiniteAlgebra const& a, std::span<std::pair<Elem, Elem> const> pairs) {
    auto const n = a.size();
    UnionFind  uf(n);
    std::deque<std::pair<Elem, Elem>> work;
    for (auto [x, y] : pairs) {
      if (x >= n || y >= n) {
        throw InputError("pair outside the carrier");
      }
      if (uf.unite(x, y)) {
        work.emplace_back(x, y);
      }
    }
    std::vector<Elem> args;
    while (!work.empty()) {
      auto [x, y] = work.front();
      work.pop_front();
      for (std::size_t op = 0; op < a.signature().size(); ++op) {
        auto const k = a.signature()[op].arity;
        args.assign(k, 0);
        auto const others = ipow(n, k - 1);
        for (std::size_t pos = 0; pos < k; ++pos) {
          for (std::size_t code = 0; code < others; ++code) {
            auto c = code;
            for (std::size_t j = k; j-- > 0;) {
              if (j == pos) {
                continue;
              }
              args[j] = static_cast<Elem>(c % n);
              c /= n;
            }
            args[pos] = x;
            auto u    = a.apply(op, args);
            args[pos] = y;
            auto v    = a.apply(op, args);
            if (uf.unite(u, v)) {
              work.emplace_back(u, v);
            }
          }
        }
      }
    }
    return Congruence(uf.labels());
  }

  bool is_compatible(FiniteAlgebra const& a, Congruence const& theta) {
    auto const n = a.size();
    for (std::size_t op = 0; op < a.signature().size(); ++op) {
      auto const k = a.signature()[op].arity;
      // compare f(args) with f(args') where args' replaces each argument by
      // its block representative
      std::vector<Elem> rep(n);
      for (Elem x = 0; x < n; ++x) {
        rep[x] = x;
        for (Elem y = 0; y < x; ++y) {
          if (theta.related(x, y)) {
            rep[x] = y;
            break;
          }
        }
      }
      std::vector<Elem> args(k), reps(k);
      for (std::size_t code = 0; code < ipow(n, k); ++code) {
        auto c = code;
        for (std::size_t j = k; j-- > 0;) {
          args[j] = static_cast<Elem>(c % n);
          reps[j] = rep[args[j]];
          c /= n;
        }
        if (!theta.related(a.apply(op, args), a.apply(op, reps))) {
          return false;
        }
      }
    }
    return true;
  }

  std::vector<Congruence> con_all(FiniteAlgebra const& a, std::size_t bound) {
    if (a.size() > bound) {
      throw InputError("con_all refuses carriers larger than "
                       + std::to_string(bound) + " (got "
                       + std::to_string(a.size()) + ")");
    }
    std::set<Congruence>    seen;
    std::vector<Congruence> members;
    auto add = [&](Congruence c) {
      if (seen.insert(c).second) {
        members.push_back(std::move(c));
      }
    };
    add(Congruence::identity(a.size()));
    for (Elem x = 0; x < a.size(); ++x) {
      for (Elem y = x + 1; y < a.size(); ++y) {
        std::pair<Elem, Elem> p{x, y};
        add(cg(a, {&p, 1}));
      }
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        add(members[i].join(members[j]));
      }
    }
    std::sort(members.begin(), members.end(), [](auto const& x, auto const& y) {
      if (x.num_blocks() != y.num_blocks()) {
        return x.num_blocks() > y.num_blocks();
      }
      return x < y;
    });
    return members;
  }

  ////////////////////////////////////////////////////////////////////////
  // TupleSet and subpowers
  ////////////////////////////////////////////////////////////////////////

  std::pair<std::uint32_t, bool> TupleSet::insert(std::span<Elem const> t) {
    if (t.size() != _width) {
      throw InputError("tuple of length " + std::to_string(t.size())
                       + " in a set of width " + std::to_string(_width));
    }
    if (_width == 0) {
      if (_zero_width_count == 0) {
        _zero_width_count = 1;
        return {0, true};
      }
      return {0, false};
    }
    auto h  = detail::hash_span(t);
    auto id = _index.find(h, [&](std::uint32_t i) {
      return std::equal(t.begin(), t.end(), _data.begin() + i * _width);
    });
    if (id != npos) {
      return {id, false};
    }
    auto fresh = static_cast<std::uint32_t>(size());
    _data.insert(_data.end(), t.begin(), t.end());
    _index.insert(h, fresh);
    return {fresh, true};
  }

  std::uint32_t TupleSet::find(std::span<Elem const> t) const {
    if (t.size() != _width) {
      return npos;
    }
    if (_width == 0) {
      return _zero_width_count == 0 ? npos : 0;
    }
    return _index.find(detail::hash_span(t), [&](std::uint32_t i) {
      return std::equal(t.begin(), t.end(), _data.begin() + i * _width);
    });
  }

  std::vector<std::vector<Elem>> TupleSet::sorted() const {
    std::vector<std::vector<Elem>> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
      auto t = (*this)[i];
      out.emplace_back(t.begin(), t.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  TupleSet sg_closure(FiniteAlgebra const& a,
                      std::size_t          width,
                      TupleSet const&      gens,
                      SgOptions const&     options) {
    if (gens.width() != width) {
      throw InputError("generators have length " + std::to_string(gens.width())
                       + ", expected " + std::to_string(width));
    }
    if (gens.size() == 0) {
      throw InputError("sg_closure needs at least one generator");
    }
    TupleSet out(width);
    auto*    log = options.provenance;
    if (log != nullptr) {
      log->clear();
    }
    auto check_budget = [&] {
      if (options.max_size != 0 && out.size() > options.max_size) {
        throw BudgetExceeded("subpower generation", options.max_size);
      }
    };
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (out.insert(gens[i]).second && log != nullptr) {
        log->push_back({Derivation::Kind::generator, static_cast<std::uint32_t>(i), {}});
      }
    }
    check_budget();

    auto const&       sig = a.signature();
    std::vector<Elem> result(width);
    std::vector<Elem> args;
    std::vector<std::uint32_t> idx;

    std::size_t lo = 0;
    std::size_t hi = out.size();
    while (lo < hi) {
      for (std::size_t op = 0; op < sig.size(); ++op) {
        auto const k = sig[op].arity;
        idx.assign(k, 0);
        args.assign(k, 0);
        // Each index tuple over [0, hi) with at least one index in [lo, hi) is
        // visited once: `first` is the position of the first such index.
        for (std::size_t first = 0; first < k; ++first) {
          if (first > 0 && lo == 0) {
            break;
          }
          std::vector<std::uint32_t> low(k), high(k);
          for (std::size_t j = 0; j < k; ++j) {
            low[j]  = j == first ? static_cast<std::uint32_t>(lo) : 0;
            high[j] = j < first ? static_cast<std::uint32_t>(lo)
                                : static_cast<std::uint32_t>(hi);
          }
          idx = low;
          while (true) {
            for (std::size_t c = 0; c < width; ++c) {
              for (std::size_t j = 0; j < k; ++j) {
                args[j] = out[idx[j]][c];
              }
              result[c] = a.apply(op, args);
            }
            if (out.insert(result).second) {
              if (log != nullptr) {
                log->push_back({Derivation::Kind::operation,
                                static_cast<std::uint32_t>(op),
                                std::vector<std::uint32_t>(idx.begin(), idx.end())});
              }
              check_budget();
            }
            std::size_t j = k;
            while (j > 0) {
              --j;
              if (++idx[j] < high[j]) {
                break;
              }
              idx[j] = low[j];
              if (j == 0) {
                j = k + 1;
                break;
              }
            }
            if (j == k + 1) {
              break;
            }
          }
        }
      }
      lo = hi;
      hi = out.size();
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Identities
  ////////////////////////////////////////////////////////////////////////

  namespace {

    class Evaluator {
     public:
      Evaluator(FiniteAlgebra const& a, TermPool const& pool)
          : _a(a), _pool(pool), _memo(pool.size(), 0), _stamp(pool.size(), 0) {}

      void bind(Assignment const& env) {
        ++_generation;
        _env.clear();
        for (auto const& [name, v] : env) {
          if (v >= _a.size()) {
            throw InputError("value of " + name + " outside the carrier");
          }
          _env[name] = v;
        }
      }

      Elem eval(TermId t) {
        if (_stamp[t.value] == _generation) {
          return _memo[t.value];
        }
        Elem v;
        if (_pool.is_variable(t)) {
          auto it = _env.find(_pool.name(t));
          if (it == _env.end()) {
            throw InputError("variable " + _pool.name(t) + " is unbound");
          }
          v = it->second;
        } else {
          auto op   = symbol(t);
          auto kids = _pool.children(t);
          std::vector<Elem> args(kids.size());
          for (std::size_t i = 0; i < kids.size(); ++i) {
            args[i] = eval(kids[i]);
          }
          v = _a.apply(op, args);
        }
        _memo[t.value]  = v;
        _stamp[t.value] = _generation;
        return v;
      }

     private:
      std::size_t symbol(TermId t) {
        auto const& name = _pool.name(t);
        auto        it   = _ops.find(name);
        if (it != _ops.end()) {
          return it->second;
        }
        auto i = _a.signature().find(name);
        if (i < 0) {
          throw InputError("symbol " + name + " is not in the algebra's signature");
        }
        if (_a.signature()[static_cast<std::size_t>(i)].arity
            != _pool.children(t).size()) {
          throw InputError("symbol " + name + " used with the wrong arity");
        }
        _ops.emplace(name, static_cast<std::size_t>(i));
        return static_cast<std::size_t>(i);
      }

      FiniteAlgebra const&                         _a;
      TermPool const&                              _pool;
      std::vector<Elem>                            _memo;
      std::vector<std::uint64_t>                   _stamp;
      std::uint64_t                                _generation = 0;
      std::map<std::string, Elem, std::less<>>     _env;
      std::unordered_map<std::string, std::size_t> _ops;
    };

  }  // namespace

  Elem evaluate(FiniteAlgebra const& a,
                TermPool const&      pool,
                TermId               t,
                Assignment const&    env) {
    Evaluator ev(a, pool);
    ev.bind(env);
    return ev.eval(t);
  }

  IdentityReport check_identities(FiniteAlgebra const&      a,
                                  TermPool const&           pool,
                                  std::span<Identity const> ids) {
    IdentityReport report;
    Evaluator      ev(a, pool);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto vl = pool.variables(ids[i].lhs);
      auto vr = pool.variables(ids[i].rhs);
      std::vector<std::string> vars;
      std::set_union(vl.begin(), vl.end(), vr.begin(), vr.end(),
                     std::back_inserter(vars));
      Assignment env;
      for (auto const& v : vars) {
        env.emplace_back(v, 0);
      }
      while (true) {
        ev.bind(env);
        auto l = ev.eval(ids[i].lhs);
        auto r = ev.eval(ids[i].rhs);
        ++report.instances;
        if (l != r) {
          report.pass    = false;
          report.failure = IdentityFailure{i, env, l, r};
          return report;
        }
        std::size_t j = env.size();
        bool        done = true;
        while (j > 0) {
          --j;
          if (++env[j].second < a.size()) {
            done = false;
            break;
          }
          env[j].second = 0;
        }
        if (done) {
          break;
        }
      }
    }
    return report;
  }

}  // namespace maltsev
