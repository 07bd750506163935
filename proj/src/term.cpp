#include "maltsev/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "maltsev/error.hpp"

namespace maltsev {

  ////////////////////////////////////////////////////////////////////////
  // Signature
  ////////////////////////////////////////////////////////////////////////

  Signature::Signature(std::initializer_list<Symbol> symbols) {
    for (auto const& s : symbols) {
      add(s.name, s.arity);
    }
  }

  std::size_t Signature::add(std::string name, std::uint32_t arity) {
    if (arity == 0) {
      throw InputError("symbol " + name + " must have positive arity");
    }
    if (_index.count(name) != 0) {
      throw InputError("duplicate symbol " + name);
    }
    _index.emplace(name, _symbols.size());
    _symbols.push_back({std::move(name), arity});
    return _symbols.size() - 1;
  }

  std::ptrdiff_t Signature::find(std::string_view name) const {
    auto it = _index.find(std::string(name));
    return it == _index.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
  }

  ////////////////////////////////////////////////////////////////////////
  // TermPool
  ////////////////////////////////////////////////////////////////////////

  std::size_t TermPool::KeyHash::operator()(
      std::vector<std::uint32_t> const& k) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto v : k) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

  std::uint32_t TermPool::intern_name(std::string_view s) {
    auto [it, inserted] = _name_index.try_emplace(
        std::string(s), static_cast<std::uint32_t>(_names.size()));
    if (inserted) {
      _names.emplace_back(s);
    }
    return it->second;
  }

  TermId TermPool::variable(std::string_view name) {
    auto it = _variables.find(std::string(name));
    if (it != _variables.end()) {
      return it->second;
    }
    TermId id{static_cast<std::uint32_t>(_nodes.size())};
    _nodes.push_back({-1, intern_name(name), 0, 0});
    _variables.emplace(std::string(name), id);
    return id;
  }

  TermId TermPool::node(std::string_view symbol, std::span<TermId const> children) {
    if (children.empty()) {
      throw InputError("symbol " + std::string(symbol) + " applied to no arguments");
    }
    auto sym = intern_name(symbol);
    auto [ar, fresh] = _symbol_arity.try_emplace(
        sym, static_cast<std::uint32_t>(children.size()));
    if (!fresh && ar->second != children.size()) {
      throw InputError("symbol " + std::string(symbol) + " used with arity "
                       + std::to_string(children.size()) + " and "
                       + std::to_string(ar->second));
    }
    std::vector<std::uint32_t> key;
    key.reserve(children.size() + 1);
    key.push_back(sym);
    for (auto c : children) {
      key.push_back(c.value);
    }
    auto it = _interned.find(key);
    if (it != _interned.end()) {
      return it->second;
    }
    TermId id{static_cast<std::uint32_t>(_nodes.size())};
    _nodes.push_back({static_cast<std::int32_t>(sym),
                      0,
                      static_cast<std::uint32_t>(_children.size()),
                      static_cast<std::uint32_t>(children.size())});
    _children.insert(_children.end(), children.begin(), children.end());
    _interned.emplace(std::move(key), id);
    return id;
  }

  std::string const& TermPool::name(TermId t) const {
    auto const& n = _nodes[t.value];
    return n.symbol < 0 ? _names[n.name] : _names[static_cast<std::size_t>(n.symbol)];
  }

  std::span<TermId const> TermPool::children(TermId t) const {
    auto const& n = _nodes[t.value];
    return {_children.data() + n.first, n.count};
  }

  std::vector<std::string> TermPool::variables(TermId t) const {
    std::vector<std::string> out;
    std::vector<TermId>      stack{t};
    std::vector<bool>        seen(_nodes.size(), false);
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      if (seen[u.value]) {
        continue;
      }
      seen[u.value] = true;
      if (is_variable(u)) {
        out.push_back(name(u));
      } else {
        for (auto c : children(u)) {
          stack.push_back(c);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t TermPool::depth(TermId t) const {
    if (is_variable(t)) {
      return 0;
    }
    std::size_t d = 0;
    for (auto c : children(t)) {
      d = std::max(d, depth(c));
    }
    return d + 1;
  }

  ////////////////////////////////////////////////////////////////////////
  // Substitution and instances
  ////////////////////////////////////////////////////////////////////////

  TermId apply_substitution(TermPool& pool, TermId t, Substitution const& s) {
    std::unordered_map<std::uint32_t, TermId> memo;
    std::function<TermId(TermId)>             go = [&](TermId u) -> TermId {
      if (auto it = memo.find(u.value); it != memo.end()) {
        return it->second;
      }
      TermId result;
      if (pool.is_variable(u)) {
        auto it = s.find(pool.name(u));
        if (it == s.end()) {
          throw InputError("substitution does not bind variable " + pool.name(u));
        }
        result = it->second;
      } else {
        auto                kids = pool.children(u);
        std::vector<TermId> mapped(kids.begin(), kids.end());
        for (auto& k : mapped) {
          k = go(k);
        }
        // copy the name: node() may grow the name table
        std::string sym = pool.name(u);
        result          = pool.node(sym, mapped);
      }
      memo.emplace(u.value, result);
      return result;
    };
    return go(t);
  }

  TermId import_term(TermPool const& from, TermId t, TermPool& to) {
    std::unordered_map<std::uint32_t, TermId> memo;
    std::function<TermId(TermId)>             go = [&](TermId u) -> TermId {
      if (auto it = memo.find(u.value); it != memo.end()) {
        return it->second;
      }
      TermId result;
      if (from.is_variable(u)) {
        result = to.variable(from.name(u));
      } else {
        std::vector<TermId> kids;
        for (auto c : from.children(u)) {
          kids.push_back(go(c));
        }
        result = to.node(from.name(u), kids);
      }
      memo.emplace(u.value, result);
      return result;
    };
    return go(t);
  }

  std::vector<Identity> enumerate_instances(TermPool&               pool,
                                            Identity                id,
                                            std::span<TermId const> points) {
    if (points.empty()) {
      throw InputError("enumerate_instances needs a nonempty point set");
    }
    auto vl = pool.variables(id.lhs);
    auto vr = pool.variables(id.rhs);
    std::vector<std::string> vars;
    std::set_union(
        vl.begin(), vl.end(), vr.begin(), vr.end(), std::back_inserter(vars));

    std::vector<Identity>    out;
    std::vector<std::size_t> digit(vars.size(), 0);
    while (true) {
      Substitution s;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        s[vars[i]] = points[digit[i]];
      }
      out.push_back({apply_substitution(pool, id.lhs, s),
                     apply_substitution(pool, id.rhs, s)});
      // odometer, last variable fastest
      std::size_t i = vars.size();
      while (i > 0) {
        --i;
        if (++digit[i] < points.size()) {
          break;
        }
        digit[i] = 0;
        if (i == 0) {
          return out;
        }
      }
      if (vars.empty()) {
        return out;
      }
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // Parsing and printing
  ////////////////////////////////////////////////////////////////////////

  namespace {

    class TermParser {
     public:
      TermParser(std::string_view text, Signature const& sig, TermPool& pool)
          : _text(text), _sig(sig), _pool(pool) {}

      TermId term() {
        skip_space();
        auto start = _pos;
        auto id    = identifier();
        skip_space();
        if (!at('(')) {
          return _pool.variable(id);
        }
        auto sym = _sig.find(id);
        if (sym < 0) {
          throw ParseError("unknown symbol " + std::string(id), start);
        }
        ++_pos;
        std::vector<TermId> kids;
        while (true) {
          kids.push_back(term());
          skip_space();
          if (at(',')) {
            ++_pos;
            continue;
          }
          if (at(')')) {
            ++_pos;
            break;
          }
          throw ParseError("expected ',' or ')'", _pos);
        }
        auto arity = _sig[static_cast<std::size_t>(sym)].arity;
        if (kids.size() != arity) {
          throw ParseError("symbol " + std::string(id) + " expects "
                               + std::to_string(arity) + " arguments, got "
                               + std::to_string(kids.size()),
                           start);
        }
        return _pool.node(id, kids);
      }

      void skip_space() {
        while (_pos < _text.size()
               && std::isspace(static_cast<unsigned char>(_text[_pos]))) {
          ++_pos;
        }
      }

      [[nodiscard]] bool at(char c) const {
        return _pos < _text.size() && _text[_pos] == c;
      }

      [[nodiscard]] bool done() const {
        return _pos == _text.size();
      }

      [[nodiscard]] std::size_t pos() const {
        return _pos;
      }

      void advance() {
        ++_pos;
      }

     private:
      std::string_view identifier() {
        auto start = _pos;
        if (_pos >= _text.size()
            || !std::isalpha(static_cast<unsigned char>(_text[_pos]))) {
          throw ParseError("expected identifier", _pos);
        }
        while (_pos < _text.size()
               && (std::isalnum(static_cast<unsigned char>(_text[_pos]))
                   || _text[_pos] == '_')) {
          ++_pos;
        }
        return _text.substr(start, _pos - start);
      }

      std::string_view _text;
      Signature const& _sig;
      TermPool&        _pool;
      std::size_t      _pos = 0;
    };

    void print_into(TermPool const& pool, TermId t, std::string& out) {
      out += pool.name(t);
      if (pool.is_variable(t)) {
        return;
      }
      out += '(';
      bool first = true;
      for (auto c : pool.children(t)) {
        if (!first) {
          out += ',';
        }
        first = false;
        print_into(pool, c, out);
      }
      out += ')';
    }

  }  // namespace

  TermId parse_term(std::string_view text, Signature const& sig, TermPool& pool) {
    TermParser p(text, sig, pool);
    auto       t = p.term();
    p.skip_space();
    if (!p.done()) {
      throw ParseError("trailing input", p.pos());
    }
    return t;
  }

  std::string print_term(TermPool const& pool, TermId t) {
    std::string out;
    print_into(pool, t, out);
    return out;
  }

  Identity parse_identity(std::string_view text, Signature const& sig, TermPool& pool) {
    TermParser p(text, sig, pool);
    auto       lhs = p.term();
    p.skip_space();
    if (!p.at('=')) {
      throw ParseError("expected '='", p.pos());
    }
    p.advance();
    auto rhs = p.term();
    p.skip_space();
    if (!p.done()) {
      throw ParseError("trailing input", p.pos());
    }
    return {lhs, rhs};
  }

  std::string print_identity(TermPool const& pool, Identity id) {
    return print_term(pool, id.lhs) + " = " + print_term(pool, id.rhs);
  }

  std::vector<Identity> parse_identities(std::string_view text,
                                         Signature const& sig,
                                         TermPool&        pool) {
    std::vector<Identity> out;
    std::size_t           offset = 0;
    while (offset <= text.size()) {
      auto end = text.find('\n', offset);
      if (end == std::string_view::npos) {
        end = text.size();
      }
      auto line = text.substr(offset, end - offset);
      if (auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
        try {
          out.push_back(parse_identity(line, sig, pool));
        } catch (ParseError const& e) {
          throw ParseError(e.message(), offset + e.position());
        }
      }
      offset = end + 1;
    }
    return out;
  }

}  // namespace maltsev
