#pragma once

// Signatures, hash-consed terms, identities and substitutions.
//
// Terms live in a TermPool and are referred to by TermId. The pool interns
// every node by (symbol, children), so two TermIds are equal exactly when the
// terms are syntactically equal. A pool is not synchronised; build terms from
// one thread, then share the pool read-only.

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace maltsev {

  struct Symbol {
    std::string   name;
    std::uint32_t arity;

    friend bool operator==(Symbol const&, Symbol const&) = default;
  };

  class Signature {
   public:
    Signature() = default;
    Signature(std::initializer_list<Symbol> symbols);

    // Throws InputError on a duplicate name or zero arity.
    std::size_t add(std::string name, std::uint32_t arity);

    [[nodiscard]] std::size_t size() const noexcept {
      return _symbols.size();
    }
    [[nodiscard]] Symbol const& operator[](std::size_t i) const {
      return _symbols[i];
    }
    [[nodiscard]] std::vector<Symbol> const& symbols() const noexcept {
      return _symbols;
    }
    // Index of the symbol called `name`, or -1.
    [[nodiscard]] std::ptrdiff_t find(std::string_view name) const;
    [[nodiscard]] bool           contains(std::string_view name) const {
      return find(name) >= 0;
    }

    friend bool operator==(Signature const& x, Signature const& y) {
      return x._symbols == y._symbols;
    }

   private:
    std::vector<Symbol>                        _symbols;
    std::unordered_map<std::string, std::size_t> _index;
  };

  struct TermId {
    std::uint32_t value = 0;

    friend auto operator<=>(TermId, TermId) = default;
  };

  class TermPool {
   public:
    TermId variable(std::string_view name);
    // Throws InputError if `symbol` was used before with a different arity.
    TermId node(std::string_view symbol, std::span<TermId const> children);
    TermId node(std::string_view symbol, std::initializer_list<TermId> children) {
      return node(symbol, std::span<TermId const>(children.begin(), children.size()));
    }

    [[nodiscard]] bool is_variable(TermId t) const {
      return _nodes[t.value].symbol < 0;
    }
    // Variable name or root symbol name.
    [[nodiscard]] std::string const& name(TermId t) const;
    [[nodiscard]] std::span<TermId const> children(TermId t) const;
    [[nodiscard]] std::size_t             size() const noexcept {
      return _nodes.size();
    }

    // Sorted, duplicate-free variable names of `t`.
    [[nodiscard]] std::vector<std::string> variables(TermId t) const;
    [[nodiscard]] std::size_t              depth(TermId t) const;

   private:
    struct Node {
      std::int32_t  symbol;  // index into _names; negative for variables
      std::uint32_t name;    // variable name index when symbol < 0
      std::uint32_t first;   // offset into _children
      std::uint32_t count;
    };

    std::uint32_t intern_name(std::string_view s);

    std::vector<Node>                               _nodes;
    std::vector<TermId>                             _children;
    std::vector<std::string>                        _names;
    std::unordered_map<std::string, std::uint32_t>  _name_index;
    std::unordered_map<std::uint32_t, std::uint32_t> _symbol_arity;
    std::unordered_map<std::string, TermId>         _variables;
    struct KeyHash {
      std::size_t operator()(std::vector<std::uint32_t> const& k) const noexcept;
    };
    // key: symbol followed by child ids
    std::unordered_map<std::vector<std::uint32_t>, TermId, KeyHash> _interned;
  };

  struct Identity {
    TermId lhs;
    TermId rhs;

    friend bool operator==(Identity, Identity) = default;
  };

  using Substitution = std::map<std::string, TermId, std::less<>>;

  // Simultaneous replacement of variables. Throws InputError naming the first
  // variable of `t` that `s` does not bind.
  TermId apply_substitution(TermPool& pool, TermId t, Substitution const& s);

  // Copies `t` from one pool into another.
  TermId import_term(TermPool const& from, TermId t, TermPool& to);

  // Every ground instance of `id` obtained by mapping its variables into
  // `points`. Variables are taken in name order; the first variable varies
  // slowest. Returns points.size() ^ (number of variables) identities.
  std::vector<Identity> enumerate_instances(TermPool&              pool,
                                            Identity               id,
                                            std::span<TermId const> points);

  // Grammar: var ::= [a-zA-Z][a-zA-Z0-9_]*
  //          term ::= var | symbol "(" term ("," term)* ")"
  // An identifier followed by "(" must be a symbol of `sig`; any other
  // identifier is a variable. Whitespace is ignored between tokens.
  TermId      parse_term(std::string_view text, Signature const& sig, TermPool& pool);
  std::string print_term(TermPool const& pool, TermId t);

  Identity    parse_identity(std::string_view text, Signature const& sig, TermPool& pool);
  std::string print_identity(TermPool const& pool, Identity id);

  // One identity per non-empty line; `#` starts a comment.
  std::vector<Identity> parse_identities(std::string_view text,
                                         Signature const& sig,
                                         TermPool&        pool);

}  // namespace maltsev
