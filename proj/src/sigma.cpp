#include "maltsev/sigma.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "maltsev/error.hpp"

namespace maltsev {

  namespace {

    std::size_t pow4(std::size_t n) {
      return std::size_t{1} << (2 * n);
    }

    // Arguments of t at each corner, as indexes into {x, y}.
    constexpr std::array<std::array<int, 6>, 4> corner_args = {{
        {0, 1, 0, 1, 0, 1},
        {0, 1, 1, 0, 0, 1},
        {0, 1, 0, 1, 1, 0},
        {0, 1, 1, 0, 1, 0},
    }};

    struct Emitter {
      TermPool&              pool;
      std::vector<Identity>& out;
      TermId                 x, y;

      std::array<TermId, 4> leaf(std::size_t w) {
        std::array<TermId, 4> sq{};
        auto                  name = sigma_symbol(w);
        for (std::size_t k = 0; k < 4; ++k) {
          std::vector<TermId> args;
          for (auto v : corner_args[k]) {
            args.push_back(v == 0 ? x : y);
          }
          sq[k] = pool.node(name, args);
        }
        return sq;
      }

      std::array<TermId, 4> h(std::array<TermId, 4> const& l, std::array<TermId, 4> const& r) {
        out.push_back({l[1], r[0]});
        out.push_back({l[3], r[2]});
        return {l[0], r[1], l[2], r[3]};
      }

      std::array<TermId, 4> v(std::array<TermId, 4> const& t, std::array<TermId, 4> const& b) {
        out.push_back({t[2], b[0]});
        out.push_back({t[3], b[1]});
        return {t[0], t[1], b[2], b[3]};
      }

      std::array<TermId, 4> tree(std::size_t m, std::size_t first) {
        if (m == 0) {
          return leaf(first);
        }
        auto q   = pow4(m - 1);
        auto top = h(tree(m - 1, first), tree(m - 1, first + q));
        auto bot = h(tree(m - 1, first + 2 * q), tree(m - 1, first + 3 * q));
        return v(top, bot);
      }
    };

    Signature sigma_signature(std::size_t n) {
      Signature sig;
      for (std::size_t w = 0; w < pow4(n); ++w) {
        sig.add(sigma_symbol(w), 6);
      }
      return sig;
    }

    std::string header(std::size_t n) {
      return "sigma n=" + std::to_string(n) + " symbols=" + std::to_string(pow4(n))
             + " convention=" + std::string(square_convention);
    }

  }  // namespace

  std::string sigma_symbol(std::size_t w) {
    return "t" + std::to_string(w + 1);
  }

  SigmaPackage emit_sigma(std::size_t n) {
    if (n > max_sigma_level) {
      throw InputError("sigma level " + std::to_string(n) + " exceeds "
                       + std::to_string(max_sigma_level));
    }
    SigmaPackage p;
    p.n         = n;
    p.signature = sigma_signature(n);
    std::vector<Identity> ids;
    Emitter e{p.pool, ids, p.pool.variable("x"), p.pool.variable("y")};
    auto    root = e.tree(n, 0);
    ids.push_back({root[0], e.x});
    ids.push_back({root[1], e.x});
    ids.push_back({root[2], e.x});
    ids.push_back({root[3], e.y});
    for (std::size_t w = 0; w < pow4(n); ++w) {
      ids.push_back({p.pool.node(sigma_symbol(w), {e.x, e.x, e.x, e.x, e.x, e.x}), e.x});
    }
    std::map<std::string, Identity> sorted;
    for (auto const& id : ids) {
      sorted.emplace(print_identity(p.pool, id), id);
    }
    for (auto const& [text, id] : sorted) {
      p.identities.push_back(id);
    }
    return p;
  }

  std::string print_sigma(SigmaPackage const& p) {
    std::string out = header(p.n) + "\n";
    for (auto const& id : p.identities) {
      out += print_identity(p.pool, id);
      out += '\n';
    }
    return out;
  }

  SigmaPackage parse_sigma(std::string_view text) {
    auto eol   = text.find('\n');
    auto first = std::string(text.substr(0, eol));
    std::istringstream in(first);
    std::string        word, n_field, s_field, c_field;
    in >> word >> n_field >> s_field >> c_field;
    if (word != "sigma" || n_field.rfind("n=", 0) != 0 || s_field.rfind("symbols=", 0) != 0
        || c_field.rfind("convention=", 0) != 0) {
      throw ParseError("expected 'sigma n=<n> symbols=<count> convention=<id>'", 0);
    }
    std::size_t n = 0;
    try {
      n = std::stoul(n_field.substr(2));
    } catch (std::exception const&) {
      throw ParseError("bad level in header", 0);
    }
    if (n > max_sigma_level) {
      throw ParseError("sigma level too large", 0);
    }
    if (s_field.substr(8) != std::to_string(pow4(n))) {
      throw ParseError("symbol count does not match the level", 0);
    }
    if (c_field.substr(11) != square_convention) {
      throw ParseError("unknown convention " + c_field.substr(11), 0);
    }
    SigmaPackage p;
    p.n         = n;
    p.signature = sigma_signature(n);
    if (eol != std::string_view::npos) {
      try {
        p.identities = parse_identities(text.substr(eol + 1), p.signature, p.pool);
      } catch (ParseError const& e) {
        throw ParseError(e.message(), eol + 1 + e.position());
      }
    }
    return p;
  }

  ////////////////////////////////////////////////////////////////////////
  // Checking an assignment
  ////////////////////////////////////////////////////////////////////////

  SigmaCheck check_sigma_model(FiniteAlgebra const&   a,
                               SigmaPackage const&    p,
                               SigmaAssignment const& s) {
    if (s.terms.size() != pow4(p.n)) {
      throw InputError("assignment has " + std::to_string(s.terms.size())
                       + " terms, expected " + std::to_string(pow4(p.n)));
    }
    TermPool pool = s.pool;
    std::vector<TermId> vars;
    for (int i = 1; i <= 6; ++i) {
      vars.push_back(pool.variable("v" + std::to_string(i)));
    }
    for (auto t : s.terms) {
      for (auto const& v : pool.variables(t)) {
        if (std::find_if(vars.begin(), vars.end(), [&](TermId u) { return pool.name(u) == v; })
            == vars.end()) {
          throw InputError("assigned term uses variable " + v + " outside v1..v6");
        }
      }
    }

    std::map<std::uint32_t, TermId>     memo;
    std::function<TermId(TermId)> expand = [&](TermId u) -> TermId {
      if (auto it = memo.find(u.value); it != memo.end()) {
        return it->second;
      }
      TermId result;
      if (p.pool.is_variable(u)) {
        result = pool.variable(p.pool.name(u));
      } else {
        auto const& name = p.pool.name(u);
        auto        w    = static_cast<std::size_t>(p.signature.find(name));
        auto        kids = p.pool.children(u);
        Substitution sub;
        for (std::size_t i = 0; i < 6; ++i) {
          sub["v" + std::to_string(i + 1)] = expand(kids[i]);
        }
        for (auto const& v : {"x", "y"}) {
          sub.emplace(v, pool.variable(v));
        }
        result = apply_substitution(pool, s.terms[w], sub);
      }
      memo.emplace(u.value, result);
      return result;
    };

    std::vector<Identity> ids;
    for (auto const& id : p.identities) {
      ids.push_back({expand(id.lhs), expand(id.rhs)});
    }
    auto       r = check_identities(a, pool, ids);
    SigmaCheck out;
    out.pass       = r.pass;
    out.identities = ids.size();
    out.instances  = r.instances;
    if (!r.pass) {
      auto const& f = *r.failure;
      out.failure   = print_identity(p.pool, p.identities[f.identity]) + " with";
      for (auto const& [v, e] : f.assignment) {
        out.failure += " " + v + "=" + std::to_string(e);
      }
      out.failure += ": " + std::to_string(f.lhs) + " != " + std::to_string(f.rhs);
    }
    return out;
  }

  SigmaCheck check_sigma_model(FiniteAlgebra const&   a,
                               std::size_t            n,
                               SigmaAssignment const& s) {
    return check_sigma_model(a, emit_sigma(n), s);
  }

  ////////////////////////////////////////////////////////////////////////
  // Witnesses
  ////////////////////////////////////////////////////////////////////////

  SigmaWitness extract_sigma_witness(SdMeetRun const& run) {
    auto const& v = run.verdict;
    if (v.verdict != Verdict::yes || !v.minimal_level) {
      throw InputError("no witness: the run did not find the target square");
    }
    auto const n = *v.minimal_level;
    if (run.levels.size() != n + 1 || run.halves.size() != n + 1
        || !run.levels[0].keeps_derivations()
        || (n > 0 && !run.levels[n].keeps_derivations())) {
      throw InputError("no witness: the run was made without provenance");
    }

    SigmaWitness out;
    out.n          = n;
    auto& pool     = out.assignment.pool;
    auto const& sig = run.free.ambient.signature();

    auto const&                     e = run.levels[0];
    std::map<std::uint32_t, TermId> memo;
    std::function<TermId(std::uint32_t)> term_of = [&](std::uint32_t i) -> TermId {
      if (auto it = memo.find(i); it != memo.end()) {
        return it->second;
      }
      auto const& why = e.derivations()[i];
      TermId      t;
      if (why.kind == Derivation::Kind::generator) {
        if (why.tag >= 6) {
          throw Error("leaf square was added by a closure rule and has no term");
        }
        t = pool.variable("v" + std::to_string(why.tag + 1));
      } else {
        std::vector<TermId> kids;
        for (auto p : why.parents) {
          kids.push_back(term_of(p));
        }
        t = pool.node(sig[why.tag].name, kids);
      }
      memo.emplace(i, t);
      return t;
    };

    auto& nodes = out.tree.nodes;
    std::function<std::uint32_t(std::size_t, std::uint32_t)> build =
        [&](std::size_t m, std::uint32_t idx) -> std::uint32_t {
      WitnessNode node;
      node.square = run.levels[m][idx];
      if (m == 0) {
        node.kind = WitnessNode::Kind::leaf;
        node.leaf = static_cast<std::uint32_t>(out.assignment.terms.size());
        out.assignment.terms.push_back(term_of(idx));
      } else {
        node.kind          = WitnessNode::Kind::vertical;
        auto const& vp     = run.levels[m].derivations()[idx].parents;
        std::array<std::uint32_t, 2> halves{};
        for (int side = 0; side < 2; ++side) {
          auto const& hp = run.halves[m].derivations()[vp[side]].parents;
          WitnessNode h;
          h.kind   = WitnessNode::Kind::horizontal;
          h.square = run.halves[m][vp[side]];
          auto l   = build(m - 1, hp[0]);
          auto r   = build(m - 1, hp[1]);
          h.children = {l, r};
          nodes.push_back(h);
          halves[side] = static_cast<std::uint32_t>(nodes.size() - 1);
        }
        node.children = halves;
      }
      nodes.push_back(node);
      return static_cast<std::uint32_t>(nodes.size() - 1);
    };
    auto target   = run.levels[n].find(target_square(run.free));
    out.tree.root = build(n, target);
    return out;
  }

  SigmaAssignment pad_assignment(SigmaAssignment const& s) {
    SigmaAssignment out;
    out.pool = s.pool;
    auto& pool = out.pool;
    std::vector<TermId> v;
    for (int i = 1; i <= 6; ++i) {
      v.push_back(pool.variable("v" + std::to_string(i)));
    }
    auto sub = [&](TermId t, std::array<int, 6> pick) {
      Substitution m;
      for (int i = 0; i < 6; ++i) {
        m["v" + std::to_string(i + 1)] = v[pick[i]];
      }
      return apply_substitution(pool, t, m);
    };
    for (auto t : s.terms) {
      out.terms.push_back(t);
      out.terms.push_back(sub(t, {0, 1, 1, 0, 4, 5}));  // (b b / d d)
      out.terms.push_back(sub(t, {0, 1, 2, 3, 1, 0}));  // (c d / c d)
      out.terms.push_back(sub(t, {0, 1, 1, 0, 1, 0}));  // (d d / d d)
    }
    return out;
  }

}  // namespace maltsev
