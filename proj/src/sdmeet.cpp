#include "maltsev/sdmeet.hpp"

#include <algorithm>
#include <array>

#include "maltsev/error.hpp"

namespace maltsev {

  FreeOnTwo free_on_two(FiniteAlgebra const& a, std::size_t max_size) {
    if (!a.is_idempotent()) {
      throw InputError("the algebra is not idempotent; only idempotent algebras are supported");
    }
    auto const n = a.size();
    FreeOnTwo  f;
    f.ambient = a;
    TupleSet          gens(n * n);
    std::vector<Elem> px(n * n), py(n * n);
    for (Elem i = 0; i < n; ++i) {
      for (Elem j = 0; j < n; ++j) {
        px[i * n + j] = i;
        py[i * n + j] = j;
      }
    }
    gens.insert(px);
    gens.insert(py);
    SgOptions opt;
    opt.max_size   = max_size;
    opt.provenance = &f.provenance;
    f.carrier      = sg_closure(a, n * n, gens, opt);
    f.x            = f.carrier.find(px);
    f.y            = f.carrier.find(py);
    return f;
  }

  namespace {

    // Entries of the six generators, in display order; true means y.
    constexpr std::array<std::array<bool, 4>, 6> generator_pattern = {{
        {false, false, false, false},
        {true, true, true, true},
        {false, true, false, true},
        {true, false, true, false},
        {false, false, true, true},
        {true, true, false, false},
    }};

    std::vector<Elem> flatten(FreeOnTwo const& f, Square const& s) {
      auto const        w = f.carrier.width();
      std::vector<Elem> out;
      out.reserve(4 * w);
      for (auto e : s.entries()) {
        auto t = f.carrier[e];
        out.insert(out.end(), t.begin(), t.end());
      }
      return out;
    }

    Square unflatten(FreeOnTwo const& f, std::span<Elem const> t) {
      auto const          w = f.carrier.width();
      std::array<Elem, 4> e{};
      for (std::size_t k = 0; k < 4; ++k) {
        e[k] = f.carrier.find(t.subspan(k * w, w));
        if (e[k] == TupleSet::npos) {
          throw Error("square entry outside the free algebra");
        }
      }
      return {e[0], e[1], e[2], e[3]};
    }

    // Subalgebra of F^4 generated by `gens`, with derivations. Generator tags
    // are mapped through `tag_of`.
    SquareSet generate(FreeOnTwo const&             f,
                       std::vector<Square> const&   gens,
                       std::vector<std::uint32_t>   tag_of_input,
                       std::size_t                  max_size) {
      TupleSet                   flat(4 * f.carrier.width());
      std::vector<std::uint32_t> tag;
      for (std::size_t i = 0; i < gens.size(); ++i) {
        if (flat.insert(flatten(f, gens[i])).second) {
          tag.push_back(tag_of_input[i]);
        }
      }
      std::vector<Derivation> log;
      SgOptions               opt;
      opt.max_size   = max_size;
      opt.provenance = &log;
      auto closed    = sg_closure(f.ambient, flat.width(), flat, opt);

      SquareSet out;
      out.keep_derivations(true);
      out.reserve(closed.size());
      for (std::size_t i = 0; i < closed.size(); ++i) {
        auto why = log[i];
        if (why.kind == Derivation::Kind::generator) {
          why.tag = tag[why.tag];
        }
        out.insert(unflatten(f, closed[i]), std::move(why));
      }
      return out;
    }

  }  // namespace

  SquareSet elementary_matrices(FreeOnTwo const& f, std::size_t max_size) {
    std::vector<Square>        gens;
    std::vector<std::uint32_t> tags;
    for (std::uint32_t g = 0; g < generator_pattern.size(); ++g) {
      auto const& p = generator_pattern[g];
      auto        e = [&](int k) { return p[k] ? f.y : f.x; };
      gens.push_back({e(0), e(1), e(2), e(3)});
      tags.push_back(g);
    }
    return generate(f, gens, tags, max_size);
  }

  Square target_square(FreeOnTwo const& f) {
    return {f.x, f.x, f.x, f.y};
  }

  std::string to_string(Verdict v) {
    switch (v) {
      case Verdict::yes:
        return "YES";
      case Verdict::no:
        return "NO";
      case Verdict::undecided:
        return "UNDECIDED_AT_BUDGET";
    }
    return "?";
  }

  SdMeetRun decide_sdmeet(FiniteAlgebra const& a, SdMeetOptions const& options) {
    SdMeetRun run;
    auto&     v      = run.verdict;
    auto const budget = options.budget_squares;
    auto note_size   = [&](std::size_t s) { v.budget_used = std::max(v.budget_used, s); };

    try {
      run.free    = free_on_two(a, budget);
      v.free_size = run.free.carrier.size();
      auto e      = elementary_matrices(run.free, budget);

      // E should be a (2)-tolerance already. If the audit fails, close under
      // the rules and the operations together.
      v.tolerance_audit = is_reflexive_symmetric(e);
      while (!is_reflexive_symmetric(e)) {
        auto                       more = close2(e, reflexive | symmetric);
        std::vector<std::uint32_t> tags(more.size(), 0);
        for (std::size_t i = 0; i < more.size(); ++i) {
          tags[i] = i < e.size() && e.derivations()[i].kind == Derivation::Kind::generator
                        ? e.derivations()[i].tag
                        : static_cast<std::uint32_t>(6 + i);
        }
        e = generate(run.free, more.squares(), tags, budget);
      }
      v.e_size = e.size();
      note_size(e.size());
      v.level_sizes.push_back(e.size());

      auto const target = target_square(run.free);
      run.levels.push_back(std::move(e));
      run.halves.emplace_back();
      if (run.levels[0].contains(target)) {
        v.verdict       = Verdict::yes;
        v.minimal_level = 0;
        v.fixpoint_size = run.levels[0].size();
        return run;
      }

      ComposeOptions co{options.workers, budget, options.provenance};
      while (true) {
        auto& x    = run.levels.back();
        auto  half = h_compose(x, co);
        note_size(half.size());
        auto next = v_compose(half, co);
        note_size(next.size());
        ++v.rounds;
        v.level_sizes.push_back(next.size());
        auto const grew  = next.size() != x.size();
        auto const found = next.contains(target);
        if (options.provenance) {
          run.halves.push_back(std::move(half));
          run.levels.push_back(std::move(next));
        } else if (run.levels.size() == 2) {
          run.levels[1] = std::move(next);
        } else {
          run.levels.push_back(std::move(next));
        }
        v.fixpoint_size = run.levels.back().size();
        if (found) {
          v.verdict       = Verdict::yes;
          v.minimal_level = v.rounds;
          return run;
        }
        if (!grew) {
          v.verdict = Verdict::no;
          return run;
        }
      }
    } catch (BudgetExceeded const& e) {
      v.verdict     = Verdict::undecided;
      v.budget_note = e.what();
      return run;
    }
  }

  DeltaReport verify_delta_equals_rectangles(FiniteAlgebra const& a, unsigned workers) {
    DeltaReport report;
    for (auto const& alpha : con_all(a)) {
      ++report.congruences;
      auto d = delta(a, alpha, alpha, {workers, 0, a.size() <= 4});
      auto r = rectangles(a, alpha, alpha);
      if (!d.same_members(r)) {
        report.pass    = false;
        report.failing = alpha;
        for (auto const& q : r.sorted()) {
          if (!d.contains(q)) {
            report.missing = q;
            break;
          }
        }
        return report;
      }
    }
    return report;
  }

}  // namespace maltsev
