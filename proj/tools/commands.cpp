#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "maltsev/error.hpp"
#include "maltsev/finite_algebra.hpp"
#include "maltsev/lambda.hpp"
#include "maltsev/sdmeet.hpp"
#include "maltsev/sigma.hpp"
#include "maltsev/squares.hpp"

namespace maltsev::cli {

  using json = nlohmann::ordered_json;

  namespace {

    constexpr char const* report_format = "maltsev-report/1";

    class Stopwatch {
     public:
      double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - _start).count();
      }

     private:
      std::chrono::steady_clock::time_point _start = std::chrono::steady_clock::now();
    };

    void write_file(Flags const& flags, std::string const& name, std::string const& text) {
      if (flags.dump_dir.empty()) {
        return;
      }
      std::filesystem::create_directories(flags.dump_dir);
      auto          path = std::filesystem::path(flags.dump_dir) / name;
      std::ofstream out(path);
      if (!out) {
        throw InputError("cannot write " + path.string());
      }
      out << text;
    }

    RunReport start(std::string const& command, Flags const& flags) {
      RunReport r;
      r.stable["format"]     = report_format;
      r.stable["command"]    = command;
      r.stable["convention"] = std::string(square_convention);
      r.run["workers"]       = flags.workers;
      r.run["dump_dir"]      = flags.dump_dir;
      return r;
    }

    json square_json(Square const& s) {
      return to_string(s);
    }

  }  // namespace

  std::string digest(std::string const& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

  std::string RunReport::stable_text() const {
    return stable.dump(2);
  }

  std::string RunReport::render() const {
    json all;
    all["stable"]        = stable;
    all["stable_digest"] = digest(stable_text());
    all["run"]           = run;
    all["timings"]       = timings;
    all["exit_code"]     = exit_code;
    return all.dump(2) + "\n";
  }

  ////////////////////////////////////////////////////////////////////////
  // sdmeet
  ////////////////////////////////////////////////////////////////////////

  RunReport cmd_sdmeet(std::string const& algebra_text,
                       std::string const& input_name,
                       Flags const&       flags) {
    Stopwatch clock;
    auto      r = start("sdmeet", flags);
    r.stable["input"] = {{"name", input_name}, {"digest", digest(algebra_text)}};
    r.stable["flags"] = {{"budget_squares", flags.budget_squares},
                         {"provenance", flags.provenance},
                         {"verify_delta", flags.verify_delta}};

    auto a = parse_algebra(algebra_text);
    json sig = json::array();
    for (auto const& s : a.signature().symbols()) {
      sig.push_back(s.name + "/" + std::to_string(s.arity));
    }
    r.stable["algebra"] = {{"size", a.size()}, {"signature", sig}};

    SdMeetOptions opt;
    opt.budget_squares = flags.budget_squares;
    opt.workers        = flags.workers;
    opt.provenance     = flags.provenance;
    auto        run    = decide_sdmeet(a, opt);
    auto const& v      = run.verdict;
    r.timings["decide_seconds"] = clock.seconds();

    json verdict;
    verdict["verdict"] = to_string(v.verdict);
    verdict["minimal_level"] =
        v.minimal_level ? json(*v.minimal_level) : json(nullptr);
    verdict["rounds"]          = v.rounds;
    verdict["free_size"]       = v.free_size;
    verdict["e_size"]          = v.e_size;
    verdict["level_sizes"]     = v.level_sizes;
    verdict["fixpoint_size"]   = v.fixpoint_size;
    verdict["budget_used"]     = v.budget_used;
    verdict["tolerance_audit"] = v.tolerance_audit;
    if (!v.budget_note.empty()) {
      verdict["budget_note"] = v.budget_note;
    }
    r.stable["result"] = verdict;

    if (v.verdict == Verdict::undecided) {
      r.exit_code = exit_undecided;
    }

    if (!run.levels.empty()) {
      write_file(flags, "E.txt", run.levels[0].dump());
    }
    if (!flags.dump_dir.empty() && v.free_size > 0) {
      std::ostringstream out;
      for (std::size_t i = 0; i < run.free.carrier.size(); ++i) {
        out << i;
        for (auto e : run.free.carrier[i]) {
          out << ' ' << e;
        }
        out << '\n';
      }
      write_file(flags, "free.txt", out.str());
    }

    if (flags.provenance && v.verdict == Verdict::yes) {
      auto w     = extract_sigma_witness(run);
      auto check = check_sigma_model(a, w.n, w.assignment);
      json wj;
      wj["n"]          = w.n;
      wj["leaves"]     = w.assignment.terms.size();
      wj["check"]      = check.pass ? "pass" : "fail";
      wj["identities"] = check.identities;
      wj["instances"]  = check.instances;
      if (!check.pass) {
        wj["failure"] = check.failure;
        r.exit_code   = exit_failure;
      }
      r.stable["witness"] = wj;
      std::ostringstream out;
      for (std::size_t i = 0; i < w.assignment.terms.size(); ++i) {
        out << sigma_symbol(i) << "(v1,v2,v3,v4,v5,v6) = "
            << print_term(w.assignment.pool, w.assignment.terms[i]) << '\n';
      }
      write_file(flags, "witness.txt", out.str());
    }

    if (flags.verify_delta) {
      auto d = verify_delta_equals_rectangles(a, flags.workers);
      json dj;
      dj["congruences"] = d.congruences;
      dj["equal"]       = d.pass;
      if (!d.pass) {
        dj["failing_congruence"] = d.failing->blocks();
        dj["missing_square"]     = square_json(*d.missing);
        // Delta = R is only forced for SD(meet) algebras
        if (v.verdict == Verdict::yes) {
          r.exit_code = exit_failure;
        }
      }
      r.stable["delta"] = dj;
    }
    r.timings["total_seconds"] = clock.seconds();
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // sigma
  ////////////////////////////////////////////////////////////////////////

  RunReport cmd_sigma(std::size_t n, std::string const& out_path, Flags const& flags) {
    Stopwatch clock;
    if (n > max_sigma_emit) {
      throw InputError("sigma packages are emitted for n <= " + std::to_string(max_sigma_emit));
    }
    auto r   = start("sigma", flags);
    auto p   = emit_sigma(n);
    auto txt = print_sigma(p);
    r.stable["n"]              = n;
    r.stable["symbols"]        = p.signature.size();
    r.stable["identities"]     = p.identities.size();
    r.stable["package_digest"] = digest(txt);
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) {
        throw InputError("cannot write " + out_path);
      }
      out << txt;
      r.run["out"] = out_path;
    }
    write_file(flags, "sigma_" + std::to_string(n) + ".txt", txt);
    r.timings["total_seconds"] = clock.seconds();
    return r;
  }

  ////////////////////////////////////////////////////////////////////////
  // lambda
  ////////////////////////////////////////////////////////////////////////

  namespace {

    std::map<std::string, std::string> parse_params(std::vector<std::string> const& params) {
      std::map<std::string, std::string> out;
      for (auto const& p : params) {
        auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw InputError("expected key=value, got '" + p + "'");
        }
        out[p.substr(0, eq)] = p.substr(eq + 1);
      }
      return out;
    }

    std::size_t number(std::string const& key, std::string const& text) {
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(text, &used);
      } catch (std::exception const&) {
        used = 0;
      }
      if (used == 0 || used != text.size()) {
        throw InputError("parameter " + key + " must be a number, got '" + text + "'");
      }
      return static_cast<std::size_t>(v);
    }

    std::size_t param(std::map<std::string, std::string> const& p,
                      std::string const&                        key,
                      std::size_t                               fallback) {
      auto it = p.find(key);
      return it == p.end() ? fallback : number(key, it->second);
    }

    std::vector<std::size_t> list_param(std::map<std::string, std::string> const& p,
                                        std::string const&                        key) {
      auto it = p.find(key);
      if (it == p.end()) {
        throw InputError("missing parameter " + key);
      }
      std::vector<std::size_t> out;
      std::stringstream        in(it->second);
      std::string              item;
      while (std::getline(in, item, ',')) {
        out.push_back(number(key, item));
      }
      return out;
    }

    void only(std::map<std::string, std::string> const& p,
              std::vector<std::string> const&           allowed) {
      for (auto const& [key, value] : p) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
          throw InputError("unknown parameter " + key);
        }
      }
    }

  }  // namespace

  RunReport cmd_lambda(std::size_t                     l,
                       std::size_t                     k,
                       std::string const&              sub,
                       std::vector<std::string> const& params,
                       Flags const&                    flags) {
    Stopwatch clock;
    if (l == 0) {
      throw InputError("l must be at least 1");
    }
    auto p = parse_params(params);
    auto r = start("lambda " + sub, flags);
    r.stable["l"]     = l;
    r.stable["k"]     = k;
    json given        = json::object();
    for (auto const& [key, value] : p) {
      given[key] = value;
    }
    r.stable["params"]         = given;
    r.stable["budget_squares"] = flags.budget_squares;

    if (sub == "build") {
      only(p, {});
      LambdaFree f(l, flags.budget_squares);
      auto       b = f.build(k);
      json       sizes = json::array();
      for (std::size_t m = 0; m <= b.complete_level; ++m) {
        sizes.push_back(f.up_to_level(m).size());
      }
      r.stable["complete_level"] = b.complete_level;
      r.stable["level_sizes"]    = sizes;  // |F^0|, |F^1|, ...
      r.stable["partial"]        = b.partial;
      if (b.partial) {
        r.stable["budget_note"] = b.budget_note;
        r.exit_code             = exit_undecided;
      }
      write_file(flags,
                 "free_l" + std::to_string(l) + "_k" + std::to_string(k) + ".txt",
                 f.dump());
    } else if (sub == "validate") {
      only(p, {});
      if (k == 0) {
        throw InputError("validate needs k >= 1");
      }
      LambdaFree f(l, flags.budget_squares);
      auto       v = validate_lambda_on_free(f, k);
      r.stable["domain"]    = v.domain;
      r.stable["instances"] = v.instances;
      if (!v.budget_note.empty()) {
        r.stable["result"]      = "undecided at budget";
        r.stable["budget_note"] = v.budget_note;
        r.exit_code             = exit_undecided;
      } else {
        r.stable["result"] = v.pass ? "pass" : "fail";
        if (!v.pass) {
          r.stable["failure"] = v.failure;
          r.exit_code         = exit_failure;
        }
      }
    } else if (sub == "projections") {
      // k is the largest domain size tried
      only(p, {});
      if (k == 0) {
        throw InputError("projections needs a domain size k >= 1");
      }
      auto pres = build_lambda(l);
      json rows = json::array();
      bool all  = true;
      for (std::size_t i = 0; i <= 2 * l + 1; ++i) {
        auto restricted = restrict_lambda(pres, i);
        for (std::size_t m = 1; m <= k; ++m) {
          auto a   = projection_model(l, i, m);
          auto rep = check_identities(a, restricted.pool, restricted.identities);
          all      = all && rep.pass;
          rows.push_back({{"i", i},
                          {"m", m},
                          {"identities", restricted.identities.size()},
                          {"instances", rep.instances},
                          {"result", rep.pass ? "pass" : "fail"}});
        }
      }
      r.stable["models"] = rows;
      r.stable["result"] = all ? "pass" : "fail";
      if (!all) {
        r.exit_code = exit_failure;
      }
    } else if (sub == "ek") {
      only(p, {});
      LambdaFree f(l, flags.budget_squares == 0 ? 0 : 4 * flags.budget_squares);
      auto       chain = ek_chain(f, k, {flags.budget_squares, flags.provenance});
      json       sizes = json::array();
      for (auto const& e : chain.levels) {
        sizes.push_back(e.size());
      }
      r.stable["e_sizes"]   = sizes;
      r.stable["nested"]    = chain.nested;
      r.stable["partial"]   = chain.partial;
      r.stable["free_size"] = f.size();
      if (chain.partial) {
        r.stable["budget_note"] = chain.budget_note;
        r.exit_code             = exit_undecided;
      } else if (!chain.nested) {
        r.exit_code = exit_failure;
      }
      for (std::size_t m = 0; m < chain.levels.size(); ++m) {
        write_file(flags, "E" + std::to_string(m) + ".txt", chain.levels[m].dump());
      }
      write_file(flags, "free.txt", f.dump());
    } else if (sub == "search") {
      only(p, {"N"});
      auto                n = param(p, "N", 1);
      LambdaSearchOptions opt;
      opt.budget_squares  = flags.budget_squares;
      opt.workers         = flags.workers;
      opt.override_margin = flags.override_margin;
      auto s              = search_sigma_in_lambda(l, n, k, opt);
      r.stable["N"]               = n;
      r.stable["margin_holds"]    = s.margin_holds;
      r.stable["override_margin"] = flags.override_margin;
      r.stable["expected"]        = s.expected;
      r.stable["outcome"]         = to_string(s.outcome);
      r.stable["label"]           = s.label;
      r.stable["found_at"] =
          s.found_at ? json{{"N", s.found_at->first}, {"k", s.found_at->second}} : json(nullptr);
      r.stable["sizes"]     = s.sizes;  // per k: |E_k|, then one entry per round
      r.stable["free_size"] = s.free_size;
      if (!s.budget_note.empty()) {
        r.stable["budget_note"] = s.budget_note;
      }
      if (s.outcome == SearchOutcome::undecided) {
        r.exit_code = exit_undecided;
      } else if (s.margin_holds && s.outcome == SearchOutcome::present) {
        r.exit_code = exit_failure;
      }
    } else if (sub == "lemma5") {
      only(p, {"i", "Z", "samples", "size"});
      if (p.find("i") == p.end()) {
        throw InputError("missing parameter i");
      }
      Lemma5Options opt;
      opt.samples  = param(p, "samples", 1000);
      opt.set_size = param(p, "size", 6);
      opt.depth    = k;
      opt.seed     = flags.seed;
      auto i       = param(p, "i", 0);
      auto z       = list_param(p, "Z");
      auto rep     = lemma5_reduction_check(l, i, z, opt);
      r.stable["i"]           = i;
      r.stable["Z"]           = z;
      r.stable["seed"]        = flags.seed;
      r.stable["samples"]     = rep.samples;
      r.stable["pairs"]       = rep.pairs;
      r.stable["equal_pairs"] = rep.equal_pairs;
      r.stable["pool_size"]   = rep.pool_size;
      r.stable["result"]      = rep.pass ? "pass" : "fail";
      if (!rep.pass) {
        r.stable["failure"] = rep.failure;
        r.exit_code         = exit_failure;
      }
    } else {
      throw InputError("unknown lambda subcommand '" + sub +
                       "' (build, validate, projections, ek, search, lemma5)");
    }
    r.timings["total_seconds"] = clock.seconds();
    return r;
  }

}  // namespace maltsev::cli
