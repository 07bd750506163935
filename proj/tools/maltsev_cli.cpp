#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "maltsev/error.hpp"

namespace {

  std::string read_file(std::string const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw maltsev::InputError("cannot read " + path);
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

}  // namespace

int main(int argc, char** argv) {
  using namespace maltsev::cli;

  CLI::App app{"Two-dimensional congruence tools: SD(meet) decision, Sigma_n packages, "
               "the Lambda_l family"};
  app.require_subcommand(1);
  // global flags may follow the subcommand
  app.fallthrough();

  Flags flags;
  app.add_option("--budget-squares", flags.budget_squares,
                 "Largest square set (and, for lambda, free-algebra node count) to build; "
                 "0 means unlimited")
      ->capture_default_str();
  app.add_flag("--provenance", flags.provenance,
               "Keep derivations; sdmeet then extracts and checks a Sigma_n witness");
  app.add_option("--workers", flags.workers, "Worker threads for compositions")
      ->capture_default_str()
      ->check(CLI::Range(1u, 256u));
  app.add_option("--dump-dir", flags.dump_dir, "Directory for dumps of computed sets");
  app.add_flag("--override-margin", flags.override_margin,
               "Let lambda search run with l <= 2*4^N (expected outcome becomes 'present')");
  app.add_option("--seed", flags.seed, "Seed for randomized checks")->capture_default_str();

  auto*       sdmeet = app.add_subcommand("sdmeet", "Decide SD(meet) for a finite idempotent algebra");
  std::string algebra_path;
  sdmeet->add_option("algebra", algebra_path, "Algebra file")->required();
  sdmeet->add_flag("--verify-delta", flags.verify_delta,
                   "Also compare Delta(a,a) with R(a,a) for every congruence");

  auto*       sigma = app.add_subcommand("sigma", "Emit the Sigma_n identity package");
  std::size_t sigma_n = 0;
  std::string sigma_out;
  sigma->add_option("n", sigma_n, "Level, at most 4")->required();
  sigma->add_option("-o,--out", sigma_out, "Write the package here");

  auto* lambda = app.add_subcommand(
      "lambda",
      "Lambda_l experiments: lambda L K {build|validate|projections|ek|search|lemma5} [key=value...]");
  std::size_t              lambda_l = 0, lambda_k = 0;
  std::string              lambda_sub;
  std::vector<std::string> lambda_params;
  lambda->add_option("l", lambda_l, "Family index l >= 1")->required();
  lambda->add_option("k", lambda_k,
                     "Depth k (build, validate, ek, search, lemma5) or largest domain size "
                     "(projections)")
      ->required();
  lambda->add_option("command", lambda_sub, "build, validate, projections, ek, search or lemma5")
      ->required();
  lambda->add_option("params", lambda_params, "search: N=<rounds>; lemma5: i=<i> Z=<z,..> "
                                              "samples=<n> size=<terms per set>");

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const& e) {
    return app.exit(e);
  } catch (CLI::Success const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return exit_input;
  }

  try {
    RunReport report;
    if (*sdmeet) {
      report = cmd_sdmeet(read_file(algebra_path),
                          std::filesystem::path(algebra_path).filename().string(), flags);
    } else if (*sigma) {
      report = cmd_sigma(sigma_n, sigma_out, flags);
    } else {
      report = cmd_lambda(lambda_l, lambda_k, lambda_sub, lambda_params, flags);
    }
    std::cout << report.render();
    return report.exit_code;
  } catch (maltsev::ParseError const& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return exit_input;
  } catch (maltsev::InputError const& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return exit_input;
  } catch (std::filesystem::filesystem_error const& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return exit_input;
  }
}
