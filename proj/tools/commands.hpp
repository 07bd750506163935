#pragma once

// The commands behind the maltsev executable, returning reports instead of
// printing them so the acceptance driver can run them in-process.
//
// A report has three sections. "stable" depends only on the inputs and the
// flags that change results; it is byte-identical across runs and worker
// counts. "run" records the remaining flags, "timings" wall-clock times.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace maltsev::cli {

  enum ExitCode : int {
    exit_ok        = 0,
    exit_failure   = 1,
    exit_undecided = 2,
    exit_input     = 3,
  };

  struct Flags {
    std::size_t   budget_squares  = 5'000'000;
    bool          provenance      = false;
    unsigned      workers         = 1;
    std::string   dump_dir;
    bool          override_margin = false;
    std::uint64_t seed            = 1;
    bool          verify_delta    = false;
  };

  struct RunReport {
    nlohmann::ordered_json stable;
    nlohmann::ordered_json run;
    nlohmann::ordered_json timings;
    int                    exit_code = exit_ok;

    [[nodiscard]] std::string stable_text() const;
    // The whole report, stable section first, with the stable digest.
    [[nodiscard]] std::string render() const;
  };

  // 64-bit FNV-1a, as 16 hex digits.
  std::string digest(std::string const& bytes);

  // Input and parse errors propagate as maltsev::InputError / ParseError.
  RunReport cmd_sdmeet(std::string const& algebra_text,
                       std::string const& input_name,
                       Flags const&       flags);
  RunReport cmd_sigma(std::size_t n, std::string const& out_path, Flags const& flags);
  // params are key=value strings: N, i, Z (comma separated), samples.
  RunReport cmd_lambda(std::size_t                     l,
                       std::size_t                     k,
                       std::string const&              sub,
                       std::vector<std::string> const& params,
                       Flags const&                    flags);

  inline constexpr std::size_t max_sigma_emit = 4;

}  // namespace maltsev::cli
