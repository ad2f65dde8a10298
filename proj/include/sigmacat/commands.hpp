#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sigmacat/fixture.hpp"

namespace sigmacat::io {

  inline constexpr int EXIT_POSITIVE = 0;
  inline constexpr int EXIT_NEGATIVE = 1;
  inline constexpr int EXIT_INPUT    = 2;

  inline constexpr char const* CORPUS_ENV = "SIGMACAT_CORPUS";

  inline constexpr char const* COMPACT_SCOPE
      = "Bicompactness quantifies over all small bifiltered indices; these "
        "verdicts are per-diagram evidence only.";

  struct CommandResult {
    int         code = EXIT_POSITIVE;
    Json        report;
    std::string human;
    // Help or usage text, printed as is.
    std::string text;
  };

  // Arguments exclude the program name.
  CommandResult execute(std::vector<std::string> const& args);

  // Prints the report in the requested format and returns the exit status.
  int run_command(std::vector<std::string> const& args,
                  std::ostream&                   out,
                  std::ostream&                   err);

  // Reconstructs a verdict from verdict_json output.
  Verdict verdict_from_json(Json const& j);

}  // namespace sigmacat::io
