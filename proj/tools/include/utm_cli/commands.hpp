#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "utm_cli/config.hpp"

namespace utm::cli {

struct RunOptions {
  std::string command;  // validate | solve | eigs | identities | compare
  std::string config;
  std::string out;
  std::optional<GridSpec> grid;
  std::optional<int> count, nmax;
  std::string oracle;
  std::optional<unsigned> seed;
};

struct CommandResult {
  int exit_code = 0;
  std::string primary;                        // printed when no output directory is given
  std::map<std::string, std::string> files;  // file name -> content, written under --out
};

CommandResult run_command(const RunOptions& opt, const ProblemConfig& config);

// Machine-readable description of an exception.
std::string error_json(const std::exception& e);

// Full command line entry point; returns the process exit code.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace utm::cli
