#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sprefql/rdf.hpp"
#include "sprefql/dataset.hpp"

namespace sprefql {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,  // bad arguments or unreadable files
  kExitParse = 2,
  kExitIllFormed = 3,
  kExitUnsupported = 4,
  kExitBackend = 5,
};

/// Environment variable naming the default SPARQL endpoint.
inline constexpr const char* kEndpointEnv = "SPREFQL_ENDPOINT";

/// Runs the tool with `args` (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

enum class OutputFormat { Table, Csv, Json };

void write_solutions(std::ostream& out, const SolutionSeq& s, OutputFormat format, const PrefixMap& prefixes);

}  // namespace sprefql
