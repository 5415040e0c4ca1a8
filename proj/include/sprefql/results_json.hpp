#pragma once

#include <string>
#include <string_view>

#include "sprefql/rdf.hpp"

namespace sprefql {

/// SPARQL 1.1 Query Results JSON. Parsers throw
/// BackendError(MalformedResults) on anything that does not fit the format.
SolutionSeq parse_select_results(std::string_view json);
bool parse_ask_results(std::string_view json);

std::string write_select_results(const SolutionSeq& s);
std::string write_ask_results(bool value);

}  // namespace sprefql
