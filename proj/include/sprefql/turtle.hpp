#pragma once

#include <string>
#include <string_view>

#include "sprefql/dataset.hpp"

namespace sprefql {

/// Loads a Turtle document: @prefix/PREFIX, triples with ';' and ',' lists,
/// the `a` keyword, blank nodes (labelled and `[ ... ]`), and plain, typed,
/// language-tagged, numeric and boolean literals. Blank-node labels are
/// replaced by fresh ones. Throws SyntaxError with line/column.
Dataset load_turtle(std::string_view text);

/// N-Triples form of a single term.
std::string ntriples_term(const RdfTerm& t);

/// Canonical N-Triples dump: one triple per line, lines sorted.
std::string write_ntriples(const Dataset& ds);

}  // namespace sprefql
