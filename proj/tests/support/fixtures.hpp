#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sprefql/backend.hpp"
#include "sprefql/dataset.hpp"
#include "sprefql/sparql_ast.hpp"
#include "sprefql/sprefql_ast.hpp"

namespace sprefql::test {

/// Absolute path of a file in the source tree.
std::string source_path(std::string_view relative);
std::string read_text(std::string_view relative);

std::shared_ptr<const Dataset> load_dataset(std::string_view relative);
QueryAst load_query(std::string_view relative);

/// The five-film dataset in data/table1.ttl.
std::shared_ptr<const Dataset> table1();
std::shared_ptr<LocalBackend> local(std::shared_ptr<const Dataset> ds);

/// Text after the last '#' or '/' of an IRI; lexical form otherwise.
std::string local_name(const RdfTerm& t);

/// Local names bound to `var` across the rows (unbound rows skipped).
std::set<std::string> column(const SolutionSeq& s, std::string_view var);
std::set<std::string> column(const std::vector<Mapping>& rows, std::string_view var);

/// True iff the queries are equal after renaming, in both, every variable
/// outside `keep` to a canonical name chosen by first appearance.
bool alpha_equivalent(const SparqlQuery& a, const SparqlQuery& b, const std::set<Variable>& keep);

/// Canonical multiset view of a result, for exact comparison.
std::multiset<Mapping> as_bag(const SolutionSeq& s);

// Randomized instances ------------------------------------------------------

struct Film {
  int id = 0;  // position in the film list; the IRI is :f<id>
  int genre = 0;
  int runtime = 0;
  int year = 0;
  int sequel = -1;  // index of the sequel film, -1 if none
};

using FilmPref = std::function<bool(const Film&, const Film&)>;

/// A dataset of films plus a preference over them, given both as SPREFQL
/// text and as a plain C++ predicate on Film values.
struct Instance {
  std::string family;
  std::vector<Film> films;
  std::shared_ptr<const Dataset> dataset;
  std::string query;  // projects ?f ?g ?r ?y
  FilmPref oracle;
  bool intrinsic = true;
};

/// Film i is :f<i>.
std::shared_ptr<const Dataset> film_dataset(const std::vector<Film>& films);

/// Query over film_dataset with the given PREFER body on lists
/// (?f1 ?g1 ?r1 ?y1) / (?f2 ?g2 ?r2 ?y2).
std::string film_query(std::string_view body);

/// Random intrinsic preference that is a strict partial order on the drawn
/// films (checked by brute force; nested compositions are redrawn until they
/// pass).
Instance random_spo_instance(std::mt19937_64& rng, std::size_t max_films);

/// Random preference that is not transitive in general: successor runtime,
/// bounded difference, genre inequality, or sequel links via EXISTS.
Instance random_non_spo_instance(std::mt19937_64& rng, std::size_t max_films);

/// Indices of films no other film is preferred to, by the plain definition.
std::set<std::size_t> oracle_winnow(const std::vector<Film>& films, const FilmPref& pref);

/// Brute-force strict-partial-order test of `pref` on `films`.
bool oracle_is_spo(const std::vector<Film>& films, const FilmPref& pref);

/// Film indices ("f12" -> 12) of the ?f column.
std::set<std::size_t> film_indices(const SolutionSeq& s);

}  // namespace sprefql::test
