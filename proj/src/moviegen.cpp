#include "sprefql/moviegen.hpp"

#include <random>

#include "sprefql/error.hpp"
#include "sprefql/sparql_writer.hpp"

namespace sprefql {

namespace {

RdfTerm movie(std::string_view local) { return RdfTerm::iri(std::string(kMoviesNs) + std::string(local)); }

std::string genre_name(std::size_t g) {
  static constexpr std::string_view kNames[] = {"action", "drama", "comedy", "scifi"};
  if (g < std::size(kNames)) return std::string(kNames[g]);
  return "genre" + std::to_string(g + 1);
}

}  // namespace

Dataset generate_movies(const MovieGenOptions& o) {
  if (o.genres == 0) throw ContractViolation("at least one genre is required");
  if (o.runtime_max < o.runtime_min || o.year_max < o.year_min) {
    throw ContractViolation("empty runtime or year range");
  }
  std::mt19937_64 rng(o.seed);
  auto uniform = [&](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };

  Dataset ds;
  ds.prefixes()[""] = std::string(kMoviesNs);
  const RdfTerm type = RdfTerm::iri(std::string(vocab::rdf_type));
  const RdfTerm film = movie("film");
  const RdfTerm title = movie("title");
  const RdfTerm genre = movie("genre");
  const RdfTerm runtime = movie("runtime");
  const RdfTerm year = movie("year");
  const RdfTerm sequel = movie("sequel");
  const RdfTerm character = movie("character");
  const RdfTerm bond = movie("james_bond");

  const std::size_t chained = std::min(o.films, o.chains * o.chain_length);
  for (std::size_t i = 0; i < o.films; ++i) {
    const RdfTerm m = movie("m" + std::to_string(i + 1));
    const std::size_t chain = o.chain_length == 0 ? 0 : i / o.chain_length;
    const std::size_t part = o.chain_length == 0 ? 0 : i % o.chain_length;
    std::string name;
    if (i < chained && chain == 0) name = "Mad Max Part " + std::to_string(part + 1);
    else if (i < chained) name = "Saga " + std::to_string(chain + 1) + " Part " + std::to_string(part + 1);
    else name = "Film " + std::to_string(i + 1);

    const std::int64_t rt = o.runtime_mode == MovieGenOptions::Runtime::Ascending
                                ? o.runtime_min + static_cast<std::int64_t>(i)
                                : uniform(o.runtime_min, o.runtime_max);
    ds.add(Triple::make(m, type, film));
    ds.add(Triple::make(m, title, RdfTerm::literal(name)));
    ds.add(Triple::make(m, genre, movie(genre_name(static_cast<std::size_t>(rng() % o.genres)))));
    ds.add(Triple::make(m, runtime, RdfTerm::integer(rt)));
    ds.add(Triple::make(m, year, RdfTerm::integer(uniform(o.year_min, o.year_max))));
    if (i < chained && part + 1 < o.chain_length && i + 1 < chained) {
      ds.add(Triple::make(m, sequel, movie("m" + std::to_string(i + 2))));
    }
    if (i < chained && chain == 1) ds.add(Triple::make(m, character, bond));
  }
  return ds;
}

std::string write_turtle(const Dataset& ds) {
  std::string out;
  for (const auto& [name, ns] : ds.prefixes()) out += "@prefix " + name + ": <" + ns + "> .\n";
  if (!ds.prefixes().empty()) out += "\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Triple t = ds.triple(i);
    out += format_term(t.subject, ds.prefixes()) + " " + format_term(t.predicate, ds.prefixes()) + " " +
           format_term(t.object, ds.prefixes()) + " .\n";
  }
  return out;
}

}  // namespace sprefql
