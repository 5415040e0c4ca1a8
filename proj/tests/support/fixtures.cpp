#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "sprefql/moviegen.hpp"
#include "sprefql/sparql_writer.hpp"
#include "sprefql/sprefql.hpp"
#include "sprefql/turtle.hpp"

namespace sprefql::test {

std::string source_path(std::string_view relative) {
  return std::string(SPREFQL_SOURCE_DIR) + "/" + std::string(relative);
}

std::string read_text(std::string_view relative) {
  std::ifstream in(source_path(relative), std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + source_path(relative));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::shared_ptr<const Dataset> load_dataset(std::string_view relative) {
  return std::make_shared<const Dataset>(load_turtle(read_text(relative)));
}

QueryAst load_query(std::string_view relative) { return parse_sprefql(read_text(relative)); }

std::shared_ptr<const Dataset> table1() {
  static const auto ds = load_dataset("data/table1.ttl");
  return ds;
}

std::shared_ptr<LocalBackend> local(std::shared_ptr<const Dataset> ds) {
  return std::make_shared<LocalBackend>(std::move(ds));
}

std::string local_name(const RdfTerm& t) {
  if (!t.is_iri()) return t.value();
  const auto cut = t.value().find_last_of("#/");
  return cut == std::string::npos ? t.value() : t.value().substr(cut + 1);
}

std::set<std::string> column(const std::vector<Mapping>& rows, std::string_view var) {
  std::set<std::string> out;
  const Variable v{std::string(var)};
  for (const auto& row : rows) {
    if (const RdfTerm* t = row.get(v)) out.insert(local_name(*t));
  }
  return out;
}

std::set<std::string> column(const SolutionSeq& s, std::string_view var) { return column(s.rows, var); }

namespace {

SparqlQuery canonical(const SparqlQuery& q, const std::set<Variable>& keep) {
  VariableMap names;
  const std::string text = serialize_sparql(q);
  static const std::regex var_re(R"([?$]([A-Za-z0-9_]+))");
  for (std::sregex_iterator it(text.begin(), text.end(), var_re), end; it != end; ++it) {
    const Variable v((*it)[1].str());
    if (keep.count(v) || names.count(v)) continue;
    names.emplace(v, Variable("v_" + std::to_string(names.size())));
  }
  SparqlQuery out = q;
  out.where = rename_variables(q.where, names);
  for (auto& o : out.order_by) o.expression = rename_variables(o.expression, names);
  return out;
}

}  // namespace

bool alpha_equivalent(const SparqlQuery& a, const SparqlQuery& b, const std::set<Variable>& keep) {
  return canonical(a, keep) == canonical(b, keep);
}

std::multiset<Mapping> as_bag(const SolutionSeq& s) { return {s.rows.begin(), s.rows.end()}; }

std::shared_ptr<const Dataset> film_dataset(const std::vector<Film>& films) {
  Dataset ds;
  const std::string ns(kMoviesNs);
  ds.prefixes()[""] = ns;
  auto iri = [&](const std::string& local) { return RdfTerm::iri(ns + local); };
  const RdfTerm type = RdfTerm::iri(std::string(vocab::rdf_type));
  for (std::size_t i = 0; i < films.size(); ++i) {
    const RdfTerm f = iri("f" + std::to_string(i));
    ds.add(Triple::make(f, type, iri("film")));
    ds.add(Triple::make(f, iri("genre"), iri("g" + std::to_string(films[i].genre))));
    ds.add(Triple::make(f, iri("runtime"), RdfTerm::integer(films[i].runtime)));
    ds.add(Triple::make(f, iri("year"), RdfTerm::integer(films[i].year)));
    if (films[i].sequel >= 0) {
      ds.add(Triple::make(f, iri("sequel"), iri("f" + std::to_string(films[i].sequel))));
    }
  }
  return std::make_shared<const Dataset>(std::move(ds));
}

std::string film_query(std::string_view body) {
  return "PREFIX : <" + std::string(kMoviesNs) +
         ">\n"
         "SELECT ?f ?g ?r ?y WHERE { ?f a :film . ?f :genre ?g . ?f :runtime ?r . ?f :year ?y . }\n"
         "PREFER (?f1 ?g1 ?r1 ?y1) TO (?f2 ?g2 ?r2 ?y2)\nIF " +
         std::string(body) + "\n";
}

namespace {

int draw(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<Film> random_films(std::mt19937_64& rng, std::size_t max_films) {
  const std::size_t n = static_cast<std::size_t>(draw(rng, 1, static_cast<int>(max_films)));
  const int genres = draw(rng, 1, 4);
  // Narrow ranges so ties are common.
  const int rt_span = draw(rng, 3, 60);
  const int yr_span = draw(rng, 3, 30);
  std::vector<Film> films(n);
  for (std::size_t i = 0; i < n; ++i) {
    Film& f = films[i];
    f.id = static_cast<int>(i);
    f.genre = draw(rng, 0, genres - 1);
    f.runtime = 90 + draw(rng, 0, rt_span);
    f.year = 1990 + draw(rng, 0, yr_span);
  }
  return films;
}

struct Pref {
  std::string text;
  FilmPref holds;
};

Pref atom(std::mt19937_64& rng) {
  switch (draw(rng, 0, 7)) {
    case 0: return {"(?r1 > ?r2)", [](const Film& a, const Film& b) { return a.runtime > b.runtime; }};
    case 1: return {"(?r1 < ?r2)", [](const Film& a, const Film& b) { return a.runtime < b.runtime; }};
    case 2: return {"(?y1 > ?y2)", [](const Film& a, const Film& b) { return a.year > b.year; }};
    case 3: return {"(?y1 < ?y2)", [](const Film& a, const Film& b) { return a.year < b.year; }};
    case 4:
      return {"(?g1 = ?g2 && ?r1 > ?r2)",
              [](const Film& a, const Film& b) { return a.genre == b.genre && a.runtime > b.runtime; }};
    case 5:
      return {"(?r1 - ?r2 > 10)", [](const Film& a, const Film& b) { return a.runtime - b.runtime > 10; }};
    case 6:
      return {"(?y1 >= 2000 && ?y2 < 2000)",
              [](const Film& a, const Film& b) { return a.year >= 2000 && b.year < 2000; }};
    default:
      return {"(?g1 = ?g2 && ?y1 < ?y2)",
              [](const Film& a, const Film& b) { return a.genre == b.genre && a.year < b.year; }};
  }
}

Pref pareto(Pref p, Pref q) {
  return {"(" + p.text + " AND " + q.text + ")", [p = p.holds, q = q.holds](const Film& a, const Film& b) {
            return (p(a, b) && !q(b, a)) || (q(a, b) && !p(b, a));
          }};
}

Pref prior(Pref p, Pref q) {
  return {"(" + p.text + " PRIOR TO " + q.text + ")", [p = p.holds, q = q.holds](const Film& a, const Film& b) {
            return p(a, b) || (!p(b, a) && q(a, b));
          }};
}

Pref nested(std::mt19937_64& rng, int depth) {
  if (depth == 0 || draw(rng, 0, 2) == 0) return atom(rng);
  Pref l = nested(rng, depth - 1);
  Pref r = nested(rng, depth - 1);
  return draw(rng, 0, 1) ? pareto(std::move(l), std::move(r)) : prior(std::move(l), std::move(r));
}

Instance finish(std::string family, std::vector<Film> films, Pref p, bool intrinsic) {
  Instance inst;
  inst.family = std::move(family);
  inst.dataset = film_dataset(films);
  inst.films = std::move(films);
  inst.query = film_query(p.text);
  inst.oracle = std::move(p.holds);
  inst.intrinsic = intrinsic;
  return inst;
}

}  // namespace

Instance random_spo_instance(std::mt19937_64& rng, std::size_t max_films) {
  std::vector<Film> films = random_films(rng, max_films);
  switch (draw(rng, 0, 5)) {
    case 0: return finish("attribute-order", std::move(films), atom(rng), true);
    case 1:
      return finish("dominance",
                    std::move(films),
                    {"(?r1 >= ?r2 && ?y1 >= ?y2 && (?r1 > ?r2 || ?y1 > ?y2))",
                     [](const Film& a, const Film& b) {
                       return a.runtime >= b.runtime && a.year >= b.year &&
                              (a.runtime > b.runtime || a.year > b.year);
                     }},
                    true);
    case 2:
      return finish("lexicographic",
                    std::move(films),
                    {"(?r1 > ?r2) PRIOR TO (?y1 < ?y2)",
                     [](const Film& a, const Film& b) {
                       return a.runtime > b.runtime || (a.runtime == b.runtime && a.year < b.year);
                     }},
                    true);
    case 3:
      return finish("per-genre",
                    std::move(films),
                    {"(?g1 = ?g2 && ?r1 > ?r2)",
                     [](const Film& a, const Film& b) { return a.genre == b.genre && a.runtime > b.runtime; }},
                    true);
    case 4:
      return finish("pareto",
                    std::move(films),
                    {"(?r1 > ?r2) AND (?y1 > ?y2)",
                     [](const Film& a, const Film& b) {
                       return a.runtime >= b.runtime && a.year >= b.year &&
                              (a.runtime > b.runtime || a.year > b.year);
                     }},
                    true);
    default:
      for (;;) {
        Pref p = nested(rng, 3);
        if (oracle_is_spo(films, p.holds)) return finish("nested", std::move(films), std::move(p), true);
      }
  }
}

Instance random_non_spo_instance(std::mt19937_64& rng, std::size_t max_films) {
  std::vector<Film> films = random_films(rng, max_films);
  switch (draw(rng, 0, 3)) {
    case 0:
      return finish("successor",
                    std::move(films),
                    {"(?r1 = ?r2 + 1)", [](const Film& a, const Film& b) { return a.runtime == b.runtime + 1; }},
                    true);
    case 1: {
      const int bound = draw(rng, 1, 15);
      return finish("bounded-difference",
                    std::move(films),
                    {"(?r1 > ?r2 && ?r1 - ?r2 <= " + std::to_string(bound) + ")",
                     [bound](const Film& a, const Film& b) {
                       return a.runtime > b.runtime && a.runtime - b.runtime <= bound;
                     }},
                    true);
    }
    case 2:
      return finish("genre-inequality",
                    std::move(films),
                    {"(?g1 != ?g2)", [](const Film& a, const Film& b) { return a.genre != b.genre; }},
                    true);
    default: {
      // Sequel chains over a random permutation of the films.
      std::vector<std::size_t> order(films.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        if (draw(rng, 0, 3) != 0) films[order[k]].sequel = static_cast<int>(order[k + 1]);
      }
      return finish("sequel",
                    std::move(films),
                    {"EXISTS { ?f1 :sequel ?f2 }", [](const Film& a, const Film& b) { return a.sequel == b.id; }},
                    false);
    }
  }
}

std::set<std::size_t> oracle_winnow(const std::vector<Film>& films, const FilmPref& pref) {
  std::set<std::size_t> keep;
  for (std::size_t b = 0; b < films.size(); ++b) {
    bool dominated = false;
    for (std::size_t a = 0; a < films.size() && !dominated; ++a) dominated = pref(films[a], films[b]);
    if (!dominated) keep.insert(b);
  }
  return keep;
}

bool oracle_is_spo(const std::vector<Film>& films, const FilmPref& pref) {
  const std::size_t n = films.size();
  std::vector<char> m(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) m[a * n + b] = pref(films[a], films[b]);
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (m[a * n + a]) return false;
    for (std::size_t b = 0; b < n; ++b) {
      if (!m[a * n + b]) continue;
      if (m[b * n + a]) return false;
      for (std::size_t c = 0; c < n; ++c) {
        if (m[b * n + c] && !m[a * n + c]) return false;
      }
    }
  }
  return true;
}

std::set<std::size_t> film_indices(const SolutionSeq& s) {
  std::set<std::size_t> out;
  for (const auto& name : column(s, "f")) out.insert(std::stoul(name.substr(1)));
  return out;
}

}  // namespace sprefql::test
