#include <doctest.h>

#include <future>
#include <random>

#include "fixtures.hpp"
#include "stub_server.hpp"
#include "sprefql/backend.hpp"
#include "sprefql/error.hpp"
#include "sprefql/executor.hpp"
#include "sprefql/results_json.hpp"
#include "sprefql/sparql_parser.hpp"
#include "sprefql/sprefql.hpp"

using namespace sprefql;
using namespace std::chrono_literals;

namespace {

BackendError::Kind failure_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const BackendError& e) {
    return e.kind();
  }
  FAIL("expected a backend error");
  return BackendError::Kind::Network;
}

std::shared_ptr<RemoteBackend> remote(const test::StubServer& s, std::chrono::milliseconds timeout = 5000ms) {
  RemoteOptions o;
  o.endpoint = s.endpoint();
  o.timeout = timeout;
  return std::make_shared<RemoteBackend>(o);
}

const char* kFilms = "PREFIX : <http://example.org/movies#>\nSELECT ?s ?t ?r WHERE { ?s :title ?t ; :runtime ?r }";

}  // namespace

TEST_CASE("results JSON round trip keeps every term kind and unbound cells") {
  SolutionSeq s;
  s.variables = {Variable("a"), Variable("b")};
  s.rows.push_back(Mapping{{Variable("a"), RdfTerm::iri("http://x/a")}, {Variable("b"), RdfTerm::blank("n1")}});
  s.rows.push_back(Mapping{{Variable("a"), RdfTerm::lang_literal("chat", "fr")}});
  s.rows.push_back(Mapping{{Variable("a"), RdfTerm::integer(-3)}, {Variable("b"), RdfTerm::literal("q\"uote")}});
  s.rows.push_back(Mapping{{Variable("b"), RdfTerm::typed_literal("x", "http://x/dt")}});
  const SolutionSeq back = parse_select_results(write_select_results(s));
  CHECK(back.variables == s.variables);
  CHECK(back.rows == s.rows);
  CHECK(parse_ask_results(write_ask_results(true)));
  CHECK_FALSE(parse_ask_results(write_ask_results(false)));
}

TEST_CASE("results JSON accepts the standard shapes") {
  const auto s = parse_select_results(R"({"head":{"vars":["x","y"]},"results":{"bindings":[
      {"x":{"type":"uri","value":"http://x/1"},"y":{"type":"typed-literal","value":"5",
       "datatype":"http://www.w3.org/2001/XMLSchema#integer"}},
      {"x":{"type":"literal","value":"hi","xml:lang":"EN"}},
      {"y":{"type":"bnode","value":"b0"}}]}})");
  REQUIRE(s.size() == 3);
  CHECK(*s.rows[0].get(Variable("y")) == RdfTerm::integer(5));
  CHECK(*s.rows[1].get(Variable("x")) == RdfTerm::lang_literal("hi", "en"));
  CHECK(s.rows[2].get(Variable("y"))->is_blank());
  CHECK(parse_ask_results(R"({"head":{},"boolean":true})"));
}

TEST_CASE("malformed results are reported as such") {
  for (const char* bad : {"", "{", "[]", R"({"head":{"vars":["x"]}})", R"({"head":{"vars":["x"]},"results":{}})",
                          R"({"head":{"vars":["x"]},"results":{"bindings":[{"x":{"type":"alien","value":"v"}}]}})",
                          R"({"head":{"vars":["x"]},"results":{"bindings":[{"x":{"type":"uri"}}]}})",
                          R"({"head":{"vars":[1]},"results":{"bindings":[]}})"}) {
    CAPTURE(bad);
    CHECK(failure_kind([&] { parse_select_results(bad); }) == BackendError::Kind::MalformedResults);
  }
  CHECK(failure_kind([] { parse_ask_results(R"({"head":{},"boolean":"yes"})"); }) ==
        BackendError::Kind::MalformedResults);
}

TEST_CASE("local backend evaluates SELECT and ASK") {
  const auto b = test::local(test::table1());
  CHECK(b->select(parse_sparql(kFilms)).size() == 5);
  CHECK(b->ask(parse_sparql("PREFIX : <http://example.org/movies#> ASK { :m4 :sequel :m5 }")));
  CHECK(b->concurrency_safe());
}

TEST_CASE("remote backend speaks the SPARQL protocol") {
  test::StubServer stub(test::table1());
  const auto b = remote(stub);
  const auto local = test::local(test::table1());
  const SparqlQuery q = parse_sparql(kFilms);
  CHECK(write_select_results(b->select(q)) == write_select_results(local->select(q)));
  CHECK(stub.last_content_type() == "application/sparql-query");
  CHECK(stub.last_accept().find("application/sparql-results+json") != std::string::npos);
  CHECK(b->ask(parse_sparql("PREFIX : <http://example.org/movies#> ASK { :m1 :sequel :m2 }")));
  CHECK_FALSE(b->ask(parse_sparql("PREFIX : <http://example.org/movies#> ASK { :m2 :sequel :m1 }")));
  CHECK(stub.requests() == 3);
}

TEST_CASE("remote select keeps the projection order even for empty results") {
  test::StubServer stub(test::table1());
  const auto b = remote(stub);
  const SolutionSeq s = b->select(parse_sparql("SELECT ?z ?a WHERE { ?a <http://x/none> ?z }"));
  CHECK(s.empty());
  CHECK(s.variables == std::vector<Variable>{Variable("z"), Variable("a")});
}

TEST_CASE("endpoint failures map to error kinds") {
  test::StubServer stub(test::table1());
  const auto b = remote(stub, 300ms);
  const SparqlQuery q = parse_sparql(kFilms);

  stub.set_status(500);
  CHECK(failure_kind([&] { b->select(q); }) == BackendError::Kind::Endpoint);
  stub.set_status(0);

  stub.set_malformed(true);
  CHECK(failure_kind([&] { b->select(q); }) == BackendError::Kind::MalformedResults);
  stub.set_malformed(false);

  stub.set_delay(1000ms);
  CHECK(failure_kind([&] { b->select(q); }) == BackendError::Kind::Timeout);
  stub.set_delay(0ms);

  CHECK(b->select(q).size() == 5);
}

TEST_CASE("queries the endpoint rejects surface as endpoint errors") {
  test::StubServer stub(test::table1());
  const auto b = remote(stub);
  // Grouping is outside what the stub evaluates; it answers 400.
  const SparqlQuery grouped = parse_sparql("SELECT ?o WHERE { ?s ?p ?o } GROUP BY ?o");
  CHECK(failure_kind([&] { b->select(grouped); }) == BackendError::Kind::Endpoint);
}

TEST_CASE("unreachable endpoints are network errors after retries") {
  int port = 0;
  {
    test::StubServer gone(test::table1());
    port = gone.port();
  }
  RemoteOptions o;
  o.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/sparql";
  o.timeout = 2000ms;
  o.connect_retries = 1;
  RemoteBackend b(o);
  CHECK(failure_kind([&] { b.ask(parse_sparql("ASK { }")); }) == BackendError::Kind::Network);
  CHECK_THROWS_AS(RemoteBackend(RemoteOptions{"ftp://example.org/x"}), BackendError);
  CHECK_THROWS_AS(RemoteBackend(RemoteOptions{"not a url"}), BackendError);
}

TEST_CASE("concurrent probes through one remote backend") {
  test::StubServer stub(test::table1());
  const auto b = remote(stub);
  CHECK(b->concurrency_safe());
  std::vector<std::future<bool>> answers;
  for (int i = 0; i < 32; ++i) {
    answers.push_back(std::async(std::launch::async, [&b, i] {
      const std::string film = ":m" + std::to_string(1 + i % 5);
      return b->ask(parse_sparql("PREFIX : <http://example.org/movies#> ASK { " + film + " :sequel ?x }"));
    }));
  }
  int with_sequel = 0;
  for (auto& a : answers) with_sequel += a.get();
  CHECK(with_sequel == 20);  // m1, m2, m4 have sequels: 6 full rounds of 3, then m1 and m2
}

TEST_CASE("every strategy gives the same answer remotely and locally") {
  test::StubServer stub(test::table1());
  const auto b = remote(stub);
  const auto local = test::local(test::table1());
  for (const char* path : {"queries/table1-longest.rq", "queries/table1-sequel.rq", "queries/table1-originals.rq"}) {
    const QueryAst q = test::load_query(path);
    for (Strategy s : {Strategy::NestedLoop, Strategy::BlockNestedLoop, Strategy::Rewrite, Strategy::BaseOnly}) {
      CAPTURE(path);
      CAPTURE(strategy_name(s));
      ExecOptions o;
      o.strategy = s;
      o.threads = 4;
      const ExecResult r = execute(q, b, o);
      const ExecResult l = execute(q, local, o);
      CHECK(write_select_results(r.solutions) == write_select_results(l.solutions));
      CHECK(r.stats.pair_comparisons == l.stats.pair_comparisons);
      CHECK(r.stats.ask_probes == l.stats.ask_probes);
    }
  }
}
