#include "sprefql/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "sprefql/error.hpp"
#include "sprefql/executor.hpp"
#include "sprefql/results_json.hpp"
#include "sprefql/rewriter.hpp"
#include "sprefql/sparql_writer.hpp"
#include "sprefql/sprefql.hpp"
#include "sprefql/turtle.hpp"

namespace sprefql {

namespace {

struct UsageError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Options {
  std::vector<std::string> queries;
  std::string data;
  std::string endpoint;
  std::string strategy = "nl";
  std::size_t window = 0;
  std::string format = "table";
  std::optional<std::uint64_t> seed_order;
  bool bench = false;
  bool lint = false;
  bool print_rewrite = false;
  bool probe_cache = false;
  int threads = 1;
  int timeout_ms = 30000;
};

std::shared_ptr<Backend> make_backend(const Options& o) {
  if (!o.data.empty()) {
    auto ds = std::make_shared<Dataset>(load_turtle(read_file(o.data)));
    return std::make_shared<LocalBackend>(std::move(ds));
  }
  RemoteOptions ro;
  ro.endpoint = o.endpoint;
  ro.timeout = std::chrono::milliseconds(o.timeout_ms);
  return std::make_shared<RemoteBackend>(std::move(ro));
}

void print_spo(std::ostream& out, const SpoReport& r) {
  if (r.ok()) {
    out << "preference is a strict partial order over " << r.items << " solutions; bnl is safe\n";
    return;
  }
  out << "preference is not a strict partial order over " << r.items << " solutions:\n";
  for (const auto& v : r.violations) out << "  " << v.describe() << "\n";
  out << "bnl may return solutions that are dominated; use --strategy nl or --strategy rewrite\n";
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

int bench(const Options& o, const std::shared_ptr<Backend>& backend, bool strategy_given, std::ostream& out) {
  std::vector<Strategy> strategies = {Strategy::BaseOnly, Strategy::NestedLoop, Strategy::Rewrite,
                                      Strategy::BlockNestedLoop};
  if (strategy_given) strategies = {*parse_strategy(o.strategy)};
  out << "query,strategy,time_ms,num_res,pair_comparisons,ask_probes,max_window_bindsets,max_window_bindings\n";
  for (const auto& path : o.queries) {
    QueryAst q = parse_sprefql(read_file(path));
    for (Strategy s : strategies) {
      ExecOptions eo;
      eo.strategy = s;
      eo.window = o.window;
      eo.seed_order = o.seed_order;
      eo.threads = o.threads;
      eo.preference.cache_probes = o.probe_cache;
      ExecResult last = execute(q, backend, eo);  // warmup
      std::vector<double> times;
      for (int run = 0; run < 5; ++run) {
        const auto t0 = std::chrono::steady_clock::now();
        last = execute(q, backend, eo);
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
      }
      std::ostringstream ms;
      ms << std::fixed << std::setprecision(3) << median(times);
      out << csv_field(path) << ',' << strategy_name(s) << ',' << ms.str() << ',' << last.solutions.size() << ','
          << last.stats.pair_comparisons << ',' << last.stats.ask_probes << ','
          << last.stats.max_window_bindsets << ',' << last.stats.max_window_bindings << '\n';
    }
  }
  return kExitOk;
}

int run(const Options& o, bool strategy_given, std::ostream& out, std::ostream& err) {
  if (o.queries.empty()) throw UsageError("--query is required");
  if (!o.bench && o.queries.size() > 1) throw UsageError("several --query files need --bench");
  if (!o.data.empty() && !o.endpoint.empty()) throw UsageError("--data and --endpoint are exclusive");
  if (o.data.empty() && o.endpoint.empty()) {
    throw UsageError(std::string("no dataset: give --data, --endpoint or set ") + kEndpointEnv);
  }
  const auto strategy = parse_strategy(o.strategy);
  if (!strategy) throw UsageError("unknown strategy '" + o.strategy + "'");

  auto backend = make_backend(o);
  if (o.bench) return bench(o, backend, strategy_given, out);

  QueryAst q = parse_sprefql(read_file(o.queries.front()));
  if (o.print_rewrite) {
    out << serialize_sparql(rewrite(q).query);
    return kExitOk;
  }
  if (o.lint) {
    print_spo(out, lint_spo(q, backend, SpoOptions{.threads = o.threads}));
    return kExitOk;
  }

  ExecOptions eo;
  eo.strategy = *strategy;
  eo.window = o.window;
  eo.seed_order = o.seed_order;
  eo.threads = o.threads;
  eo.preference.cache_probes = o.probe_cache;
  if (eo.strategy == Strategy::BlockNestedLoop && q.prefer) {
    try {
      SpoReport r = lint_spo(q, backend, SpoOptions{.threads = o.threads});
      if (!r.ok()) {
        err << "warning: preference is not a strict partial order (" << r.violations.front().describe()
            << "); bnl may return dominated solutions\n";
      }
    } catch (const SizeLimitError& e) {
      err << "warning: strict-partial-order check skipped: " << e.what() << "\n";
    }
  }
  ExecResult r = execute(q, backend, eo);
  OutputFormat fmt = o.format == "csv" ? OutputFormat::Csv : o.format == "json" ? OutputFormat::Json : OutputFormat::Table;
  write_solutions(out, r.solutions, fmt, q.base.prefixes);
  return kExitOk;
}

}  // namespace

void write_solutions(std::ostream& out, const SolutionSeq& s, OutputFormat format, const PrefixMap& prefixes) {
  if (format == OutputFormat::Json) {
    out << write_select_results(s) << "\n";
    return;
  }
  if (format == OutputFormat::Csv) {
    for (std::size_t c = 0; c < s.variables.size(); ++c) out << (c ? "," : "") << csv_field(s.variables[c].name());
    out << "\r\n";
    for (const auto& row : s.rows) {
      for (std::size_t c = 0; c < s.variables.size(); ++c) {
        const RdfTerm* t = row.get(s.variables[c]);
        out << (c ? "," : "") << (t ? csv_field(t->is_blank() ? "_:" + t->value() : t->value()) : "");
      }
      out << "\r\n";
    }
    return;
  }
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(s.variables.size(), 0);
  cells.emplace_back();
  for (std::size_t c = 0; c < s.variables.size(); ++c) cells.back().push_back("?" + s.variables[c].name());
  for (const auto& row : s.rows) {
    cells.emplace_back();
    for (const auto& v : s.variables) {
      const RdfTerm* t = row.get(v);
      cells.back().push_back(t ? format_term(*t, prefixes) : "");
    }
  }
  for (const auto& r : cells) {
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  for (const auto& r : cells) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      line += r[c];
      if (c + 1 < r.size()) line += std::string(width[c] - r[c].size() + 2, ' ');
    }
    out << line << "\n";
  }
  out << "(" << s.rows.size() << (s.rows.size() == 1 ? " row" : " rows") << ")\n";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Preference-aware SPARQL query processor"};
  app.name(args.empty() ? "sprefql" : args.front());
  Options o;
  if (const char* env = std::getenv(kEndpointEnv)) o.endpoint = env;
  app.add_option("--query", o.queries, "SPREFQL query file (repeatable with --bench)")->check(CLI::ExistingFile);
  app.add_option("--data", o.data, "Turtle / N-Triples file evaluated in process");
  app.add_option("--endpoint", o.endpoint, std::string("SPARQL endpoint URL (default: $") + kEndpointEnv + ")");
  auto* strategy = app.add_option("--strategy", o.strategy, "nl, bnl, rewrite or base-only")
                       ->check(CLI::IsMember({"nl", "bnl", "rewrite", "base-only"}));
  app.add_option("--window", o.window, "BNL window in binding sets (0 = unlimited)");
  app.add_option("--format", o.format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_option("--seed-order", o.seed_order, "shuffle base solutions with this seed before winnow");
  app.add_flag("--bench", o.bench, "time every strategy (1 warmup, median of 5) and print CSV");
  app.add_flag("--lint-spo", o.lint, "check the preference for strict-partial-order violations");
  app.add_flag("--print-rewrite", o.print_rewrite, "print the NOT EXISTS rewriting and exit");
  app.add_flag("--probe-cache", o.probe_cache, "memoize ASK probes per pair of solutions");
  app.add_option("--threads", o.threads, "threads for the NL scan and SPO check")->check(CLI::PositiveNumber);
  app.add_option("--timeout-ms", o.timeout_ms, "remote request timeout")->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  // --data beats an endpoint inherited from the environment.
  if (!o.data.empty() && app.count("--endpoint") == 0) o.endpoint.clear();

  try {
    return run(o, strategy->count() > 0, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SyntaxError& e) {
    err << "syntax-error: " << e.what() << "\n";
    return kExitParse;
  } catch (const IllFormedPrefer& e) {
    err << e.what() << "\n";
    return kExitIllFormed;
  } catch (const UnsupportedFeature& e) {
    err << e.what() << "\n";
    return kExitUnsupported;
  } catch (const BackendError& e) {
    err << e.what() << "\n";
    return kExitBackend;
  } catch (const SizeLimitError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace sprefql
