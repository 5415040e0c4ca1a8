#include "sprefql/backend.hpp"

#include <httplib.h>

#include "sprefql/error.hpp"
#include "sprefql/results_json.hpp"
#include "sprefql/sparql_eval.hpp"
#include "sprefql/sparql_writer.hpp"

namespace sprefql {

SolutionSeq LocalBackend::select(const SparqlQuery& q) { return eval_select(*ds_, q); }

bool LocalBackend::ask(const SparqlQuery& q) { return eval_ask(*ds_, q); }

namespace {

std::pair<std::string, std::string> split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw BackendError(BackendError::Kind::Network, "endpoint must be an http(s) URL: " + url);
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw BackendError(BackendError::Kind::Network, "unsupported scheme '" + scheme + "'");
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https") {
    throw BackendError(BackendError::Kind::Network, "built without TLS support");
  }
#endif
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class Permit {
 public:
  explicit Permit(std::counting_semaphore<1024>& s) : s_(s) { s_.acquire(); }
  ~Permit() { s_.release(); }
  Permit(const Permit&) = delete;
  Permit& operator=(const Permit&) = delete;

 private:
  std::counting_semaphore<1024>& s_;
};

}  // namespace

RemoteBackend::RemoteBackend(RemoteOptions options)
    : options_(std::move(options)),
      in_flight_(std::clamp<std::ptrdiff_t>(options_.max_in_flight, 1, 1024)) {
  auto [shp, path] = split_endpoint(options_.endpoint);
  scheme_host_port_ = std::move(shp);
  path_ = std::move(path);
}

std::string RemoteBackend::post(const std::string& query_text) {
  using Clock = std::chrono::steady_clock;
  Permit permit(in_flight_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
  httplib::Headers headers = {{"Accept", "application/sparql-results+json"}};
  for (int attempt = 0;; ++attempt) {
    httplib::Client cli(scheme_host_port_);
    cli.set_connection_timeout(secs.count(), usecs.count());
    cli.set_read_timeout(secs.count(), usecs.count());
    cli.set_write_timeout(secs.count(), usecs.count());
    const auto start = Clock::now();
    auto res = cli.Post(path_, headers, query_text, "application/sparql-query");
    if (res) {
      if (res->status < 200 || res->status >= 300) {
        std::string body = res->body.substr(0, 200);
        throw BackendError(BackendError::Kind::Endpoint,
                           "HTTP " + std::to_string(res->status) + (body.empty() ? "" : ": " + body));
      }
      return std::move(res->body);
    }
    const auto err = res.error();
    if (Clock::now() - start >= options_.timeout || err == httplib::Error::ConnectionTimeout) {
      throw BackendError(BackendError::Kind::Timeout,
                         "no response within " + std::to_string(options_.timeout.count()) + " ms");
    }
    const bool connect_failure = err == httplib::Error::Connection;
    if (!connect_failure || attempt >= options_.connect_retries) {
      throw BackendError(BackendError::Kind::Network, httplib::to_string(err));
    }
  }
}

SolutionSeq RemoteBackend::select(const SparqlQuery& q) {
  SolutionSeq out = parse_select_results(post(serialize_sparql(q)));
  // Keep the declared projection order even if the endpoint reorders head.vars.
  if (!q.select_all) out.variables = q.projection;
  return out;
}

bool RemoteBackend::ask(const SparqlQuery& q) { return parse_ask_results(post(serialize_sparql(q))); }

}  // namespace sprefql
