#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <semaphore>
#include <string>

#include "sprefql/dataset.hpp"
#include "sprefql/sparql_ast.hpp"

namespace sprefql {

/// Where query bases and ASK probes are evaluated.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual SolutionSeq select(const SparqlQuery& q) = 0;
  virtual bool ask(const SparqlQuery& q) = 0;
  /// True when select/ask may be called from several threads at once.
  virtual bool concurrency_safe() const = 0;
};

/// In-process evaluation over an immutable dataset.
class LocalBackend final : public Backend {
 public:
  explicit LocalBackend(std::shared_ptr<const Dataset> ds) : ds_(std::move(ds)) {}

  SolutionSeq select(const SparqlQuery& q) override;
  bool ask(const SparqlQuery& q) override;
  bool concurrency_safe() const override { return true; }

  const Dataset& dataset() const { return *ds_; }

 private:
  std::shared_ptr<const Dataset> ds_;
};

struct RemoteOptions {
  std::string endpoint;  // http(s)://host[:port]/path
  std::chrono::milliseconds timeout{30000};
  int connect_retries = 2;
  std::ptrdiff_t max_in_flight = 8;
};

/// SPARQL 1.1 Protocol client: POST with `application/sparql-query`, results
/// as `application/sparql-results+json`. Connection failures are retried;
/// HTTP errors and malformed bodies are not.
class RemoteBackend final : public Backend {
 public:
  explicit RemoteBackend(RemoteOptions options);

  SolutionSeq select(const SparqlQuery& q) override;
  bool ask(const SparqlQuery& q) override;
  bool concurrency_safe() const override { return true; }

  /// Sends raw query text and returns the response body.
  std::string post(const std::string& query_text);

 private:
  RemoteOptions options_;
  std::string scheme_host_port_;
  std::string path_;
  std::counting_semaphore<1024> in_flight_;
};

}  // namespace sprefql
