#include "stub_server.hpp"

#include <httplib.h>

#include "sprefql/error.hpp"
#include "sprefql/results_json.hpp"
#include "sprefql/sparql_eval.hpp"
#include "sprefql/sparql_parser.hpp"

namespace sprefql::test {

StubServer::StubServer(std::shared_ptr<const Dataset> ds)
    : ds_(std::move(ds)), server_(std::make_unique<httplib::Server>()) {
  auto handle = [this](const std::string& query, httplib::Response& res) {
    ++requests_;
    if (auto d = delay_ms_.load(); d > 0) std::this_thread::sleep_for(std::chrono::milliseconds(d));
    if (int s = status_.load(); s != 0) {
      res.status = s;
      res.set_content("stub failure", "text/plain");
      return;
    }
    if (malformed_) {
      res.set_content("{\"head\": ", "application/sparql-results+json");
      return;
    }
    try {
      SparqlQuery q = parse_sparql(query);
      std::string body = q.form == QueryForm::Ask ? write_ask_results(eval_ask(*ds_, q))
                                                  : write_select_results(eval_select(*ds_, q));
      res.set_content(body, "application/sparql-results+json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(e.what(), "text/plain");
    }
  };
  server_->Post("/sparql", [this, handle](const httplib::Request& req, httplib::Response& res) {
    {
      std::lock_guard lock(mutex_);
      last_content_type_ = req.get_header_value("Content-Type");
      last_accept_ = req.get_header_value("Accept");
    }
    handle(req.body, res);
  });
  server_->Get("/sparql", [handle](const httplib::Request& req, httplib::Response& res) {
    handle(req.get_param_value("query"), res);
  });
  port_ = server_->bind_to_any_port("127.0.0.1");
  if (port_ <= 0) throw std::runtime_error("stub server could not bind");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

StubServer::~StubServer() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace sprefql::test
