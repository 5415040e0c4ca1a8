#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sprefql {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed query or data text. Positions are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        message_(message),
        line_(line),
        column_(column) {}

  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

/// A SPARQL construct outside the supported subset.
class UnsupportedFeature : public Error {
 public:
  explicit UnsupportedFeature(std::string feature)
      : Error("unsupported-feature: " + feature), feature_(std::move(feature)) {}

  const std::string& feature() const { return feature_; }

 private:
  std::string feature_;
};

/// One violated well-formedness condition of a PREFER clause.
struct Diagnostic {
  std::string condition;  // short machine-readable tag, e.g. "arity"
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

class IllFormedPrefer : public Error {
 public:
  explicit IllFormedPrefer(std::vector<Diagnostic> diagnostics)
      : Error(render(diagnostics)), diagnostics_(std::move(diagnostics)) {}

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  static std::string render(const std::vector<Diagnostic>& ds) {
    std::string out = "ill-formed-prefer";
    for (const auto& d : ds) out += "; " + d.condition + ": " + d.message;
    return out;
  }

  std::vector<Diagnostic> diagnostics_;
};

class BackendError : public Error {
 public:
  enum class Kind { Network, Endpoint, MalformedResults, Timeout };

  BackendError(Kind kind, const std::string& message)
      : Error(std::string(kind_name(kind)) + ": " + message), kind_(kind) {}

  Kind kind() const { return kind_; }

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::Network: return "network-error";
      case Kind::Endpoint: return "endpoint-error";
      case Kind::MalformedResults: return "malformed-results";
      case Kind::Timeout: return "timeout-error";
    }
    return "backend-error";
  }

 private:
  Kind kind_;
};

/// Raised when an exhaustive check would exceed its configured size cap.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

/// Caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sprefql
