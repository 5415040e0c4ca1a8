#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace sprefql {

namespace vocab {
inline constexpr std::string_view xsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view xsd_string = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view xsd_boolean = "http://www.w3.org/2001/XMLSchema#boolean";
inline constexpr std::string_view xsd_integer = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view xsd_decimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view xsd_double = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view xsd_float = "http://www.w3.org/2001/XMLSchema#float";
inline constexpr std::string_view rdf_type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view rdf_lang_string =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
}  // namespace vocab

/// Value-space view of a numeric literal. Integers keep exact 64-bit values
/// when they fit; everything else is carried as a double.
struct Numeric {
  enum class Type : std::uint8_t { Integer, Decimal, Float, Double };

  Type type = Type::Integer;
  std::int64_t integer = 0;
  double real = 0.0;

  static Numeric from_integer(std::int64_t v) { return {Type::Integer, v, static_cast<double>(v)}; }
  static Numeric from_real(Type t, double v) { return {t, 0, v}; }

  double as_double() const { return type == Type::Integer ? static_cast<double>(integer) : real; }
};

/// Three-way numeric comparison after XSD type promotion. Unordered (NaN) yields
/// std::partial_ordering::unordered.
std::partial_ordering compare_numeric(const Numeric& a, const Numeric& b);

enum class TermKind : std::uint8_t { Iri, Blank, Literal };

/// An RDF term: IRI, blank node, or literal. Literals always carry a datatype;
/// language-tagged literals carry rdf:langString plus a lowercase tag.
class RdfTerm {
 public:
  static RdfTerm iri(std::string value);
  static RdfTerm blank(std::string label);
  static RdfTerm literal(std::string lexical);
  static RdfTerm typed_literal(std::string lexical, std::string datatype);
  static RdfTerm lang_literal(std::string lexical, std::string language);
  static RdfTerm integer(std::int64_t value);
  static RdfTerm decimal(double value);
  static RdfTerm dbl(double value);
  static RdfTerm boolean(bool value);

  TermKind kind() const { return kind_; }
  bool is_iri() const { return kind_ == TermKind::Iri; }
  bool is_blank() const { return kind_ == TermKind::Blank; }
  bool is_literal() const { return kind_ == TermKind::Literal; }

  /// IRI text, blank-node label, or literal lexical form.
  const std::string& value() const { return value_; }
  const std::string& datatype() const { return datatype_; }
  const std::string& language() const { return language_; }

  /// Set for literals whose datatype is one of the XSD numeric types and whose
  /// lexical form is valid for it.
  const std::optional<Numeric>& numeric() const { return numeric_; }
  std::optional<bool> boolean_value() const;
  /// Simple, xsd:string or language-tagged literal.
  bool is_string_like() const;

  /// Structural identity (RDF term equality); the numeric cache is derived and
  /// does not participate.
  bool operator==(const RdfTerm& o) const {
    return kind_ == o.kind_ && value_ == o.value_ && datatype_ == o.datatype_ &&
           language_ == o.language_;
  }
  std::strong_ordering operator<=>(const RdfTerm& o) const;

 private:
  RdfTerm(TermKind kind, std::string value, std::string datatype, std::string language);

  TermKind kind_;
  std::string value_;
  std::string datatype_;
  std::string language_;
  std::optional<Numeric> numeric_;
};

/// Parses a numeric lexical form for the given XSD datatype; nullopt when the
/// datatype is not numeric or the lexical form is invalid.
std::optional<Numeric> parse_numeric(std::string_view lexical, std::string_view datatype);

/// A query variable. The stored name carries no leading '?' or '$'.
class Variable {
 public:
  explicit Variable(std::string name);

  const std::string& name() const { return name_; }

  bool operator==(const Variable&) const = default;
  auto operator<=>(const Variable&) const = default;

  static bool valid_name(std::string_view name);

 private:
  std::string name_;
};

struct Triple {
  RdfTerm subject;
  RdfTerm predicate;
  RdfTerm object;

  /// Validates term kinds (subject IRI/blank, predicate IRI).
  static Triple make(RdfTerm s, RdfTerm p, RdfTerm o);

  bool operator==(const Triple&) const = default;
  auto operator<=>(const Triple&) const = default;
};

using PatternTerm = std::variant<Variable, RdfTerm>;

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;

  bool operator==(const TriplePattern&) const = default;
};

/// A solution mapping: finite partial function from variables to terms.
/// Bindings are kept sorted by variable, so equality is extensional.
class Mapping {
 public:
  using Binding = std::pair<Variable, RdfTerm>;

  Mapping() = default;
  Mapping(std::initializer_list<Binding> bindings);

  /// Bound term or nullptr when `v` is outside dom(μ).
  const RdfTerm* get(const Variable& v) const;
  bool contains(const Variable& v) const { return get(v) != nullptr; }
  /// Binds or rebinds `v`.
  void set(const Variable& v, RdfTerm t);
  void erase(const Variable& v);

  std::vector<Variable> domain() const;
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }
  const std::vector<Binding>& bindings() const { return bindings_; }

  /// True iff both mappings agree on every shared variable.
  bool compatible(const Mapping& other) const;
  /// Union of two compatible mappings.
  Mapping merged(const Mapping& other) const;
  /// Restriction of dom(μ) to `vars`.
  Mapping project(const std::vector<Variable>& vars) const;

  bool operator==(const Mapping&) const = default;
  auto operator<=>(const Mapping&) const = default;

 private:
  std::vector<Binding> bindings_;
};

inline bool mapping_compatible(const Mapping& a, const Mapping& b) { return a.compatible(b); }

/// Ordered multiset of solutions sharing one declared projection list.
struct SolutionSeq {
  std::vector<Variable> variables;
  std::vector<Mapping> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
};

/// SPARQL ORDER BY ordering on possibly-unbound terms:
/// unbound < blank < IRI < literal; numerics compare by value.
std::weak_ordering order_terms(const RdfTerm* a, const RdfTerm* b);

}  // namespace sprefql

template <>
struct std::hash<sprefql::RdfTerm> {
  std::size_t operator()(const sprefql::RdfTerm& t) const noexcept;
};

template <>
struct std::hash<sprefql::Variable> {
  std::size_t operator()(const sprefql::Variable& v) const noexcept {
    return std::hash<std::string>{}(v.name());
  }
};
