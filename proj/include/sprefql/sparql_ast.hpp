#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "sprefql/box.hpp"
#include "sprefql/dataset.hpp"
#include "sprefql/rdf.hpp"

namespace sprefql {

struct GroupPattern;

/// Expression tree of the supported SPARQL subset. This is also the payload of
/// a basic preference (a SPARQL Constraint).
struct Expression {
  enum class Kind : std::uint8_t {
    Or,
    And,
    Not,
    Equal,
    NotEqual,
    Less,
    LessEqual,
    Greater,
    GreaterEqual,
    Add,
    Subtract,
    Multiply,
    Divide,
    UnaryMinus,
    UnaryPlus,
    Var,
    Constant,
    Call,       // builtin function; `function` holds the upper-case name
    Exists,     // `pattern` holds the graph pattern
    NotExists,
    Aggregate,  // only legal in HAVING; `function` holds the aggregate name
  };

  Kind kind = Kind::Constant;
  std::vector<Expression> args;
  std::optional<Variable> variable;
  std::optional<RdfTerm> constant;
  std::string function;
  bool distinct = false;  // aggregates only
  bool star = false;      // COUNT(*)
  std::optional<Box<GroupPattern>> pattern;

  static Expression var(Variable v);
  static Expression term(RdfTerm t);
  static Expression unary(Kind k, Expression operand);
  static Expression binary(Kind k, Expression lhs, Expression rhs);
  static Expression call(std::string name, std::vector<Expression> args);
  static Expression exists(GroupPattern p, bool negated = false);

  bool is_binary() const;
  bool operator==(const Expression& o) const;
};

struct BasicGraphPattern {
  std::vector<TriplePattern> triples;
  bool operator==(const BasicGraphPattern&) const = default;
};

struct Filter {
  Expression constraint;
  bool operator==(const Filter&) const = default;
};

/// Inline data. nullopt cells are UNDEF.
struct ValuesBlock {
  std::vector<Variable> variables;
  std::vector<std::vector<std::optional<RdfTerm>>> rows;
  bool operator==(const ValuesBlock&) const = default;
};

using PatternElement = std::variant<BasicGraphPattern, Filter, ValuesBlock, Box<GroupPattern>>;

/// A `{ ... }` group. Non-filter elements are joined in order; filters apply
/// to the whole group regardless of position.
struct GroupPattern {
  std::vector<PatternElement> elements;
  bool operator==(const GroupPattern&) const = default;
};

enum class QueryForm : std::uint8_t { Select, Ask };

struct OrderCondition {
  Expression expression;
  bool descending = false;
  bool operator==(const OrderCondition&) const = default;
};

struct SparqlQuery {
  QueryForm form = QueryForm::Select;
  PrefixMap prefixes;
  bool distinct = false;
  bool select_all = false;
  std::vector<Variable> projection;
  GroupPattern where;
  std::vector<Expression> group_by;
  std::vector<Expression> having;
  std::vector<OrderCondition> order_by;
  std::optional<std::uint64_t> limit;
  std::optional<std::uint64_t> offset;

  bool operator==(const SparqlQuery&) const = default;
};

/// Renaming of variables. Unmapped variables are left as they are.
using VariableMap = std::map<Variable, Variable>;

Expression rename_variables(const Expression& e, const VariableMap& m);
GroupPattern rename_variables(const GroupPattern& g, const VariableMap& m);

/// Every variable mentioned anywhere, including inside EXISTS patterns.
void collect_variables(const Expression& e, std::set<Variable>& out);
void collect_variables(const GroupPattern& g, std::set<Variable>& out);
std::set<Variable> all_variables(const SparqlQuery& q);

/// Variables mentioned outside any EXISTS / NOT EXISTS pattern.
void collect_free_variables(const Expression& e, std::set<Variable>& out);

/// Variables of a group in order of first appearance (SELECT * order).
std::vector<Variable> in_scope_variables(const GroupPattern& g);

/// True iff the expression contains an EXISTS or NOT EXISTS node.
bool mentions_pattern(const Expression& e);

}  // namespace sprefql
