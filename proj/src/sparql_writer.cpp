#include "sprefql/sparql_writer.hpp"

#include <algorithm>
#include <regex>

namespace sprefql {

namespace {

using K = Expression::Kind;

bool matches(const std::string& s, const char* pattern) {
  static thread_local std::unordered_map<const char*, std::regex> cache;
  auto it = cache.find(pattern);
  if (it == cache.end()) it = cache.emplace(pattern, std::regex(pattern)).first;
  return std::regex_match(s, it->second);
}

bool plain_local(std::string_view local) {
  if (local.empty()) return true;
  if (local.front() == '-' || local.back() == '-') return false;
  return std::all_of(local.begin(), local.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-';
  });
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string format_iri(const std::string& iri, const PrefixMap& prefixes) {
  const std::pair<const std::string, std::string>* best = nullptr;
  for (const auto& entry : prefixes) {
    const auto& ns = entry.second;
    if (ns.empty() || !iri.starts_with(ns) || !plain_local(std::string_view(iri).substr(ns.size()))) {
      continue;
    }
    if (best == nullptr || ns.size() > best->second.size()) best = &entry;
  }
  if (best != nullptr) return best->first + ":" + iri.substr(best->second.size());
  return "<" + iri + ">";
}

bool signed_number(const RdfTerm& t) {
  return t.numeric() && !t.value().empty() && (t.value()[0] == '-' || t.value()[0] == '+');
}

// Pattern positions cannot start a literal with a sign after another term.
std::string format_pattern_term(const PatternTerm& t, const PrefixMap& prefixes, bool predicate) {
  if (const auto* v = std::get_if<Variable>(&t)) return "?" + v->name();
  const auto& term = std::get<RdfTerm>(t);
  if (predicate && term.is_iri() && term.value() == vocab::rdf_type) return "a";
  if (signed_number(term)) return quote(term.value()) + "^^" + format_iri(term.datatype(), prefixes);
  return format_term(term, prefixes);
}

int precedence(const Expression& e) {
  switch (e.kind) {
    case K::Or: return 1;
    case K::And: return 2;
    case K::Equal:
    case K::NotEqual:
    case K::Less:
    case K::LessEqual:
    case K::Greater:
    case K::GreaterEqual: return 3;
    case K::Add:
    case K::Subtract: return 4;
    case K::Multiply:
    case K::Divide: return 5;
    case K::Not:
    case K::UnaryMinus:
    case K::UnaryPlus: return 6;
    default: return 7;
  }
}

const char* op_text(K k) {
  switch (k) {
    case K::Or: return "||";
    case K::And: return "&&";
    case K::Equal: return "=";
    case K::NotEqual: return "!=";
    case K::Less: return "<";
    case K::LessEqual: return "<=";
    case K::Greater: return ">";
    case K::GreaterEqual: return ">=";
    case K::Add: return "+";
    case K::Subtract: return "-";
    case K::Multiply: return "*";
    case K::Divide: return "/";
    default: return "?";
  }
}

std::string function_name(const std::string& upper) {
  static const std::pair<const char*, const char*> kNames[] = {
      {"STR", "str"},          {"LANG", "lang"},           {"DATATYPE", "datatype"},
      {"BOUND", "bound"},      {"ISIRI", "isIRI"},         {"ISURI", "isURI"},
      {"ISBLANK", "isBlank"},  {"ISLITERAL", "isLiteral"}, {"ISNUMERIC", "isNumeric"},
      {"SAMETERM", "sameTerm"}, {"REGEX", "regex"}};
  for (const auto& [u, name] : kNames) {
    if (upper == u) return name;
  }
  return upper;
}

class Writer {
 public:
  explicit Writer(const PrefixMap& prefixes) : prefixes_(prefixes) {}

  std::string expr(const Expression& e, int indent) const {
    if (e.is_binary()) {
      const int p = precedence(e);
      const bool relational = p == 3;
      const auto& l = e.args[0];
      const auto& r = e.args[1];
      std::string ls = expr(l, indent);
      std::string rs = expr(r, indent);
      if (precedence(l) < p || (relational && precedence(l) == p)) ls = "(" + ls + ")";
      if (precedence(r) <= p) rs = "(" + rs + ")";
      return ls + " " + op_text(e.kind) + " " + rs;
    }
    switch (e.kind) {
      case K::Not: {
        std::string s = expr(e.args[0], indent);
        return precedence(e.args[0]) == 7 ? "!" + s : "!(" + s + ")";
      }
      case K::UnaryMinus: return "-(" + expr(e.args[0], indent) + ")";
      case K::UnaryPlus: return "+(" + expr(e.args[0], indent) + ")";
      case K::Var: return "?" + e.variable->name();
      case K::Constant: return format_term(*e.constant, prefixes_);
      case K::Call: {
        std::string s = function_name(e.function) + "(";
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          if (i > 0) s += ", ";
          s += expr(e.args[i], indent);
        }
        return s + ")";
      }
      case K::Exists:
      case K::NotExists:
        return std::string(e.kind == K::Exists ? "EXISTS " : "NOT EXISTS ") + group(**e.pattern, indent);
      case K::Aggregate: {
        std::string s = e.function + "(";
        if (e.distinct) s += "DISTINCT ";
        s += e.star ? "*" : expr(e.args[0], indent);
        return s + ")";
      }
      default: return "?";
    }
  }

  std::string constraint(const Expression& e, int indent) const {
    switch (e.kind) {
      case K::Call:
      case K::Exists:
      case K::NotExists:
      case K::Aggregate: return expr(e, indent);
      default: return "( " + expr(e, indent) + " )";
    }
  }

  std::string group(const GroupPattern& g, int indent) const {
    const std::string pad(static_cast<std::size_t>(indent + 1) * 2, ' ');
    std::string s = "{\n";
    for (const auto& el : g.elements) {
      if (const auto* bgp = std::get_if<BasicGraphPattern>(&el)) {
        for (const auto& tp : bgp->triples) {
          s += pad + format_pattern_term(tp.subject, prefixes_, false) + " " +
               format_pattern_term(tp.predicate, prefixes_, true) + " " +
               format_pattern_term(tp.object, prefixes_, false) + " .\n";
        }
      } else if (const auto* f = std::get_if<Filter>(&el)) {
        s += pad + "FILTER " + constraint(f->constraint, indent + 1) + "\n";
      } else if (const auto* vb = std::get_if<ValuesBlock>(&el)) {
        s += pad + values(*vb) + "\n";
      } else {
        s += pad + group(*std::get<Box<GroupPattern>>(el), indent + 1) + "\n";
      }
    }
    return s + std::string(static_cast<std::size_t>(indent) * 2, ' ') + "}";
  }

  std::string values(const ValuesBlock& vb) const {
    std::string s = "VALUES (";
    for (const auto& v : vb.variables) s += " ?" + v.name();
    s += " ) {";
    for (const auto& row : vb.rows) {
      s += " (";
      for (const auto& cell : row) s += " " + (cell ? format_term(*cell, prefixes_) : "UNDEF");
      s += " )";
    }
    return s + " }";
  }

  std::string preference(const PreferenceExpr& p) const {
    using PK = PreferenceExpr::Kind;
    switch (p.kind) {
      case PK::Simple: return constraint(p.constraint, 0);
      case PK::Pareto: {
        std::string l = preference(p.lhs());
        if (p.lhs().kind == PK::Pareto) l = "( " + l + " )";
        return l + " AND " + preference(p.rhs());
      }
      case PK::Prioritized: {
        std::string l = preference(p.lhs());
        std::string r = preference(p.rhs());
        if (p.lhs().kind != PK::Simple) l = "( " + l + " )";
        if (p.rhs().kind == PK::Pareto) r = "( " + r + " )";
        return l + " PRIOR TO " + r;
      }
    }
    return {};
  }

 private:
  const PrefixMap& prefixes_;
};

std::string var_list(const std::vector<Variable>& vars) {
  if (vars.size() == 1) return "?" + vars[0].name();
  std::string s = "(";
  for (const auto& v : vars) s += " ?" + v.name();
  return s + " )";
}

std::string write_query(const SparqlQuery& q, const PreferClause* prefer) {
  Writer w(q.prefixes);
  std::string s;
  for (const auto& [name, ns] : q.prefixes) s += "PREFIX " + name + ": <" + ns + ">\n";
  if (q.form == QueryForm::Ask) return s + "ASK\nWHERE " + w.group(q.where, 0) + "\n";
  s += "SELECT ";
  if (q.distinct) s += "DISTINCT ";
  if (q.select_all) {
    s += "*";
  } else {
    for (std::size_t i = 0; i < q.projection.size(); ++i) {
      if (i > 0) s += " ";
      s += "?" + q.projection[i].name();
    }
  }
  s += "\nWHERE " + w.group(q.where, 0) + "\n";
  if (!q.group_by.empty()) {
    s += "GROUP BY";
    for (const auto& e : q.group_by) {
      s += " " + (e.kind == K::Var ? w.expr(e, 0) : w.constraint(e, 0));
    }
    s += "\n";
  }
  if (!q.having.empty()) {
    s += "HAVING";
    for (const auto& e : q.having) s += " " + w.constraint(e, 0);
    s += "\n";
  }
  if (prefer != nullptr) {
    s += "PREFER " + var_list(prefer->left) + " TO " + var_list(prefer->right) + "\nIF " +
         w.preference(prefer->body) + "\n";
  }
  if (!q.order_by.empty()) {
    s += "ORDER BY";
    for (const auto& oc : q.order_by) {
      if (oc.descending) s += " DESC(" + w.expr(oc.expression, 0) + ")";
      else if (oc.expression.kind == K::Var) s += " " + w.expr(oc.expression, 0);
      else s += " ASC(" + w.expr(oc.expression, 0) + ")";
    }
    s += "\n";
  }
  if (q.limit) s += "LIMIT " + std::to_string(*q.limit) + "\n";
  if (q.offset) s += "OFFSET " + std::to_string(*q.offset) + "\n";
  return s;
}

}  // namespace

std::string format_term(const RdfTerm& t, const PrefixMap& prefixes) {
  switch (t.kind()) {
    case TermKind::Iri: return format_iri(t.value(), prefixes);
    case TermKind::Blank: return "_:" + t.value();
    case TermKind::Literal: break;
  }
  const std::string& dt = t.datatype();
  const std::string& lex = t.value();
  if (dt == vocab::xsd_string) return quote(lex);
  if (dt == vocab::rdf_lang_string) return quote(lex) + "@" + t.language();
  if (dt == vocab::xsd_integer && matches(lex, "[+-]?[0-9]+")) return lex;
  if (dt == vocab::xsd_decimal && matches(lex, "[+-]?[0-9]*\\.[0-9]+")) return lex;
  if (dt == vocab::xsd_double && matches(lex, "[+-]?([0-9]+\\.?[0-9]*|\\.[0-9]+)[eE][+-]?[0-9]+")) {
    return lex;
  }
  if (dt == vocab::xsd_boolean && (lex == "true" || lex == "false")) return lex;
  return quote(lex) + "^^" + format_iri(dt, prefixes);
}

std::string serialize_expression(const Expression& e, const PrefixMap& prefixes) {
  return Writer(prefixes).expr(e, 0);
}

std::string serialize_constraint(const Expression& e, const PrefixMap& prefixes) {
  return Writer(prefixes).constraint(e, 0);
}

std::string serialize_group(const GroupPattern& g, const PrefixMap& prefixes, int indent) {
  return Writer(prefixes).group(g, indent);
}

std::string serialize_sparql(const SparqlQuery& q) { return write_query(q, nullptr); }

std::string serialize_preference(const PreferenceExpr& p, const PrefixMap& prefixes) {
  return Writer(prefixes).preference(p);
}

std::string serialize_sprefql(const QueryAst& q) {
  return write_query(q.base, q.prefer ? &*q.prefer : nullptr);
}

}  // namespace sprefql
