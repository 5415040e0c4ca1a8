#include "sprefql/sparql_ast.hpp"

#include <algorithm>

namespace sprefql {

Expression Expression::var(Variable v) {
  Expression e;
  e.kind = Kind::Var;
  e.variable = std::move(v);
  return e;
}

Expression Expression::term(RdfTerm t) {
  Expression e;
  e.kind = Kind::Constant;
  e.constant = std::move(t);
  return e;
}

Expression Expression::unary(Kind k, Expression operand) {
  Expression e;
  e.kind = k;
  e.args.push_back(std::move(operand));
  return e;
}

Expression Expression::binary(Kind k, Expression lhs, Expression rhs) {
  Expression e;
  e.kind = k;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

Expression Expression::call(std::string name, std::vector<Expression> args) {
  Expression e;
  e.kind = Kind::Call;
  e.function = std::move(name);
  e.args = std::move(args);
  return e;
}

Expression Expression::exists(GroupPattern p, bool negated) {
  Expression e;
  e.kind = negated ? Kind::NotExists : Kind::Exists;
  e.pattern = Box<GroupPattern>(std::move(p));
  return e;
}

bool Expression::is_binary() const {
  switch (kind) {
    case Kind::Or:
    case Kind::And:
    case Kind::Equal:
    case Kind::NotEqual:
    case Kind::Less:
    case Kind::LessEqual:
    case Kind::Greater:
    case Kind::GreaterEqual:
    case Kind::Add:
    case Kind::Subtract:
    case Kind::Multiply:
    case Kind::Divide: return true;
    default: return false;
  }
}

bool Expression::operator==(const Expression& o) const {
  return kind == o.kind && args == o.args && variable == o.variable && constant == o.constant &&
         function == o.function && distinct == o.distinct && star == o.star &&
         pattern == o.pattern;
}

namespace {

Variable renamed(const Variable& v, const VariableMap& m) {
  auto it = m.find(v);
  return it == m.end() ? v : it->second;
}

PatternTerm renamed(const PatternTerm& t, const VariableMap& m) {
  if (const auto* v = std::get_if<Variable>(&t)) return renamed(*v, m);
  return t;
}

void collect_pattern_term(const PatternTerm& t, std::set<Variable>& out) {
  if (const auto* v = std::get_if<Variable>(&t)) out.insert(*v);
}

}  // namespace

Expression rename_variables(const Expression& e, const VariableMap& m) {
  Expression out = e;
  if (out.variable) out.variable = renamed(*out.variable, m);
  for (auto& a : out.args) a = rename_variables(a, m);
  if (out.pattern) out.pattern = Box<GroupPattern>(rename_variables(**out.pattern, m));
  return out;
}

GroupPattern rename_variables(const GroupPattern& g, const VariableMap& m) {
  GroupPattern out;
  out.elements.reserve(g.elements.size());
  for (const auto& el : g.elements) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, BasicGraphPattern>) {
            BasicGraphPattern b;
            for (const auto& tp : node.triples) {
              b.triples.push_back(
                  {renamed(tp.subject, m), renamed(tp.predicate, m), renamed(tp.object, m)});
            }
            out.elements.emplace_back(std::move(b));
          } else if constexpr (std::is_same_v<T, Filter>) {
            out.elements.emplace_back(Filter{rename_variables(node.constraint, m)});
          } else if constexpr (std::is_same_v<T, ValuesBlock>) {
            ValuesBlock v = node;
            for (auto& var : v.variables) var = renamed(var, m);
            out.elements.emplace_back(std::move(v));
          } else {
            out.elements.emplace_back(Box<GroupPattern>(rename_variables(*node, m)));
          }
        },
        el);
  }
  return out;
}

void collect_variables(const Expression& e, std::set<Variable>& out) {
  if (e.variable) out.insert(*e.variable);
  for (const auto& a : e.args) collect_variables(a, out);
  if (e.pattern) collect_variables(**e.pattern, out);
}

void collect_variables(const GroupPattern& g, std::set<Variable>& out) {
  for (const auto& el : g.elements) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, BasicGraphPattern>) {
            for (const auto& tp : node.triples) {
              collect_pattern_term(tp.subject, out);
              collect_pattern_term(tp.predicate, out);
              collect_pattern_term(tp.object, out);
            }
          } else if constexpr (std::is_same_v<T, Filter>) {
            collect_variables(node.constraint, out);
          } else if constexpr (std::is_same_v<T, ValuesBlock>) {
            out.insert(node.variables.begin(), node.variables.end());
          } else {
            collect_variables(*node, out);
          }
        },
        el);
  }
}

std::set<Variable> all_variables(const SparqlQuery& q) {
  std::set<Variable> out(q.projection.begin(), q.projection.end());
  collect_variables(q.where, out);
  for (const auto& e : q.group_by) collect_variables(e, out);
  for (const auto& e : q.having) collect_variables(e, out);
  for (const auto& oc : q.order_by) collect_variables(oc.expression, out);
  return out;
}

void collect_free_variables(const Expression& e, std::set<Variable>& out) {
  if (e.kind == Expression::Kind::Exists || e.kind == Expression::Kind::NotExists) return;
  if (e.variable) out.insert(*e.variable);
  for (const auto& a : e.args) collect_free_variables(a, out);
}

std::vector<Variable> in_scope_variables(const GroupPattern& g) {
  std::vector<Variable> out;
  auto add = [&](const Variable& v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  for (const auto& el : g.elements) {
    if (const auto* b = std::get_if<BasicGraphPattern>(&el)) {
      for (const auto& tp : b->triples) {
        for (const PatternTerm* t : {&tp.subject, &tp.predicate, &tp.object}) {
          if (const auto* v = std::get_if<Variable>(t)) add(*v);
        }
      }
    } else if (const auto* vb = std::get_if<ValuesBlock>(&el)) {
      for (const auto& v : vb->variables) add(v);
    } else if (const auto* sub = std::get_if<Box<GroupPattern>>(&el)) {
      for (const auto& v : in_scope_variables(**sub)) add(v);
    }
  }
  return out;
}

bool mentions_pattern(const Expression& e) {
  if (e.kind == Expression::Kind::Exists || e.kind == Expression::Kind::NotExists) return true;
  return std::any_of(e.args.begin(), e.args.end(), [](const auto& a) { return mentions_pattern(a); });
}

}  // namespace sprefql
