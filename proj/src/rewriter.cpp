#include "sprefql/rewriter.hpp"

#include <set>

#include "sprefql/error.hpp"
#include "sprefql/sprefql.hpp"

namespace sprefql {

namespace {

using K = Expression::Kind;

std::optional<bool> constant_bool(const Expression& e) {
  if (e.kind != K::Constant || !e.constant->is_literal() || e.constant->datatype() != vocab::xsd_boolean) {
    return std::nullopt;
  }
  return e.constant->boolean_value();
}

// Value is always xsd:boolean or an error.
bool boolean_typed(const Expression& e) {
  switch (e.kind) {
    case K::Or:
    case K::And:
    case K::Not:
    case K::Equal:
    case K::NotEqual:
    case K::Less:
    case K::LessEqual:
    case K::Greater:
    case K::GreaterEqual:
    case K::Exists:
    case K::NotExists: return true;
    case K::Constant: return constant_bool(e).has_value();
    case K::Call:
      return e.function == "BOUND" || e.function == "SAMETERM" || e.function == "REGEX" ||
             e.function.starts_with("IS");
    default: return false;
  }
}

Expression bool_const(bool b) { return Expression::term(RdfTerm::boolean(b)); }

Expression negate(Expression e) { return simplify(Expression::unary(K::Not, std::move(e))); }

Expression conj(Expression a, Expression b) { return simplify(Expression::binary(K::And, std::move(a), std::move(b))); }

Expression disj(Expression a, Expression b) { return simplify(Expression::binary(K::Or, std::move(a), std::move(b))); }

class FreshNames {
 public:
  explicit FreshNames(std::set<Variable> taken) : taken_(std::move(taken)) {}

  Variable make(const Variable& base) {
    for (int i = 1;; ++i) {
      Variable v(base.name() + "_tmp" + (i == 1 ? "" : std::to_string(i)));
      if (taken_.insert(v).second) return v;
    }
  }

 private:
  std::set<Variable> taken_;
};

void collect_body_variables(const PreferenceExpr& p, std::set<Variable>& out) {
  if (p.kind == PreferenceExpr::Kind::Simple) {
    collect_variables(p.constraint, out);
    return;
  }
  for (const auto& op : p.operands) collect_body_variables(op, out);
}

}  // namespace

Expression simplify(const Expression& e) {
  if (e.kind != K::Or && e.kind != K::And && e.kind != K::Not) return e;
  std::vector<Expression> args;
  for (const auto& a : e.args) args.push_back(simplify(a));
  if (e.kind == K::Not) {
    if (auto c = constant_bool(args[0])) return bool_const(!*c);
    if (args[0].kind == K::Not && boolean_typed(args[0].args[0])) return args[0].args[0];
    return Expression::unary(K::Not, std::move(args[0]));
  }
  const bool is_and = e.kind == K::And;
  const auto l = constant_bool(args[0]);
  const auto r = constant_bool(args[1]);
  // false && x = false, true || x = true, whatever x evaluates to.
  if ((l && *l != is_and) || (r && *r != is_and)) return bool_const(!is_and);
  // true && x = x, false || x = x, when x is itself boolean or an error.
  if (l && boolean_typed(args[1])) return std::move(args[1]);
  if (r && boolean_typed(args[0])) return std::move(args[0]);
  return Expression::binary(e.kind, std::move(args[0]), std::move(args[1]));
}

Expression swap_sides(const Expression& e, const std::vector<Variable>& left,
                      const std::vector<Variable>& right) {
  VariableMap m;
  for (std::size_t i = 0; i < left.size() && i < right.size(); ++i) {
    m.emplace(left[i], right[i]);
    m.emplace(right[i], left[i]);
  }
  return rename_variables(e, m);
}

Expression unfold_pareto(const Expression& p, const Expression& q, const std::vector<Variable>& left,
                         const std::vector<Variable>& right) {
  return disj(conj(p, negate(swap_sides(q, left, right))), conj(q, negate(swap_sides(p, left, right))));
}

Expression unfold_prioritized(const Expression& p, const Expression& q, const std::vector<Variable>& left,
                              const std::vector<Variable>& right) {
  return disj(p, conj(conj(negate(p), negate(swap_sides(p, left, right))), q));
}

Expression unfold(const PreferenceExpr& body, const std::vector<Variable>& left,
                  const std::vector<Variable>& right) {
  using PK = PreferenceExpr::Kind;
  switch (body.kind) {
    case PK::Simple: return body.constraint;
    case PK::Pareto:
      return unfold_pareto(unfold(body.lhs(), left, right), unfold(body.rhs(), left, right), left, right);
    case PK::Prioritized:
      return unfold_prioritized(unfold(body.lhs(), left, right), unfold(body.rhs(), left, right), left,
                                right);
  }
  return body.constraint;
}

RewriteResult rewrite(const QueryAst& q) {
  RewriteResult out;
  out.query = q.base;
  if (!q.prefer) return out;
  if (auto diags = validate(q); !diags.empty()) throw IllFormedPrefer(std::move(diags));
  if (!q.base.group_by.empty() || !q.base.having.empty()) {
    throw UnsupportedFeature("rewrite of a grouped query");
  }
  const auto& clause = *q.prefer;
  const auto& x = q.base.projection;

  std::set<Variable> base_vars = all_variables(q.base);
  std::set<Variable> taken = base_vars;
  taken.insert(clause.left.begin(), clause.left.end());
  taken.insert(clause.right.begin(), clause.right.end());
  collect_body_variables(clause.body, taken);
  FreshNames fresh(taken);

  auto fresh_for = [&](const Variable& v) {
    auto it = out.fresh.find(v);
    if (it != out.fresh.end()) return it->second;
    Variable f = fresh.make(v);
    out.fresh.emplace(v, f);
    return f;
  };

  // Names standing for the competing solution inside NOT EXISTS.
  std::vector<Variable> inner;
  for (const auto& l : clause.left) inner.push_back(base_vars.contains(l) ? fresh_for(l) : l);

  VariableMap p_map;
  for (std::size_t i = 0; i < x.size(); ++i) p_map.emplace(x[i], inner[i]);
  std::set<Variable> where_vars;
  collect_variables(q.base.where, where_vars);
  for (const auto& v : where_vars) {
    if (!p_map.contains(v)) p_map.emplace(v, fresh_for(v));
  }
  GroupPattern inner_group = rename_variables(q.base.where, p_map);

  Expression c = unfold(clause.body, clause.left, clause.right);
  VariableMap c_map;
  for (std::size_t i = 0; i < x.size(); ++i) {
    c_map.emplace(clause.right[i], x[i]);
    c_map.emplace(clause.left[i], inner[i]);
  }
  std::set<Variable> c_vars;
  collect_variables(c, c_vars);
  for (const auto& v : c_vars) {
    if (!c_map.contains(v) && base_vars.contains(v)) {
      // A pattern variable of C that would be captured by the outer solution.
      Variable f = fresh.make(v);
      c_map.emplace(v, f);
    }
  }
  inner_group.elements.emplace_back(Filter{simplify(rename_variables(c, c_map))});

  out.query.where.elements.emplace_back(Filter{Expression::exists(std::move(inner_group), true)});
  return out;
}

}  // namespace sprefql
