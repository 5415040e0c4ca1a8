#include "sprefql/sparql_eval.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numeric>
#include <regex>
#include <set>
#include <unordered_map>

#include "sprefql/error.hpp"

namespace sprefql {

namespace {

using K = Expression::Kind;

// Intermediate result of expression evaluation. Terms bound in mappings or
// held by the AST are referenced, not copied.
class Value {
 public:
  enum class Tag : std::uint8_t { Error, Bool, Number, Term };

  static Value error() { return Value(); }
  static Value boolean(bool b) {
    Value v;
    v.tag_ = Tag::Bool;
    v.bool_ = b;
    return v;
  }
  static Value number(Numeric n) {
    Value v;
    v.tag_ = Tag::Number;
    v.num_ = n;
    return v;
  }
  static Value ref(const RdfTerm* t) {
    if (t == nullptr) return error();
    Value v;
    v.tag_ = Tag::Term;
    v.ref_ = t;
    return v;
  }
  static Value own(RdfTerm t) {
    Value v;
    v.tag_ = Tag::Term;
    v.owned_ = std::move(t);
    return v;
  }

  bool is_error() const { return tag_ == Tag::Error; }
  const RdfTerm* term() const {
    if (tag_ != Tag::Term) return nullptr;
    return owned_ ? &*owned_ : ref_;
  }

  std::optional<Numeric> numeric() const {
    if (tag_ == Tag::Number) return num_;
    if (const auto* t = term()) return t->numeric();
    return std::nullopt;
  }

  std::optional<bool> boolean() const {
    if (tag_ == Tag::Bool) return bool_;
    if (const auto* t = term()) return t->boolean_value();
    return std::nullopt;
  }

  RdfTerm to_term() const {
    switch (tag_) {
      case Tag::Bool: return RdfTerm::boolean(bool_);
      case Tag::Number:
        switch (num_.type) {
          case Numeric::Type::Integer: return RdfTerm::integer(num_.integer);
          case Numeric::Type::Decimal: return RdfTerm::decimal(num_.real);
          case Numeric::Type::Float:
            return RdfTerm::typed_literal(RdfTerm::dbl(num_.real).value(), std::string(vocab::xsd_float));
          case Numeric::Type::Double: return RdfTerm::dbl(num_.real);
        }
        break;
      case Tag::Term: return *term();
      case Tag::Error: break;
    }
    throw ContractViolation("to_term on an error value");
  }

 private:
  Tag tag_ = Tag::Error;
  bool bool_ = false;
  Numeric num_;
  const RdfTerm* ref_ = nullptr;
  std::optional<RdfTerm> owned_;
};

bool is_simple_string(const RdfTerm* t) {
  return t != nullptr && t->is_literal() && t->datatype() == vocab::xsd_string;
}

bool is_numeric_datatype(const std::string& dt) { return parse_numeric("0", dt).has_value(); }

std::optional<bool> ebv(const Value& v) {
  if (v.is_error()) return std::nullopt;
  if (const auto* t = v.term()) {
    if (!t->is_literal()) return std::nullopt;
    if (t->datatype() == vocab::xsd_boolean) return t->boolean_value().value_or(false);
    if (is_numeric_datatype(t->datatype())) {
      const auto& n = t->numeric();
      if (!n) return false;
      return n->type == Numeric::Type::Integer ? n->integer != 0
                                               : (n->real != 0.0 && !std::isnan(n->real));
    }
    if (t->datatype() == vocab::xsd_string) return !t->value().empty();
    return std::nullopt;
  }
  if (auto b = v.boolean()) return *b;
  auto n = v.numeric();
  return n->type == Numeric::Type::Integer ? n->integer != 0 : (n->real != 0.0 && !std::isnan(n->real));
}

std::optional<bool> values_equal(const Value& a, const Value& b) {
  if (a.is_error() || b.is_error()) return std::nullopt;
  const auto na = a.numeric();
  const auto nb = b.numeric();
  if (na && nb) return compare_numeric(*na, *nb) == std::partial_ordering::equivalent;
  const auto ba = a.boolean();
  const auto bb = b.boolean();
  if (ba && bb) return *ba == *bb;
  const RdfTerm ta = a.to_term();
  const RdfTerm tb = b.to_term();
  if (ta == tb) return true;
  if (is_simple_string(&ta) && is_simple_string(&tb)) return false;
  if (ta.is_literal() && tb.is_literal()) return std::nullopt;
  return false;
}

std::optional<std::partial_ordering> values_compare(const Value& a, const Value& b) {
  if (a.is_error() || b.is_error()) return std::nullopt;
  const auto na = a.numeric();
  const auto nb = b.numeric();
  if (na && nb) return compare_numeric(*na, *nb);
  const auto ba = a.boolean();
  const auto bb = b.boolean();
  if (ba && bb) return *ba <=> *bb;
  const auto* ta = a.term();
  const auto* tb = b.term();
  if (is_simple_string(ta) && is_simple_string(tb)) {
    auto c = ta->value().compare(tb->value());
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  return std::nullopt;
}

Value arithmetic(K op, const Numeric& a, const Numeric& b) {
  using T = Numeric::Type;
  const T type = std::max(a.type, b.type);
  if (type == T::Integer) {
    if (op == K::Divide) {
      if (b.integer == 0) return Value::error();
      return Value::number(Numeric::from_real(
          T::Decimal, static_cast<double>(a.integer) / static_cast<double>(b.integer)));
    }
    std::int64_t r = 0;
    bool overflow = false;
    switch (op) {
      case K::Add: overflow = __builtin_add_overflow(a.integer, b.integer, &r); break;
      case K::Subtract: overflow = __builtin_sub_overflow(a.integer, b.integer, &r); break;
      case K::Multiply: overflow = __builtin_mul_overflow(a.integer, b.integer, &r); break;
      default: break;
    }
    if (!overflow) return Value::number(Numeric::from_integer(r));
  }
  const double x = a.as_double();
  const double y = b.as_double();
  const T out = type == T::Integer ? T::Decimal : type;
  switch (op) {
    case K::Add: return Value::number(Numeric::from_real(out, x + y));
    case K::Subtract: return Value::number(Numeric::from_real(out, x - y));
    case K::Multiply: return Value::number(Numeric::from_real(out, x * y));
    case K::Divide:
      if (y == 0.0 && out == T::Decimal) return Value::error();
      return Value::number(Numeric::from_real(out, x / y));
    default: return Value::error();
  }
}

const std::regex* compiled_regex(const std::string& pattern, bool icase) {
  thread_local std::unordered_map<std::string, std::optional<std::regex>> cache;
  std::string key = (icase ? "i:" : "-:") + pattern;
  auto it = cache.find(key);
  if (it == cache.end()) {
    std::optional<std::regex> re;
    try {
      auto flags = std::regex::ECMAScript;
      if (icase) flags |= std::regex::icase;
      re.emplace(pattern, flags);
    } catch (const std::regex_error&) {
    }
    if (cache.size() > 4096) cache.clear();
    it = cache.emplace(std::move(key), std::move(re)).first;
  }
  return it->second ? &*it->second : nullptr;
}

class ExprEval {
 public:
  ExprEval(const Bindings& b, const Dataset& ds) : b_(b), ds_(ds) {}

  Value eval(const Expression& e) const {
    switch (e.kind) {
      case K::Var: return Value::ref(b_.find(*e.variable));
      case K::Constant: return Value::ref(&*e.constant);
      case K::Or: {
        auto l = ebv(eval(e.args[0]));
        if (l == true) return Value::boolean(true);
        auto r = ebv(eval(e.args[1]));
        if (r == true) return Value::boolean(true);
        if (l && r) return Value::boolean(false);
        return Value::error();
      }
      case K::And: {
        auto l = ebv(eval(e.args[0]));
        if (l == false) return Value::boolean(false);
        auto r = ebv(eval(e.args[1]));
        if (r == false) return Value::boolean(false);
        if (l && r) return Value::boolean(true);
        return Value::error();
      }
      case K::Not: {
        auto v = ebv(eval(e.args[0]));
        return v ? Value::boolean(!*v) : Value::error();
      }
      case K::Equal:
      case K::NotEqual: {
        auto r = values_equal(eval(e.args[0]), eval(e.args[1]));
        if (!r) return Value::error();
        return Value::boolean(e.kind == K::Equal ? *r : !*r);
      }
      case K::Less:
      case K::LessEqual:
      case K::Greater:
      case K::GreaterEqual: {
        auto c = values_compare(eval(e.args[0]), eval(e.args[1]));
        if (!c) return Value::error();
        if (*c == std::partial_ordering::unordered) return Value::boolean(false);
        switch (e.kind) {
          case K::Less: return Value::boolean(*c < 0);
          case K::LessEqual: return Value::boolean(*c <= 0);
          case K::Greater: return Value::boolean(*c > 0);
          default: return Value::boolean(*c >= 0);
        }
      }
      case K::Add:
      case K::Subtract:
      case K::Multiply:
      case K::Divide: {
        auto a = eval(e.args[0]).numeric();
        if (!a) return Value::error();
        auto b = eval(e.args[1]).numeric();
        if (!b) return Value::error();
        return arithmetic(e.kind, *a, *b);
      }
      case K::UnaryMinus:
      case K::UnaryPlus: {
        auto a = eval(e.args[0]).numeric();
        if (!a) return Value::error();
        if (e.kind == K::UnaryPlus) return Value::number(*a);
        if (a->type == Numeric::Type::Integer) {
          if (a->integer == std::numeric_limits<std::int64_t>::min()) {
            return Value::number(Numeric::from_real(Numeric::Type::Decimal, -a->as_double()));
          }
          return Value::number(Numeric::from_integer(-a->integer));
        }
        return Value::number(Numeric::from_real(a->type, -a->real));
      }
      case K::Exists:
      case K::NotExists: {
        bool found = false;
        for_each_solution(ds_, **e.pattern, b_.materialize(), [&](const Mapping&) {
          found = true;
          return false;
        });
        return Value::boolean(e.kind == K::Exists ? found : !found);
      }
      case K::Call: return call(e);
      case K::Aggregate: throw UnsupportedFeature("aggregate");
    }
    return Value::error();
  }

 private:
  Value call(const Expression& e) const {
    const std::string& f = e.function;
    if (f == "BOUND") return Value::boolean(b_.find(*e.args[0].variable) != nullptr);
    Value a = eval(e.args[0]);
    if (a.is_error()) return a;
    if (f == "SAMETERM") {
      Value b = eval(e.args[1]);
      if (b.is_error()) return b;
      return Value::boolean(a.to_term() == b.to_term());
    }
    if (f == "REGEX") return regex(e, a);
    const RdfTerm t = a.to_term();
    if (f == "STR") {
      if (t.is_blank()) return Value::error();
      return Value::own(RdfTerm::literal(t.value()));
    }
    if (f == "LANG") {
      if (!t.is_literal()) return Value::error();
      return Value::own(RdfTerm::literal(t.language()));
    }
    if (f == "DATATYPE") {
      if (!t.is_literal()) return Value::error();
      return Value::own(RdfTerm::iri(t.datatype()));
    }
    if (f == "ISIRI" || f == "ISURI") return Value::boolean(t.is_iri());
    if (f == "ISBLANK") return Value::boolean(t.is_blank());
    if (f == "ISLITERAL") return Value::boolean(t.is_literal());
    if (f == "ISNUMERIC") return Value::boolean(t.numeric().has_value());
    throw UnsupportedFeature("function " + f);
  }

  Value regex(const Expression& e, const Value& text) const {
    const RdfTerm* t = text.term();
    if (t == nullptr || !t->is_string_like()) return Value::error();
    Value pat = eval(e.args[1]);
    if (!is_simple_string(pat.term())) return Value::error();
    bool icase = false;
    if (e.args.size() == 3) {
      Value fl = eval(e.args[2]);
      if (!is_simple_string(fl.term())) return Value::error();
      for (char c : fl.term()->value()) {
        if (c != 'i') return Value::error();
        icase = true;
      }
    }
    const std::regex* re = compiled_regex(pat.term()->value(), icase);
    if (re == nullptr) return Value::error();
    return Value::boolean(std::regex_search(t->value(), *re));
  }

  const Bindings& b_;
  const Dataset& ds_;
};

using Emit = std::function<bool(const Mapping&)>;

// Depth-first join over the non-filter elements of one group, in order.
// Filters of the group are checked once every element has been joined.
class GroupRunner {
 public:
  GroupRunner(const Dataset& ds, const GroupPattern& g, const Mapping& seed)
      : ds_(ds), seed_(seed) {
    flatten(g);
  }

  bool run(const Emit& emit) { return step(0, seed_, emit); }

 private:
  struct Step {
    const TriplePattern* triple = nullptr;
    const ValuesBlock* values = nullptr;
    const GroupPattern* group = nullptr;
    std::optional<std::vector<Mapping>> solutions;  // cached for subgroups
  };

  void flatten(const GroupPattern& g) {
    for (const auto& el : g.elements) {
      if (const auto* bgp = std::get_if<BasicGraphPattern>(&el)) {
        for (const auto& tp : bgp->triples) steps_.push_back(Step{&tp, nullptr, nullptr, {}});
      } else if (const auto* f = std::get_if<Filter>(&el)) {
        filters_.push_back(&f->constraint);
      } else if (const auto* vb = std::get_if<ValuesBlock>(&el)) {
        steps_.push_back(Step{nullptr, vb, nullptr, {}});
      } else {
        steps_.push_back(Step{nullptr, nullptr, &*std::get<Box<GroupPattern>>(el), {}});
      }
    }
  }

  bool step(std::size_t i, const Mapping& cur, const Emit& emit) {
    if (i == steps_.size()) {
      MappingBindings b(cur);
      ExprEval ev(b, ds_);
      for (const auto* f : filters_) {
        if (ebv(ev.eval(*f)) != true) return true;
      }
      return emit(cur);
    }
    Step& s = steps_[i];
    if (s.triple != nullptr) return triple(i, *s.triple, cur, emit);
    if (s.values != nullptr) {
      for (const auto& row : s.values->rows) {
        Mapping next = cur;
        bool ok = true;
        for (std::size_t c = 0; c < row.size() && ok; ++c) {
          if (!row[c]) continue;
          const RdfTerm* have = next.get(s.values->variables[c]);
          if (have == nullptr) next.set(s.values->variables[c], *row[c]);
          else ok = *have == *row[c];
        }
        if (ok && !step(i + 1, next, emit)) return false;
      }
      return true;
    }
    if (!s.solutions) {
      s.solutions.emplace();
      for_each_solution(ds_, *s.group, seed_, [&](const Mapping& m) {
        s.solutions->push_back(m);
        return true;
      });
    }
    for (const auto& m : *s.solutions) {
      if (cur.compatible(m) && !step(i + 1, cur.merged(m), emit)) return false;
    }
    return true;
  }

  bool triple(std::size_t i, const TriplePattern& tp, const Mapping& cur, const Emit& emit) {
    std::array<const PatternTerm*, 3> pos = {&tp.subject, &tp.predicate, &tp.object};
    std::array<std::optional<Dataset::TermId>, 3> ids;
    std::array<const Variable*, 3> free{};
    for (int k = 0; k < 3; ++k) {
      const RdfTerm* bound = nullptr;
      if (const auto* v = std::get_if<Variable>(pos[k])) {
        bound = cur.get(*v);
        if (bound == nullptr) free[k] = v;
      } else {
        bound = &std::get<RdfTerm>(*pos[k]);
      }
      if (bound != nullptr) {
        ids[k] = ds_.find(*bound);
        if (!ids[k]) return true;
      }
    }
    for (std::uint32_t idx : ds_.candidates(ids[0], ids[1], ids[2])) {
      const auto& t = ds_.id_triple(idx);
      bool ok = true;
      for (int k = 0; k < 3 && ok; ++k) ok = !ids[k] || t[k] == *ids[k];
      if (!ok) continue;
      Mapping next = cur;
      for (int k = 0; k < 3 && ok; ++k) {
        if (free[k] == nullptr) continue;
        const RdfTerm& val = ds_.term(t[k]);
        const RdfTerm* have = next.get(*free[k]);
        if (have == nullptr) next.set(*free[k], val);
        else ok = *have == val;
      }
      if (ok && !step(i + 1, next, emit)) return false;
    }
    return true;
  }

  const Dataset& ds_;
  const Mapping& seed_;
  std::vector<Step> steps_;
  std::vector<const Expression*> filters_;
};

void reject_grouping(const SparqlQuery& q) {
  if (!q.group_by.empty()) throw UnsupportedFeature("group-by");
  if (!q.having.empty()) throw UnsupportedFeature("having");
}

}  // namespace

std::optional<RdfTerm> evaluate(const Expression& e, const Bindings& b, const Dataset& ds) {
  Value v = ExprEval(b, ds).eval(e);
  if (v.is_error()) return std::nullopt;
  return v.to_term();
}

std::optional<bool> effective_boolean(const Expression& e, const Bindings& b, const Dataset& ds) {
  return ebv(ExprEval(b, ds).eval(e));
}

bool for_each_solution(const Dataset& ds, const GroupPattern& g, const Mapping& seed,
                       const std::function<bool(const Mapping&)>& emit) {
  return GroupRunner(ds, g, seed).run(emit);
}

std::vector<Variable> projected_variables(const SparqlQuery& q) {
  return q.select_all ? in_scope_variables(q.where) : q.projection;
}

void sort_solutions(std::vector<Mapping>& rows, const std::vector<OrderCondition>& order,
                    const Dataset& ds) {
  if (order.empty() || rows.size() < 2) return;
  std::vector<std::vector<std::optional<RdfTerm>>> keys(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    MappingBindings b(rows[r]);
    for (const auto& oc : order) keys[r].push_back(evaluate(oc.expression, b, ds));
  }
  std::vector<std::size_t> idx(rows.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    for (std::size_t c = 0; c < order.size(); ++c) {
      const RdfTerm* a = keys[x][c] ? &*keys[x][c] : nullptr;
      const RdfTerm* b = keys[y][c] ? &*keys[y][c] : nullptr;
      auto cmp = order_terms(a, b);
      if (cmp != 0) return order[c].descending ? cmp > 0 : cmp < 0;
    }
    return false;
  });
  std::vector<Mapping> sorted;
  sorted.reserve(rows.size());
  for (auto i : idx) sorted.push_back(std::move(rows[i]));
  rows = std::move(sorted);
}

void slice_solutions(std::vector<Mapping>& rows, std::optional<std::uint64_t> offset,
                     std::optional<std::uint64_t> limit) {
  const std::size_t off = std::min<std::uint64_t>(offset.value_or(0), rows.size());
  rows.erase(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(off));
  if (limit && *limit < rows.size()) rows.resize(*limit);
}

SolutionSeq eval_select(const Dataset& ds, const SparqlQuery& q) {
  if (q.form != QueryForm::Select) throw ContractViolation("eval_select needs a SELECT query");
  reject_grouping(q);
  std::vector<Mapping> rows;
  for_each_solution(ds, q.where, Mapping{}, [&](const Mapping& m) {
    rows.push_back(m);
    return true;
  });
  sort_solutions(rows, q.order_by, ds);
  SolutionSeq out;
  out.variables = projected_variables(q);
  out.rows.reserve(rows.size());
  std::set<Mapping> seen;
  for (auto& m : rows) {
    Mapping p = m.project(out.variables);
    if (q.distinct && !seen.insert(p).second) continue;
    out.rows.push_back(std::move(p));
  }
  slice_solutions(out.rows, q.offset, q.limit);
  return out;
}

bool eval_ask(const Dataset& ds, const SparqlQuery& q) {
  reject_grouping(q);
  bool found = false;
  for_each_solution(ds, q.where, Mapping{}, [&](const Mapping&) {
    found = true;
    return false;
  });
  return found;
}

}  // namespace sprefql
