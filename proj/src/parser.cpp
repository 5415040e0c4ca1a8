// Recursive-descent parser shared by the SPARQL subset and the SPREFQL
// extension. The token stream is materialized up front so that the PREFER
// body can backtrack between `( ParetoPref )` and a bracketed constraint.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "sprefql/sparql_parser.hpp"
#include "sprefql/sprefql.hpp"
#include "text_cursor.hpp"

namespace sprefql {

namespace {

using detail::TextCursor;

enum class Tok {
  End,
  IriRef,
  PName,
  Var,
  String,
  LangTag,
  Integer,
  Decimal,
  Double,
  Word,
  BlankLabel,
  Punct,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::string local;  // PName local part
  std::size_t line = 0;
  std::size_t column = 0;
};

bool is_operand(const Token& t) {
  switch (t.kind) {
    case Tok::IriRef:
    case Tok::PName:
    case Tok::Var:
    case Tok::String:
    case Tok::LangTag:
    case Tok::Integer:
    case Tok::Decimal:
    case Tok::Double:
    case Tok::Word:
    case Tok::BlankLabel: return true;
    case Tok::Punct: return t.text == ")" || t.text == "]";
    default: return false;
  }
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : cur_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_ws();
      Token t;
      t.line = cur_.line();
      t.column = cur_.column();
      if (cur_.at_end()) {
        t.kind = Tok::End;
        out.push_back(std::move(t));
        return out;
      }
      const bool after_operand = !out.empty() && is_operand(out.back());
      scan(t, after_operand);
      out.push_back(std::move(t));
    }
  }

 private:
  void skip_ws() {
    while (!cur_.at_end()) {
      char c = cur_.peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        cur_.get();
      } else if (c == '#') {
        while (!cur_.at_end() && cur_.peek() != '\n') cur_.get();
      } else {
        break;
      }
    }
  }

  bool try_iri(Token& t) {
    // IRIREF ::= '<' ([^<>"{}|^`\]-[#x00-#x20])* '>'
    auto rest = cur_.rest();
    std::size_t i = 1;
    while (i < rest.size()) {
      char c = rest[i];
      if (c == '>') break;
      if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' ||
          c == '|' || c == '^' || c == '`' || c == '\\') {
        return false;
      }
      ++i;
    }
    if (i >= rest.size()) return false;
    t.kind = Tok::IriRef;
    t.text = std::string(rest.substr(1, i - 1));
    cur_.advance(i + 1);
    return true;
  }

  void number(Token& t) {
    std::string lex;
    if (cur_.peek() == '+' || cur_.peek() == '-') lex += cur_.get();
    while (is_digit(cur_.peek())) lex += cur_.get();
    t.kind = Tok::Integer;
    if (cur_.peek() == '.' && is_digit(cur_.peek(1))) {
      lex += cur_.get();
      while (is_digit(cur_.peek())) lex += cur_.get();
      t.kind = Tok::Decimal;
    }
    if ((cur_.peek() == 'e' || cur_.peek() == 'E') &&
        (is_digit(cur_.peek(1)) ||
         ((cur_.peek(1) == '+' || cur_.peek(1) == '-') && is_digit(cur_.peek(2))))) {
      lex += cur_.get();
      if (cur_.peek() == '+' || cur_.peek() == '-') lex += cur_.get();
      while (is_digit(cur_.peek())) lex += cur_.get();
      t.kind = Tok::Double;
    }
    t.text = std::move(lex);
  }

  std::string pn_local() {
    std::string local;
    for (;;) {
      char c = cur_.peek();
      if (detail::is_pn_chars(c) || c == ':' || c == '%') {
        local += cur_.get();
      } else if (c == '.' && (detail::is_pn_chars(cur_.peek(1)) || cur_.peek(1) == ':')) {
        local += cur_.get();
      } else if (c == '\\' && cur_.peek(1) != '\0' && !std::isspace(static_cast<unsigned char>(cur_.peek(1)))) {
        cur_.get();
        local += cur_.get();
      } else {
        return local;
      }
    }
  }

  void scan(Token& t, bool after_operand) {
    const char c = cur_.peek();
    const char n = cur_.peek(1);
    if (c == '<' && try_iri(t)) return;
    if ((c == '?' || c == '$') && detail::is_pn_chars(n) && n != '-') {
      cur_.get();
      t.kind = Tok::Var;
      while (detail::is_pn_chars(cur_.peek()) && cur_.peek() != '-') t.text += cur_.get();
      return;
    }
    if (c == '"' || c == '\'') {
      const bool long_form = n == c && cur_.peek(2) == c;
      cur_.advance(long_form ? 3 : 1);
      t.kind = Tok::String;
      t.text = detail::read_string_body(cur_, c, long_form);
      return;
    }
    if (c == '@') {
      cur_.get();
      t.kind = Tok::LangTag;
      while (std::isalnum(static_cast<unsigned char>(cur_.peek())) || cur_.peek() == '-') {
        t.text += cur_.get();
      }
      if (t.text.empty()) cur_.fail("empty language tag");
      return;
    }
    if (is_digit(c) || (c == '.' && is_digit(n)) ||
        (!after_operand && (c == '+' || c == '-') && (is_digit(n) || (n == '.' && is_digit(cur_.peek(2)))))) {
      number(t);
      return;
    }
    if (c == '_' && n == ':') {
      cur_.advance(2);
      t.kind = Tok::BlankLabel;
      while (detail::is_pn_chars(cur_.peek())) t.text += cur_.get();
      return;
    }
    if (detail::is_pn_chars_base(c) || c == ':' || c == '_') {
      std::string word;
      while (detail::is_pn_chars(cur_.peek()) ||
             (cur_.peek() == '.' && detail::is_pn_chars(cur_.peek(1)))) {
        word += cur_.get();
      }
      if (cur_.peek() == ':') {
        cur_.get();
        t.kind = Tok::PName;
        t.text = std::move(word);
        t.local = pn_local();
        return;
      }
      if (word.find('.') != std::string::npos || word.find('-') != std::string::npos) {
        cur_.fail("unexpected '" + word + "'");
      }
      t.kind = Tok::Word;
      t.text = std::move(word);
      return;
    }
    static constexpr std::array<std::string_view, 6> kTwoChar = {"&&", "||", "!=", "<=", ">=", "^^"};
    for (auto p : kTwoChar) {
      if (cur_.starts_with(p)) {
        cur_.advance(2);
        t.kind = Tok::Punct;
        t.text = std::string(p);
        return;
      }
    }
    static constexpr std::string_view kOneChar = "{}()[].,;*=<>!+-/|^?";
    if (kOneChar.find(c) != std::string_view::npos) {
      cur_.get();
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      return;
    }
    cur_.fail(std::string("unexpected character '") + c + "'");
  }

  TextCursor cur_;
};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::toupper(static_cast<unsigned char>(x)) == std::toupper(static_cast<unsigned char>(y));
         });
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

struct BuiltinSpec {
  std::string_view name;
  int min_args;
  int max_args;
};

constexpr BuiltinSpec kBuiltins[] = {
    {"STR", 1, 1},       {"LANG", 1, 1},      {"DATATYPE", 1, 1},  {"BOUND", 1, 1},
    {"ISIRI", 1, 1},     {"ISURI", 1, 1},     {"ISBLANK", 1, 1},   {"ISLITERAL", 1, 1},
    {"ISNUMERIC", 1, 1}, {"SAMETERM", 2, 2},  {"REGEX", 2, 3},
};

constexpr std::string_view kAggregates[] = {"COUNT", "SUM",    "MIN",         "MAX",
                                            "AVG",   "SAMPLE", "GROUP_CONCAT"};

constexpr std::string_view kOtherBuiltins[] = {
    "LANGMATCHES", "IRI",      "URI",     "BNODE",    "RAND",      "ABS",      "CEIL",
    "FLOOR",       "ROUND",    "CONCAT",  "SUBSTR",   "STRLEN",    "REPLACE",  "UCASE",
    "LCASE",       "ENCODE_FOR_URI",      "CONTAINS", "STRSTARTS", "STRENDS",  "STRBEFORE",
    "STRAFTER",    "YEAR",     "MONTH",   "DAY",      "HOURS",     "MINUTES",  "SECONDS",
    "TIMEZONE",    "TZ",       "NOW",     "UUID",     "STRUUID",   "MD5",      "SHA1",
    "SHA256",      "SHA384",   "SHA512",  "COALESCE", "IF",        "STRLANG",  "STRDT"};

const BuiltinSpec* find_builtin(std::string_view word) {
  for (const auto& b : kBuiltins) {
    if (iequals(b.name, word)) return &b;
  }
  return nullptr;
}

bool is_aggregate(std::string_view word) {
  return std::any_of(std::begin(kAggregates), std::end(kAggregates),
                     [&](auto a) { return iequals(a, word); });
}

bool is_other_builtin(std::string_view word) {
  return std::any_of(std::begin(kOtherBuiltins), std::end(kOtherBuiltins),
                     [&](auto a) { return iequals(a, word); });
}

class Parser {
 public:
  Parser(std::string_view text, PrefixMap prefixes)
      : toks_(Lexer(text).run()), prefixes_(std::move(prefixes)) {}

  QueryAst query(bool allow_prefer) {
    QueryAst out;
    prologue();
    if (accept_word("SELECT")) {
      select_query(out, allow_prefer);
    } else if (accept_word("ASK")) {
      ask_query(out.base);
    } else if (word("CONSTRUCT") || word("DESCRIBE")) {
      throw UnsupportedFeature(lower(peek().text) + "-query");
    } else if (word("INSERT") || word("DELETE") || word("LOAD") || word("CLEAR") ||
               word("CREATE") || word("DROP") || word("WITH")) {
      throw UnsupportedFeature("update");
    } else {
      fail("expected SELECT or ASK");
    }
    out.base.prefixes = prefixes_;
    if (peek().kind != Tok::End) fail("unexpected trailing input");
    return out;
  }

  Expression expression_only() {
    Expression e = expression();
    if (peek().kind != Tok::End) fail("unexpected trailing input");
    return e;
  }

  PreferenceExpr body_only() {
    PreferenceExpr p = pareto();
    if (peek().kind != Tok::End) fail("unexpected trailing input");
    return p;
  }

 private:
  // --- token helpers -----------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool word(std::string_view kw, std::size_t k = 0) const {
    return peek(k).kind == Tok::Word && iequals(peek(k).text, kw);
  }
  bool punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool accept_word(std::string_view kw) {
    if (!word(kw)) return false;
    next();
    return true;
  }
  bool accept_punct(std::string_view p) {
    if (!punct(p)) return false;
    next();
    return true;
  }
  void expect_word(std::string_view kw) {
    if (!accept_word(kw)) fail("expected " + std::string(kw));
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(msg + " (found " + found + ")", t.line, t.column);
  }
  static std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
  }

  // --- prologue & query forms -------------------------------------------

  void prologue() {
    for (;;) {
      if (word("BASE")) throw UnsupportedFeature("base");
      if (!accept_word("PREFIX")) return;
      const Token& t = peek();
      if (t.kind != Tok::PName || !t.local.empty()) fail("expected prefix name");
      std::string name = next().text;
      if (peek().kind != Tok::IriRef) fail("expected IRI");
      prefixes_[name] = next().text;
    }
  }

  void dataset_clauses() {
    if (word("FROM")) throw UnsupportedFeature("dataset-clause");
  }

  void select_query(QueryAst& out, bool allow_prefer) {
    SparqlQuery& q = out.base;
    q.form = QueryForm::Select;
    if (accept_word("DISTINCT")) q.distinct = true;
    else if (word("REDUCED")) throw UnsupportedFeature("reduced");
    if (accept_punct("*")) {
      q.select_all = true;
    } else {
      while (peek().kind == Tok::Var || punct("(")) {
        if (punct("(")) throw UnsupportedFeature("select-expression");
        Variable v(next().text);
        if (std::find(q.projection.begin(), q.projection.end(), v) != q.projection.end()) {
          fail("duplicate projection variable ?" + v.name());
        }
        q.projection.push_back(std::move(v));
      }
      if (q.projection.empty()) fail("expected projection");
    }
    dataset_clauses();
    accept_word("WHERE");
    q.where = group();
    solution_modifiers(out, allow_prefer);
  }

  void ask_query(SparqlQuery& q) {
    q.form = QueryForm::Ask;
    dataset_clauses();
    accept_word("WHERE");
    q.where = group();
    if (peek().kind != Tok::End) fail("ASK query takes no solution modifiers");
  }

  void solution_modifiers(QueryAst& out, bool allow_prefer) {
    SparqlQuery& q = out.base;
    if (accept_word("GROUP")) {
      expect_word("BY");
      do {
        q.group_by.push_back(group_condition());
      } while (starts_group_condition());
    }
    if (accept_word("HAVING")) {
      allow_aggregates_ = true;
      do {
        q.having.push_back(constraint());
      } while (starts_constraint());
      allow_aggregates_ = false;
    }
    if (word("PREFER")) {
      if (!allow_prefer) fail("PREFER is not standard SPARQL");
      next();
      out.prefer = prefer_clause();
    }
    if (accept_word("ORDER")) {
      expect_word("BY");
      do {
        q.order_by.push_back(order_condition());
      } while (peek().kind == Tok::Var || word("ASC") || word("DESC") || starts_constraint());
    }
    for (int i = 0; i < 2; ++i) {
      if (!q.limit && accept_word("LIMIT")) q.limit = unsigned_integer();
      else if (!q.offset && accept_word("OFFSET")) q.offset = unsigned_integer();
    }
    if (word("VALUES")) throw UnsupportedFeature("trailing-values");
  }

  std::uint64_t unsigned_integer() {
    if (peek().kind != Tok::Integer || peek().text[0] == '-' || peek().text[0] == '+') {
      fail("expected non-negative integer");
    }
    const std::string& s = next().text;
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc()) fail("integer out of range");
    return v;
  }

  bool starts_group_condition() const {
    return peek().kind == Tok::Var || starts_constraint();
  }

  Expression group_condition() {
    if (peek().kind == Tok::Var) return Expression::var(Variable(next().text));
    if (accept_punct("(")) {
      Expression e = expression();
      if (word("AS")) throw UnsupportedFeature("group-by-alias");
      expect_punct(")");
      return e;
    }
    return constraint();
  }

  OrderCondition order_condition() {
    if (word("ASC") || word("DESC")) {
      bool desc = word("DESC");
      next();
      if (!punct("(")) fail("expected '(' after ASC/DESC");
      next();
      Expression e = expression();
      expect_punct(")");
      return {std::move(e), desc};
    }
    if (peek().kind == Tok::Var) return {Expression::var(Variable(next().text)), false};
    return {constraint(), false};
  }

  // --- PREFER --------------------------------------------------------------

  PreferClause prefer_clause() {
    PreferClause c;
    c.left = var_list();
    expect_word("TO");
    c.right = var_list();
    expect_word("IF");
    c.body = pareto();
    return c;
  }

  std::vector<Variable> var_list() {
    std::vector<Variable> out;
    if (peek().kind == Tok::Var) {
      out.emplace_back(next().text);
      return out;
    }
    expect_punct("(");
    while (peek().kind == Tok::Var) out.emplace_back(next().text);
    if (out.empty()) fail("expected variable");
    expect_punct(")");
    return out;
  }

  PreferenceExpr pareto() {
    PreferenceExpr lhs = prioritized();
    if (accept_word("AND")) return PreferenceExpr::pareto(std::move(lhs), pareto());
    return lhs;
  }

  PreferenceExpr prioritized() {
    PreferenceExpr lhs = basic_pref();
    if (word("PRIOR") && word("TO", 1)) {
      next();
      next();
      return PreferenceExpr::prioritized(std::move(lhs), prioritized());
    }
    return lhs;
  }

  PreferenceExpr basic_pref() {
    if (punct("(")) {
      const std::size_t saved = pos_;
      try {
        next();
        PreferenceExpr inner = pareto();
        expect_punct(")");
        return inner;
      } catch (const SyntaxError&) {
        pos_ = saved;
      }
    }
    return PreferenceExpr::simple(constraint());
  }

  // --- graph patterns ------------------------------------------------------

  GroupPattern group() {
    expect_punct("{");
    if (word("SELECT")) throw UnsupportedFeature("subquery");
    GroupPattern g;
    for (;;) {
      if (accept_punct("}")) return g;
      if (peek().kind == Tok::End) fail("expected '}'");
      if (accept_word("FILTER")) {
        g.elements.emplace_back(Filter{constraint()});
        accept_punct(".");
        continue;
      }
      if (accept_word("VALUES")) {
        g.elements.emplace_back(values_block());
        accept_punct(".");
        continue;
      }
      for (auto kw : {"OPTIONAL", "MINUS", "GRAPH", "SERVICE", "BIND"}) {
        if (word(kw)) throw UnsupportedFeature(lower(kw));
      }
      if (punct("{")) {
        GroupPattern sub = group();
        if (word("UNION")) throw UnsupportedFeature("union");
        g.elements.emplace_back(Box<GroupPattern>(std::move(sub)));
        accept_punct(".");
        continue;
      }
      if (g.elements.empty() || !std::holds_alternative<BasicGraphPattern>(g.elements.back())) {
        g.elements.emplace_back(BasicGraphPattern{});
      }
      triples_same_subject(std::get<BasicGraphPattern>(g.elements.back()));
      if (accept_punct(".")) continue;
      if (!(punct("}") || punct("{") || peek().kind == Tok::Word)) fail("expected '.' or '}'");
    }
  }

  void triples_same_subject(BasicGraphPattern& bgp) {
    if (punct("[")) throw UnsupportedFeature("blank-node-property-list");
    if (punct("(")) throw UnsupportedFeature("collection");
    PatternTerm subject = var_or_term();
    for (;;) {
      PatternTerm verb = verb_term();
      for (;;) {
        if (punct("[")) throw UnsupportedFeature("blank-node-property-list");
        if (punct("(")) throw UnsupportedFeature("collection");
        bgp.triples.push_back({subject, verb, var_or_term()});
        if (!accept_punct(",")) break;
      }
      if (!accept_punct(";")) return;
      while (accept_punct(";")) {
      }
      if (punct(".") || punct("}")) return;
    }
  }

  PatternTerm verb_term() {
    if (punct("^") || punct("!") || punct("(")) throw UnsupportedFeature("property-path");
    PatternTerm verb = [&]() -> PatternTerm {
      if (peek().kind == Tok::Word && peek().text == "a") {
        next();
        return RdfTerm::iri(std::string(vocab::rdf_type));
      }
      if (peek().kind == Tok::Var) return Variable(next().text);
      if (peek().kind == Tok::IriRef || peek().kind == Tok::PName) return iri();
      fail("expected predicate");
    }();
    for (auto p : {"/", "|", "*", "+", "?"}) {
      if (punct(p)) throw UnsupportedFeature("property-path");
    }
    return verb;
  }

  PatternTerm var_or_term() {
    const Token& t = peek();
    if (t.kind == Tok::Var) return Variable(next().text);
    if (t.kind == Tok::BlankLabel || punct("[")) throw UnsupportedFeature("blank-node-pattern");
    if (t.kind == Tok::IriRef || t.kind == Tok::PName) return iri();
    if (auto lit = try_literal()) return *lit;
    fail("expected variable or term");
  }

  RdfTerm iri() {
    const Token& t = next();
    if (t.kind == Tok::IriRef) return RdfTerm::iri(t.text);
    if (t.kind == Tok::PName) {
      auto it = prefixes_.find(t.text);
      if (it == prefixes_.end()) {
        throw SyntaxError("undefined prefix '" + t.text + ":'", t.line, t.column);
      }
      return RdfTerm::iri(it->second + t.local);
    }
    throw SyntaxError("expected IRI", t.line, t.column);
  }

  std::optional<RdfTerm> try_literal() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::String: {
        std::string lex = next().text;
        if (peek().kind == Tok::LangTag) return RdfTerm::lang_literal(std::move(lex), next().text);
        if (accept_punct("^^")) {
          if (peek().kind != Tok::IriRef && peek().kind != Tok::PName) fail("expected datatype IRI");
          return RdfTerm::typed_literal(std::move(lex), iri().value());
        }
        return RdfTerm::literal(std::move(lex));
      }
      case Tok::Integer: return RdfTerm::typed_literal(next().text, std::string(vocab::xsd_integer));
      case Tok::Decimal: return RdfTerm::typed_literal(next().text, std::string(vocab::xsd_decimal));
      case Tok::Double: return RdfTerm::typed_literal(next().text, std::string(vocab::xsd_double));
      case Tok::Word:
        if (t.text == "true" || t.text == "false") {
          return RdfTerm::boolean(next().text == "true");
        }
        return std::nullopt;
      default: return std::nullopt;
    }
  }

  std::optional<RdfTerm> data_value() {
    if (accept_word("UNDEF")) return std::nullopt;
    if (peek().kind == Tok::IriRef || peek().kind == Tok::PName) return iri();
    if ((punct("-") || punct("+")) &&
        (peek(1).kind == Tok::Integer || peek(1).kind == Tok::Decimal || peek(1).kind == Tok::Double)) {
      std::string sign = next().text;
      RdfTerm t = *try_literal();
      return RdfTerm::typed_literal(sign + t.value(), t.datatype());
    }
    if (auto lit = try_literal()) return lit;
    fail("expected data value");
  }

  ValuesBlock values_block() {
    ValuesBlock vb;
    if (peek().kind == Tok::Var) {
      vb.variables.emplace_back(next().text);
      expect_punct("{");
      while (!accept_punct("}")) {
        if (peek().kind == Tok::End) fail("expected '}'");
        vb.rows.push_back({data_value()});
      }
      return vb;
    }
    expect_punct("(");
    while (peek().kind == Tok::Var) {
      Variable v(next().text);
      if (std::find(vb.variables.begin(), vb.variables.end(), v) != vb.variables.end()) {
        fail("duplicate VALUES variable");
      }
      vb.variables.push_back(std::move(v));
    }
    expect_punct(")");
    expect_punct("{");
    while (!accept_punct("}")) {
      expect_punct("(");
      std::vector<std::optional<RdfTerm>> row;
      while (!punct(")")) {
        if (peek().kind == Tok::End) fail("expected ')'");
        row.push_back(data_value());
      }
      if (row.size() != vb.variables.size()) fail("VALUES row width differs from variable list");
      next();
      vb.rows.push_back(std::move(row));
    }
    return vb;
  }

  // --- expressions ---------------------------------------------------------

  bool starts_constraint() const {
    if (punct("(")) return true;
    const Token& t = peek();
    if (t.kind == Tok::IriRef || t.kind == Tok::PName) return punct("(", 1);
    if (t.kind != Tok::Word) return false;
    return find_builtin(t.text) || is_aggregate(t.text) || is_other_builtin(t.text) ||
           iequals(t.text, "EXISTS") || (iequals(t.text, "NOT") && word("EXISTS", 1));
  }

  Expression constraint() {
    if (accept_punct("(")) {
      Expression e = expression();
      expect_punct(")");
      return e;
    }
    if (peek().kind == Tok::Word) {
      if (auto call = builtin_call()) return std::move(*call);
    }
    if ((peek().kind == Tok::IriRef || peek().kind == Tok::PName) && punct("(", 1)) {
      throw UnsupportedFeature("extension-function");
    }
    fail("expected constraint");
  }

  Expression expression() { return or_expr(); }

  Expression or_expr() {
    Expression lhs = and_expr();
    while (accept_punct("||")) lhs = Expression::binary(Expression::Kind::Or, std::move(lhs), and_expr());
    return lhs;
  }

  Expression and_expr() {
    Expression lhs = relational();
    while (accept_punct("&&")) {
      lhs = Expression::binary(Expression::Kind::And, std::move(lhs), relational());
    }
    return lhs;
  }

  Expression relational() {
    using K = Expression::Kind;
    Expression lhs = additive();
    static const std::pair<std::string_view, K> kOps[] = {
        {"=", K::Equal},     {"!=", K::NotEqual}, {"<", K::Less},
        {"<=", K::LessEqual}, {">", K::Greater},   {">=", K::GreaterEqual}};
    for (const auto& [text, kind] : kOps) {
      if (punct(text)) {
        next();
        return Expression::binary(kind, std::move(lhs), additive());
      }
    }
    if (word("IN") || (word("NOT") && word("IN", 1))) throw UnsupportedFeature("in-operator");
    return lhs;
  }

  Expression additive() {
    using K = Expression::Kind;
    Expression lhs = multiplicative();
    for (;;) {
      if (accept_punct("+")) lhs = Expression::binary(K::Add, std::move(lhs), multiplicative());
      else if (accept_punct("-")) lhs = Expression::binary(K::Subtract, std::move(lhs), multiplicative());
      else return lhs;
    }
  }

  Expression multiplicative() {
    using K = Expression::Kind;
    Expression lhs = unary();
    for (;;) {
      if (accept_punct("*")) lhs = Expression::binary(K::Multiply, std::move(lhs), unary());
      else if (accept_punct("/")) lhs = Expression::binary(K::Divide, std::move(lhs), unary());
      else return lhs;
    }
  }

  Expression unary() {
    using K = Expression::Kind;
    if (accept_punct("!")) return Expression::unary(K::Not, unary());
    if (accept_punct("-")) return Expression::unary(K::UnaryMinus, unary());
    if (accept_punct("+")) return Expression::unary(K::UnaryPlus, unary());
    return primary();
  }

  Expression primary() {
    if (accept_punct("(")) {
      Expression e = expression();
      expect_punct(")");
      return e;
    }
    const Token& t = peek();
    if (t.kind == Tok::Var) return Expression::var(Variable(next().text));
    if (t.kind == Tok::IriRef || t.kind == Tok::PName) {
      if (punct("(", 1)) throw UnsupportedFeature("extension-function");
      return Expression::term(iri());
    }
    if (auto lit = try_literal()) return Expression::term(std::move(*lit));
    if (t.kind == Tok::Word) {
      if (auto call = builtin_call()) return std::move(*call);
      fail("unknown keyword");
    }
    fail("expected expression");
  }

  std::optional<Expression> builtin_call() {
    const Token& t = peek();
    if (iequals(t.text, "EXISTS")) {
      next();
      return Expression::exists(group(), false);
    }
    if (iequals(t.text, "NOT") && word("EXISTS", 1)) {
      next();
      next();
      return Expression::exists(group(), true);
    }
    if (is_aggregate(t.text)) return aggregate();
    if (is_other_builtin(t.text)) throw UnsupportedFeature("function " + upper(t.text));
    const BuiltinSpec* spec = find_builtin(t.text);
    if (spec == nullptr) return std::nullopt;
    std::string name = upper(next().text);
    expect_punct("(");
    std::vector<Expression> args;
    if (name == "BOUND") {
      if (peek().kind != Tok::Var) fail("BOUND expects a variable");
      args.push_back(Expression::var(Variable(next().text)));
    } else if (!punct(")")) {
      args.push_back(expression());
      while (accept_punct(",")) args.push_back(expression());
    }
    expect_punct(")");
    if (static_cast<int>(args.size()) < spec->min_args || static_cast<int>(args.size()) > spec->max_args) {
      fail("wrong number of arguments to " + name);
    }
    return Expression::call(std::move(name), std::move(args));
  }

  Expression aggregate() {
    if (!allow_aggregates_) fail("aggregate outside HAVING");
    Expression e;
    e.kind = Expression::Kind::Aggregate;
    e.function = upper(next().text);
    expect_punct("(");
    e.distinct = accept_word("DISTINCT");
    if (e.function == "COUNT" && accept_punct("*")) {
      e.star = true;
    } else {
      e.args.push_back(expression());
    }
    if (accept_punct(";")) throw UnsupportedFeature("group-concat-separator");
    expect_punct(")");
    return e;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  PrefixMap prefixes_;
  bool allow_aggregates_ = false;
};

void check_free_variables(const PreferenceExpr& body, const std::set<Variable>& allowed,
                          std::vector<Diagnostic>& out) {
  if (body.kind != PreferenceExpr::Kind::Simple) {
    for (const auto& op : body.operands) check_free_variables(op, allowed, out);
    return;
  }
  std::set<Variable> free;
  collect_free_variables(body.constraint, free);
  for (const auto& v : free) {
    if (!allowed.contains(v)) {
      out.push_back({"free-variable", "?" + v.name() + " is in neither PREFER variable list"});
    }
  }
}

}  // namespace

SparqlQuery parse_sparql(std::string_view text) {
  return Parser(text, {}).query(false).base;
}

Expression parse_expression(std::string_view text, const PrefixMap& prefixes) {
  return Parser(text, prefixes).expression_only();
}

QueryAst parse_sprefql_unchecked(std::string_view text) {
  return Parser(text, {}).query(true);
}

QueryAst parse_sprefql(std::string_view text) {
  QueryAst q = parse_sprefql_unchecked(text);
  if (auto diags = validate(q); !diags.empty()) throw IllFormedPrefer(std::move(diags));
  return q;
}

PreferenceExpr parse_preference_body(std::string_view text, const PrefixMap& prefixes) {
  return Parser(text, prefixes).body_only();
}

std::vector<Diagnostic> validate(const QueryAst& q) {
  std::vector<Diagnostic> out;
  if (!q.prefer) return out;
  const PreferClause& p = *q.prefer;
  if (q.base.form != QueryForm::Select || q.base.select_all) {
    out.push_back({"projection", "PREFER requires a SELECT query with an explicit variable list"});
  }
  const std::size_t n = q.base.projection.size();
  if (q.base.form == QueryForm::Select && !q.base.select_all &&
      (p.left.size() != n || p.right.size() != n)) {
    out.push_back({"arity", "PREFER lists have " + std::to_string(p.left.size()) + " and " +
                                std::to_string(p.right.size()) + " variables; SELECT projects " +
                                std::to_string(n)});
  }
  std::set<Variable> seen;
  for (const auto* list : {&p.left, &p.right}) {
    for (const auto& v : *list) {
      if (!seen.insert(v).second) {
        out.push_back({"distinct", "?" + v.name() + " appears more than once in the PREFER lists"});
      }
    }
  }
  check_free_variables(p.body, seen, out);
  return out;
}

bool PreferenceExpr::intrinsic() const {
  if (kind == Kind::Simple) return !mentions_pattern(constraint);
  return std::all_of(operands.begin(), operands.end(), [](const auto& o) { return o.intrinsic(); });
}

}  // namespace sprefql
