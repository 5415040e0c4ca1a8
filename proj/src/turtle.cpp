#include "sprefql/turtle.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "text_cursor.hpp"

namespace sprefql {

namespace {

using detail::TextCursor;

class TurtleParser {
 public:
  explicit TurtleParser(std::string_view text) : cur_(text) {}

  Dataset parse() {
    skip_ws();
    while (!cur_.at_end()) {
      statement();
      skip_ws();
    }
    return std::move(ds_);
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

  void expect(char c) {
    skip_ws();
    if (cur_.peek() != c) cur_.fail(std::string("expected '") + c + "'");
    cur_.get();
  }

  bool keyword_ci(std::string_view kw) const {
    auto r = cur_.rest();
    if (r.size() < kw.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(r[i])) != kw[i]) return false;
    }
    return r.size() == kw.size() || !detail::is_pn_chars(r[kw.size()]);
  }

  void statement() {
    if (cur_.starts_with("@prefix")) {
      cur_.advance(7);
      prefix_decl();
      expect('.');
      return;
    }
    if (keyword_ci("PREFIX")) {
      cur_.advance(6);
      prefix_decl();
      return;
    }
    if (cur_.starts_with("@base") || keyword_ci("BASE")) cur_.fail("base directive is not supported");
    triples();
    expect('.');
  }

  void prefix_decl() {
    skip_ws();
    std::string name = pn_prefix();
    if (cur_.peek() != ':') cur_.fail("expected ':' after prefix name");
    cur_.get();
    skip_ws();
    std::string iri = iri_ref();
    ds_.prefixes()[name] = iri;  // redefinition: last wins
  }

  std::string pn_prefix() {
    std::string out;
    if (detail::is_pn_chars_base(cur_.peek())) {
      while (detail::is_pn_chars(cur_.peek()) || cur_.peek() == '.') out += cur_.get();
      if (out.back() == '.') cur_.fail("prefix name may not end with '.'");
    }
    return out;
  }

  std::string iri_ref() {
    if (cur_.peek() != '<') cur_.fail("expected IRI");
    cur_.get();
    std::string out;
    while (!cur_.at_end() && cur_.peek() != '>') {
      char c = cur_.peek();
      if (c == ' ' || c == '\n' || c == '"' || c == '{' || c == '}' || c == '<') {
        cur_.fail("invalid character in IRI");
      }
      if (c == '\\') {
        cur_.get();
        char e = cur_.at_end() ? '\0' : cur_.get();
        if (e != 'u' && e != 'U') cur_.fail("bad escape in IRI");
        const int digits = e == 'u' ? 4 : 8;
        std::uint32_t cp = 0;
        for (int i = 0; i < digits; ++i) {
          char h = cur_.at_end() ? '\0' : cur_.get();
          cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(static_cast<unsigned char>(h))
                                                        ? h - '0'
                                                        : (std::tolower(h) - 'a' + 10));
        }
        detail::append_utf8(out, cp);
        continue;
      }
      out += cur_.get();
    }
    if (cur_.at_end()) cur_.fail("unterminated IRI");
    cur_.get();
    return out;
  }

  RdfTerm prefixed_name() {
    const auto line = cur_.line();
    const auto col = cur_.column();
    std::string prefix = pn_prefix();
    if (cur_.peek() != ':') cur_.fail("expected ':' in prefixed name");
    cur_.get();
    std::string local;
    while (!cur_.at_end()) {
      char c = cur_.peek();
      if (detail::is_pn_chars(c) || c == ':' || c == '%') {
        local += cur_.get();
      } else if (c == '.' && (detail::is_pn_chars(cur_.peek(1)) || cur_.peek(1) == ':')) {
        local += cur_.get();
      } else if (c == '\\' && cur_.peek(1) != '\0') {
        cur_.get();
        local += cur_.get();
      } else {
        break;
      }
    }
    auto it = ds_.prefixes().find(prefix);
    if (it == ds_.prefixes().end()) {
      throw SyntaxError("undefined prefix '" + prefix + ":'", line, col);
    }
    return RdfTerm::iri(it->second + local);
  }

  RdfTerm fresh_blank() { return RdfTerm::blank("b" + std::to_string(next_blank_++)); }

  RdfTerm blank_label() {
    cur_.advance(2);  // "_:"
    std::string label;
    while (detail::is_pn_chars(cur_.peek()) ||
           (cur_.peek() == '.' && detail::is_pn_chars(cur_.peek(1)))) {
      label += cur_.get();
    }
    if (label.empty()) cur_.fail("empty blank node label");
    auto [it, inserted] = blank_labels_.try_emplace(label, RdfTerm::blank("x"));
    if (inserted) it->second = fresh_blank();
    return it->second;
  }

  RdfTerm iri_or_pname() {
    if (cur_.peek() == '<') return RdfTerm::iri(iri_ref());
    return prefixed_name();
  }

  RdfTerm subject() {
    skip_ws();
    char c = cur_.peek();
    if (c == '<' || detail::is_pn_chars_base(c) || c == ':') return iri_or_pname();
    if (c == '_' && cur_.peek(1) == ':') return blank_label();
    if (c == '[') return blank_property_list();
    if (c == '(') cur_.fail("collections are not supported");
    cur_.fail("expected subject");
  }

  RdfTerm predicate() {
    skip_ws();
    if (cur_.peek() == 'a' && !detail::is_pn_chars(cur_.peek(1)) && cur_.peek(1) != ':') {
      cur_.get();
      return RdfTerm::iri(std::string(vocab::rdf_type));
    }
    char c = cur_.peek();
    if (c == '<' || detail::is_pn_chars_base(c) || c == ':') return iri_or_pname();
    cur_.fail("expected predicate");
  }

  RdfTerm blank_property_list() {
    cur_.get();  // '['
    RdfTerm node = fresh_blank();
    skip_ws();
    if (cur_.peek() != ']') predicate_object_list(node);
    expect(']');
    return node;
  }

  RdfTerm object() {
    skip_ws();
    char c = cur_.peek();
    if (c == '"' || c == '\'') return string_literal();
    if (c == '_' && cur_.peek(1) == ':') return blank_label();
    if (c == '[') return blank_property_list();
    if (c == '(') cur_.fail("collections are not supported");
    if (c == '+' || c == '-' || c == '.' || (c >= '0' && c <= '9')) return numeric_literal();
    if (keyword_word("true")) return RdfTerm::boolean(true);
    if (keyword_word("false")) return RdfTerm::boolean(false);
    if (c == '<' || detail::is_pn_chars_base(c) || c == ':') return iri_or_pname();
    cur_.fail("expected object");
  }

  bool keyword_word(std::string_view w) {
    if (!cur_.starts_with(w)) return false;
    char n = cur_.peek(w.size());
    if (detail::is_pn_chars(n) || n == ':') return false;
    cur_.advance(w.size());
    return true;
  }

  RdfTerm string_literal() {
    char q = cur_.peek();
    bool long_form = cur_.peek(1) == q && cur_.peek(2) == q;
    cur_.advance(long_form ? 3 : 1);
    std::string lex = detail::read_string_body(cur_, q, long_form);
    if (cur_.peek() == '@') {
      cur_.get();
      std::string lang;
      while (std::isalnum(static_cast<unsigned char>(cur_.peek())) || cur_.peek() == '-') {
        lang += cur_.get();
      }
      if (lang.empty()) cur_.fail("empty language tag");
      return RdfTerm::lang_literal(std::move(lex), std::move(lang));
    }
    if (cur_.peek() == '^' && cur_.peek(1) == '^') {
      cur_.advance(2);
      RdfTerm dt = iri_or_pname();
      return RdfTerm::typed_literal(std::move(lex), dt.value());
    }
    return RdfTerm::literal(std::move(lex));
  }

  RdfTerm numeric_literal() {
    std::string lex;
    if (cur_.peek() == '+' || cur_.peek() == '-') lex += cur_.get();
    auto digits = [&] {
      std::size_t n = 0;
      while (std::isdigit(static_cast<unsigned char>(cur_.peek()))) {
        lex += cur_.get();
        ++n;
      }
      return n;
    };
    std::size_t int_digits = digits();
    bool is_decimal = false;
    if (cur_.peek() == '.' && std::isdigit(static_cast<unsigned char>(cur_.peek(1)))) {
      lex += cur_.get();
      digits();
      is_decimal = true;
    } else if (int_digits == 0) {
      cur_.fail("malformed number");
    }
    if (cur_.peek() == 'e' || cur_.peek() == 'E') {
      lex += cur_.get();
      if (cur_.peek() == '+' || cur_.peek() == '-') lex += cur_.get();
      if (digits() == 0) cur_.fail("malformed exponent");
      return RdfTerm::typed_literal(std::move(lex), std::string(vocab::xsd_double));
    }
    return RdfTerm::typed_literal(
        std::move(lex), std::string(is_decimal ? vocab::xsd_decimal : vocab::xsd_integer));
  }

  void predicate_object_list(const RdfTerm& subj) {
    for (;;) {
      RdfTerm pred = predicate();
      for (;;) {
        RdfTerm obj = object();
        ds_.add(Triple::make(subj, pred, std::move(obj)));
        skip_ws();
        if (cur_.peek() != ',') break;
        cur_.get();
      }
      skip_ws();
      if (cur_.peek() != ';') return;
      while (cur_.peek() == ';') {
        cur_.get();
        skip_ws();
      }
      char c = cur_.peek();
      if (c == '.' || c == ']' || cur_.at_end()) return;
    }
  }

  void triples() {
    skip_ws();
    const bool bracketed = cur_.peek() == '[';
    RdfTerm subj = subject();
    skip_ws();
    if (bracketed && cur_.peek() == '.') return;
    predicate_object_list(subj);
  }

  TextCursor cur_;
  Dataset ds_;
  std::map<std::string, RdfTerm> blank_labels_;
  std::size_t next_blank_ = 0;
};

std::string escape_ntriples(std::string_view s) {
  std::string out;
  out.reserve(s.size());
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
  return out;
}

}  // namespace

Dataset load_turtle(std::string_view text) { return TurtleParser(text).parse(); }

std::string ntriples_term(const RdfTerm& t) {
  switch (t.kind()) {
    case TermKind::Iri: return "<" + t.value() + ">";
    case TermKind::Blank: return "_:" + t.value();
    case TermKind::Literal: {
      std::string out = "\"" + escape_ntriples(t.value()) + "\"";
      if (!t.language().empty()) return out + "@" + t.language();
      if (t.datatype() != vocab::xsd_string) out += "^^<" + t.datatype() + ">";
      return out;
    }
  }
  return {};
}

std::string write_ntriples(const Dataset& ds) {
  std::vector<std::string> lines;
  lines.reserve(ds.size());
  for (const auto& t : ds.triples()) {
    lines.push_back(ntriples_term(t.subject) + " " + ntriples_term(t.predicate) + " " +
                    ntriples_term(t.object) + " .");
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

}  // namespace sprefql
