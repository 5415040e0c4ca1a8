#include "sprefql/rdf.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "sprefql/error.hpp"

namespace sprefql {

namespace {

bool is_integer_datatype(std::string_view dt) {
  if (!dt.starts_with(vocab::xsd)) return false;
  const auto local = dt.substr(vocab::xsd.size());
  static constexpr std::string_view kIntegers[] = {
      "integer", "int", "long", "short", "byte", "nonNegativeInteger", "positiveInteger",
      "nonPositiveInteger", "negativeInteger", "unsignedLong", "unsignedInt", "unsignedShort",
      "unsignedByte"};
  return std::find(std::begin(kIntegers), std::end(kIntegers), local) != std::end(kIntegers);
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string_view strip_sign(std::string_view s) {
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
  return s;
}

bool valid_decimal(std::string_view s) {
  s = strip_sign(s);
  const auto dot = s.find('.');
  if (dot == std::string_view::npos) return all_digits(s);
  const auto ip = s.substr(0, dot);
  const auto fp = s.substr(dot + 1);
  if (ip.empty() && fp.empty()) return false;
  return (ip.empty() || all_digits(ip)) && (fp.empty() || all_digits(fp));
}

bool valid_double(std::string_view s) {
  if (s == "INF" || s == "-INF" || s == "+INF" || s == "NaN") return true;
  const auto e = s.find_first_of("eE");
  if (e == std::string_view::npos) return valid_decimal(s);
  return valid_decimal(s.substr(0, e)) && all_digits(strip_sign(s.substr(e + 1)));
}

std::optional<double> to_double(std::string_view s) {
  if (s == "INF" || s == "+INF") return std::numeric_limits<double>::infinity();
  if (s == "-INF") return -std::numeric_limits<double>::infinity();
  if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::string buf(s);
  // from_chars rejects a bare leading '.', and "1." needs no special casing.
  if (!buf.empty() && buf.front() == '.') buf.insert(0, "0");
  if (buf.size() > 1 && buf[0] == '-' && buf[1] == '.') buf.insert(1, "0");
  double v = 0;
  auto [p, ec] = std::from_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc() || p != buf.data() + buf.size()) return std::nullopt;
  return v;
}

std::string format_real(double v, bool scientific) {
  char buf[64];
  auto fmt = scientific ? std::chars_format::scientific : std::chars_format::fixed;
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, fmt);
  std::string s(buf, p);
  if (!scientific) {
    if (s.find('.') == std::string::npos) s += ".0";
    return s;
  }
  // Canonical XSD double: mantissa with a dot, upper-case E, no '+' or leading zeros.
  auto e = s.find('e');
  std::string mant = s.substr(0, e);
  std::string exp = s.substr(e + 1);
  if (mant.find('.') == std::string::npos) mant += ".0";
  bool neg = !exp.empty() && exp[0] == '-';
  if (!exp.empty() && (exp[0] == '+' || exp[0] == '-')) exp.erase(0, 1);
  exp.erase(0, std::min(exp.find_first_not_of('0'), exp.size() - 1));
  return mant + "E" + (neg ? "-" : "") + exp;
}

int kind_rank(const RdfTerm* t) {
  if (t == nullptr) return 0;
  switch (t->kind()) {
    case TermKind::Blank: return 1;
    case TermKind::Iri: return 2;
    case TermKind::Literal: return 3;
  }
  return 4;
}

}  // namespace

std::partial_ordering compare_numeric(const Numeric& a, const Numeric& b) {
  if (a.type == Numeric::Type::Integer && b.type == Numeric::Type::Integer) {
    return a.integer <=> b.integer;
  }
  return a.as_double() <=> b.as_double();
}

std::optional<Numeric> parse_numeric(std::string_view lexical, std::string_view datatype) {
  if (is_integer_datatype(datatype)) {
    if (!all_digits(strip_sign(lexical))) return std::nullopt;
    std::string_view s = lexical;
    if (s.front() == '+') s.remove_prefix(1);
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size()) return Numeric::from_integer(v);
    // Out of 64-bit range: keep the magnitude approximately.
    auto d = to_double(lexical);
    if (!d) return std::nullopt;
    return Numeric::from_real(Numeric::Type::Decimal, *d);
  }
  if (datatype == vocab::xsd_decimal) {
    if (!valid_decimal(lexical)) return std::nullopt;
    auto d = to_double(lexical);
    if (!d) return std::nullopt;
    return Numeric::from_real(Numeric::Type::Decimal, *d);
  }
  if (datatype == vocab::xsd_double || datatype == vocab::xsd_float) {
    if (!valid_double(lexical)) return std::nullopt;
    auto d = to_double(lexical);
    if (!d) return std::nullopt;
    return Numeric::from_real(
        datatype == vocab::xsd_double ? Numeric::Type::Double : Numeric::Type::Float, *d);
  }
  return std::nullopt;
}

RdfTerm::RdfTerm(TermKind kind, std::string value, std::string datatype, std::string language)
    : kind_(kind),
      value_(std::move(value)),
      datatype_(std::move(datatype)),
      language_(std::move(language)) {
  if (kind_ == TermKind::Literal) numeric_ = parse_numeric(value_, datatype_);
}

RdfTerm RdfTerm::iri(std::string value) {
  if (value.empty()) throw ContractViolation("IRI must be non-empty");
  return RdfTerm(TermKind::Iri, std::move(value), {}, {});
}

RdfTerm RdfTerm::blank(std::string label) {
  if (label.empty()) throw ContractViolation("blank node label must be non-empty");
  return RdfTerm(TermKind::Blank, std::move(label), {}, {});
}

RdfTerm RdfTerm::literal(std::string lexical) {
  return RdfTerm(TermKind::Literal, std::move(lexical), std::string(vocab::xsd_string), {});
}

RdfTerm RdfTerm::typed_literal(std::string lexical, std::string datatype) {
  if (datatype.empty()) datatype = vocab::xsd_string;
  if (datatype == vocab::rdf_lang_string) {
    throw ContractViolation("rdf:langString literal requires a language tag");
  }
  return RdfTerm(TermKind::Literal, std::move(lexical), std::move(datatype), {});
}

RdfTerm RdfTerm::lang_literal(std::string lexical, std::string language) {
  if (language.empty()) return literal(std::move(lexical));
  std::transform(language.begin(), language.end(), language.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return RdfTerm(TermKind::Literal, std::move(lexical), std::string(vocab::rdf_lang_string),
                 std::move(language));
}

RdfTerm RdfTerm::integer(std::int64_t value) {
  return typed_literal(std::to_string(value), std::string(vocab::xsd_integer));
}

RdfTerm RdfTerm::decimal(double value) {
  return typed_literal(format_real(value, false), std::string(vocab::xsd_decimal));
}

RdfTerm RdfTerm::dbl(double value) {
  std::string lex;
  if (std::isnan(value)) lex = "NaN";
  else if (std::isinf(value)) lex = value > 0 ? "INF" : "-INF";
  else lex = format_real(value, true);
  return typed_literal(std::move(lex), std::string(vocab::xsd_double));
}

RdfTerm RdfTerm::boolean(bool value) {
  return typed_literal(value ? "true" : "false", std::string(vocab::xsd_boolean));
}

std::optional<bool> RdfTerm::boolean_value() const {
  if (kind_ != TermKind::Literal || datatype_ != vocab::xsd_boolean) return std::nullopt;
  if (value_ == "true" || value_ == "1") return true;
  if (value_ == "false" || value_ == "0") return false;
  return std::nullopt;
}

bool RdfTerm::is_string_like() const {
  return kind_ == TermKind::Literal &&
         (datatype_ == vocab::xsd_string || datatype_ == vocab::rdf_lang_string);
}

std::strong_ordering RdfTerm::operator<=>(const RdfTerm& o) const {
  if (auto c = kind_ <=> o.kind_; c != 0) return c;
  if (auto c = value_ <=> o.value_; c != 0) return c;
  if (auto c = datatype_ <=> o.datatype_; c != 0) return c;
  return language_ <=> o.language_;
}

Variable::Variable(std::string name) : name_(std::move(name)) {
  if (!valid_name(name_)) throw ContractViolation("invalid variable name '" + name_ + "'");
}

bool Variable::valid_name(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char ch) {
    auto c = static_cast<unsigned char>(ch);
    return std::isalnum(c) || c == '_' || c >= 0x80;
  });
}

Triple Triple::make(RdfTerm s, RdfTerm p, RdfTerm o) {
  if (s.is_literal()) throw ContractViolation("triple subject must be an IRI or blank node");
  if (!p.is_iri()) throw ContractViolation("triple predicate must be an IRI");
  return Triple{std::move(s), std::move(p), std::move(o)};
}

Mapping::Mapping(std::initializer_list<Binding> bindings) {
  for (const auto& [v, t] : bindings) set(v, t);
}

const RdfTerm* Mapping::get(const Variable& v) const {
  auto it = std::lower_bound(bindings_.begin(), bindings_.end(), v,
                             [](const Binding& b, const Variable& key) { return b.first < key; });
  if (it == bindings_.end() || it->first != v) return nullptr;
  return &it->second;
}

void Mapping::set(const Variable& v, RdfTerm t) {
  auto it = std::lower_bound(bindings_.begin(), bindings_.end(), v,
                             [](const Binding& b, const Variable& key) { return b.first < key; });
  if (it != bindings_.end() && it->first == v) {
    it->second = std::move(t);
  } else {
    bindings_.insert(it, Binding{v, std::move(t)});
  }
}

void Mapping::erase(const Variable& v) {
  auto it = std::lower_bound(bindings_.begin(), bindings_.end(), v,
                             [](const Binding& b, const Variable& key) { return b.first < key; });
  if (it != bindings_.end() && it->first == v) bindings_.erase(it);
}

std::vector<Variable> Mapping::domain() const {
  std::vector<Variable> out;
  out.reserve(bindings_.size());
  for (const auto& b : bindings_) out.push_back(b.first);
  return out;
}

bool Mapping::compatible(const Mapping& other) const {
  auto a = bindings_.begin();
  auto b = other.bindings_.begin();
  while (a != bindings_.end() && b != other.bindings_.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      if (a->second != b->second) return false;
      ++a;
      ++b;
    }
  }
  return true;
}

Mapping Mapping::merged(const Mapping& other) const {
  Mapping out;
  out.bindings_.reserve(bindings_.size() + other.bindings_.size());
  std::merge(bindings_.begin(), bindings_.end(), other.bindings_.begin(), other.bindings_.end(),
             std::back_inserter(out.bindings_),
             [](const Binding& x, const Binding& y) { return x.first < y.first; });
  out.bindings_.erase(std::unique(out.bindings_.begin(), out.bindings_.end(),
                                  [](const Binding& x, const Binding& y) {
                                    return x.first == y.first;
                                  }),
                      out.bindings_.end());
  return out;
}

Mapping Mapping::project(const std::vector<Variable>& vars) const {
  Mapping out;
  for (const auto& b : bindings_) {
    if (std::find(vars.begin(), vars.end(), b.first) != vars.end()) out.bindings_.push_back(b);
  }
  return out;
}

std::weak_ordering order_terms(const RdfTerm* a, const RdfTerm* b) {
  const int ra = kind_rank(a);
  const int rb = kind_rank(b);
  if (ra != rb) return ra <=> rb;
  if (a == nullptr) return std::weak_ordering::equivalent;
  if (a->is_literal()) {
    const auto& na = a->numeric();
    const auto& nb = b->numeric();
    if (na && nb) {
      auto c = compare_numeric(*na, *nb);
      if (c == std::partial_ordering::less) return std::weak_ordering::less;
      if (c == std::partial_ordering::greater) return std::weak_ordering::greater;
      if (c == std::partial_ordering::equivalent) return std::weak_ordering::equivalent;
    } else if (na || nb) {
      return na ? std::weak_ordering::less : std::weak_ordering::greater;
    }
  }
  return *a <=> *b;
}

}  // namespace sprefql

std::size_t std::hash<sprefql::RdfTerm>::operator()(const sprefql::RdfTerm& t) const noexcept {
  std::size_t h = std::hash<std::string>{}(t.value());
  h ^= std::hash<std::string>{}(t.datatype()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= std::hash<std::string>{}(t.language()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h ^= static_cast<std::size_t>(t.kind()) * 0x9e3779b97f4a7c15ULL;
  return h;
}
