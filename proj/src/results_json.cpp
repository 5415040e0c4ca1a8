#include "sprefql/results_json.hpp"

#include <json.hpp>

#include "sprefql/error.hpp"

namespace sprefql {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& why) {
  throw BackendError(BackendError::Kind::MalformedResults, why);
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
}

const std::string& string_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) malformed(std::string("missing string field '") + key + "'");
  return it->get_ref<const std::string&>();
}

RdfTerm term_from_json(const json& j) {
  if (!j.is_object()) malformed("binding is not an object");
  const std::string& type = string_field(j, "type");
  const std::string& value = string_field(j, "value");
  try {
    if (type == "uri") return RdfTerm::iri(value);
    if (type == "bnode") return RdfTerm::blank(value);
    if (type == "literal" || type == "typed-literal") {
      if (auto lang = j.find("xml:lang"); lang != j.end()) {
        if (!lang->is_string()) malformed("xml:lang is not a string");
        return RdfTerm::lang_literal(value, lang->get<std::string>());
      }
      if (auto dt = j.find("datatype"); dt != j.end()) {
        if (!dt->is_string()) malformed("datatype is not a string");
        return RdfTerm::typed_literal(value, dt->get<std::string>());
      }
      return RdfTerm::literal(value);
    }
  } catch (const ContractViolation& e) {
    malformed(e.what());
  }
  malformed("unknown term type '" + type + "'");
}

json term_to_json(const RdfTerm& t) {
  json j;
  switch (t.kind()) {
    case TermKind::Iri: j["type"] = "uri"; break;
    case TermKind::Blank: j["type"] = "bnode"; break;
    case TermKind::Literal:
      j["type"] = "literal";
      if (!t.language().empty()) j["xml:lang"] = t.language();
      else if (t.datatype() != vocab::xsd_string) j["datatype"] = t.datatype();
      break;
  }
  j["value"] = t.value();
  return j;
}

}  // namespace

SolutionSeq parse_select_results(std::string_view text) {
  json doc = parse(text);
  if (!doc.is_object()) malformed("document is not an object");
  SolutionSeq out;
  auto head = doc.find("head");
  if (head == doc.end() || !head->is_object()) malformed("missing head");
  if (auto vars = head->find("vars"); vars != head->end()) {
    if (!vars->is_array()) malformed("head.vars is not an array");
    for (const auto& v : *vars) {
      if (!v.is_string() || !Variable::valid_name(v.get<std::string>())) malformed("bad variable name");
      out.variables.emplace_back(v.get<std::string>());
    }
  }
  auto results = doc.find("results");
  if (results == doc.end() || !results->is_object()) malformed("missing results");
  auto bindings = results->find("bindings");
  if (bindings == results->end() || !bindings->is_array()) malformed("missing results.bindings");
  for (const auto& row : *bindings) {
    if (!row.is_object()) malformed("solution is not an object");
    Mapping m;
    for (const auto& [name, val] : row.items()) {
      if (!Variable::valid_name(name)) malformed("bad variable name '" + name + "'");
      m.set(Variable(name), term_from_json(val));
    }
    out.rows.push_back(std::move(m));
  }
  return out;
}

bool parse_ask_results(std::string_view text) {
  json doc = parse(text);
  if (!doc.is_object()) malformed("document is not an object");
  auto b = doc.find("boolean");
  if (b == doc.end() || !b->is_boolean()) malformed("missing boolean");
  return b->get<bool>();
}

std::string write_select_results(const SolutionSeq& s) {
  json doc;
  doc["head"]["vars"] = json::array();
  for (const auto& v : s.variables) doc["head"]["vars"].push_back(v.name());
  json rows = json::array();
  for (const auto& m : s.rows) {
    json row = json::object();
    for (const auto& [v, t] : m.bindings()) row[v.name()] = term_to_json(t);
    rows.push_back(std::move(row));
  }
  doc["results"]["bindings"] = std::move(rows);
  return doc.dump();
}

std::string write_ask_results(bool value) {
  json doc;
  doc["head"] = json::object();
  doc["boolean"] = value;
  return doc.dump();
}

}  // namespace sprefql
