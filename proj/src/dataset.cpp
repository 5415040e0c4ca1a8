#include "sprefql/dataset.hpp"

#include <algorithm>
#include <set>

namespace sprefql {

Dataset::TermId Dataset::intern(const RdfTerm& t) {
  auto it = term_ids_.find(t);
  if (it != term_ids_.end()) return it->second;
  const auto id = static_cast<TermId>(terms_.size());
  terms_.push_back(t);
  term_ids_.emplace(t, id);
  return id;
}

bool Dataset::add(const Triple& t) {
  IdTriple ids{intern(t.subject), intern(t.predicate), intern(t.object)};
  if (!seen_.insert(ids).second) return false;
  const auto idx = static_cast<std::uint32_t>(id_triples_.size());
  id_triples_.push_back(ids);
  all_.push_back(idx);
  for (std::size_t pos = 0; pos < 3; ++pos) index_[pos][ids[pos]].push_back(idx);
  return true;
}

std::optional<Dataset::TermId> Dataset::find(const RdfTerm& t) const {
  auto it = term_ids_.find(t);
  if (it == term_ids_.end()) return std::nullopt;
  return it->second;
}

Triple Dataset::triple(std::size_t i) const {
  const auto& ids = id_triples_[i];
  return Triple{terms_[ids[0]], terms_[ids[1]], terms_[ids[2]]};
}

std::vector<Triple> Dataset::triples() const {
  std::vector<Triple> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(triple(i));
  return out;
}

std::span<const std::uint32_t> Dataset::candidates(std::optional<TermId> s,
                                                   std::optional<TermId> p,
                                                   std::optional<TermId> o) const {
  static const std::vector<std::uint32_t> kEmpty;
  std::span<const std::uint32_t> best(all_);
  const std::optional<TermId> bound[3] = {s, p, o};
  for (std::size_t pos = 0; pos < 3; ++pos) {
    if (!bound[pos]) continue;
    auto it = index_[pos].find(*bound[pos]);
    if (it == index_[pos].end()) return kEmpty;
    if (it->second.size() < best.size()) best = it->second;
  }
  return best;
}

bool Dataset::same_triples(const Dataset& other) const {
  if (size() != other.size()) return false;
  auto a = triples();
  auto b = other.triples();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

SolutionSeq match_pattern(const Dataset& ds, const TriplePattern& tp) {
  SolutionSeq out;
  const PatternTerm* parts[3] = {&tp.subject, &tp.predicate, &tp.object};
  std::optional<Dataset::TermId> bound[3];
  for (std::size_t i = 0; i < 3; ++i) {
    if (const auto* v = std::get_if<Variable>(parts[i])) {
      if (std::find(out.variables.begin(), out.variables.end(), *v) == out.variables.end()) {
        out.variables.push_back(*v);
      }
      continue;
    }
    auto id = ds.find(std::get<RdfTerm>(*parts[i]));
    if (!id) return out;
    bound[i] = id;
  }
  for (auto idx : ds.candidates(bound[0], bound[1], bound[2])) {
    const auto& t = ds.id_triple(idx);
    Mapping m;
    bool ok = true;
    for (std::size_t i = 0; i < 3 && ok; ++i) {
      if (bound[i]) {
        ok = t[i] == *bound[i];
        continue;
      }
      const auto& v = std::get<Variable>(*parts[i]);
      const RdfTerm& value = ds.term(t[i]);
      if (const auto* prev = m.get(v)) {
        ok = *prev == value;
      } else {
        m.set(v, value);
      }
    }
    if (ok) out.rows.push_back(std::move(m));
  }
  return out;
}

}  // namespace sprefql
