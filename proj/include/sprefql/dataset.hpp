#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sprefql/rdf.hpp"

namespace sprefql {

using PrefixMap = std::map<std::string, std::string>;

/// In-memory triple store with set semantics. Terms are interned; triples keep
/// insertion order, which fixes the order of pattern matches.
class Dataset {
 public:
  using TermId = std::uint32_t;
  using IdTriple = std::array<TermId, 3>;

  /// Adds a triple; returns false when it was already present.
  bool add(const Triple& t);

  std::size_t size() const { return id_triples_.size(); }
  bool empty() const { return id_triples_.empty(); }

  std::optional<TermId> find(const RdfTerm& t) const;
  const RdfTerm& term(TermId id) const { return terms_[id]; }
  const IdTriple& id_triple(std::size_t i) const { return id_triples_[i]; }
  Triple triple(std::size_t i) const;
  std::vector<Triple> triples() const;

  /// Indices of triples matching the given bound positions, in insertion
  /// order. Unbound positions are wildcards; the returned list may contain
  /// triples that fail the other bound positions (caller re-checks).
  std::span<const std::uint32_t> candidates(std::optional<TermId> s, std::optional<TermId> p,
                                            std::optional<TermId> o) const;

  PrefixMap& prefixes() { return prefixes_; }
  const PrefixMap& prefixes() const { return prefixes_; }

  /// Set equality over triples (prefixes ignored).
  bool same_triples(const Dataset& other) const;

 private:
  TermId intern(const RdfTerm& t);

  struct IdTripleHash {
    std::size_t operator()(const IdTriple& t) const noexcept {
      return (static_cast<std::size_t>(t[0]) * 0x9e3779b1u) ^ (static_cast<std::size_t>(t[1]) << 21) ^
             (static_cast<std::size_t>(t[2]) * 0x85ebca6bu);
    }
  };

  std::vector<RdfTerm> terms_;
  std::unordered_map<RdfTerm, TermId> term_ids_;
  std::vector<IdTriple> id_triples_;
  std::unordered_set<IdTriple, IdTripleHash> seen_;
  std::array<std::unordered_map<TermId, std::vector<std::uint32_t>>, 3> index_;
  std::vector<std::uint32_t> all_;
  PrefixMap prefixes_;
};

/// Matches one triple pattern; one mapping per matching triple, with domain
/// equal to the variables of the pattern.
SolutionSeq match_pattern(const Dataset& ds, const TriplePattern& tp);

}  // namespace sprefql
