#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sprefql/winnow.hpp"

namespace sprefql {

/// A counterexample to one strict-partial-order axiom, as item indices:
///   irreflexivity (x)       : x ≻ x
///   asymmetry     (x, y)    : x ≻ y and y ≻ x, x < y
///   transitivity  (x, y, z) : x ≻ y and y ≻ z but not x ≻ z
struct SpoViolation {
  enum class Axiom : std::uint8_t { Irreflexivity, Asymmetry, Transitivity };

  Axiom axiom;
  std::vector<std::size_t> witness;

  std::string describe() const;
  bool operator==(const SpoViolation&) const = default;
  auto operator<=>(const SpoViolation&) const = default;
};

struct SpoOptions {
  /// Larger inputs raise SizeLimitError (the check is cubic in the worst case).
  std::size_t max_items = 1000;
  /// Stop collecting after this many violations (0 = no limit).
  std::size_t max_violations = 64;
  /// 1 = serial reference; 0 = all OpenMP threads.
  int threads = 1;
};

struct SpoReport {
  std::size_t items = 0;
  std::vector<SpoViolation> violations;  // sorted
  bool ok() const { return violations.empty(); }
};

/// Dense relation matrix, row-major bitsets: bit y of row x set iff x ≻ y.
class RelationMatrix {
 public:
  RelationMatrix(std::size_t n, const IndexRelation& prefers, int threads = 1);

  std::size_t size() const { return n_; }
  bool at(std::size_t x, std::size_t y) const { return (bits_[x * words_ + y / 64] >> (y % 64)) & 1U; }
  const std::uint64_t* row(std::size_t x) const { return &bits_[x * words_]; }
  std::size_t words() const { return words_; }

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

/// Checks irreflexivity, asymmetry and transitivity of the relation restricted
/// to items 0..n-1.
SpoReport check_spo(std::size_t n, const IndexRelation& prefers, const SpoOptions& options = {});

SpoReport check_spo(const RelationMatrix& m, const SpoOptions& options = {});

/// The relation of a PREFER clause over concrete solutions.
SpoReport check_spo(const std::vector<Mapping>& rows, const PreferenceRelation& rel,
                    const SpoOptions& options = {});

}  // namespace sprefql
