#pragma once

#include <cstdint>
#include <string>

#include "sprefql/dataset.hpp"

namespace sprefql {

inline constexpr std::string_view kMoviesNs = "http://example.org/movies#";

/// Synthetic movie graph shaped like a movie database:
///   :mI a :film ; :title "..." ; :genre :G ; :runtime N ; :year Y .
///   :mI :sequel :mJ .            (within sequel chains)
///   :mI :character :james_bond . (films of chain 1)
/// Chain 0 is titled "Mad Max Part k". Chains use the first films.
struct MovieGenOptions {
  std::size_t films = 100;
  std::size_t genres = 4;  // :action, :drama, :comedy, :scifi, then :genre5 ...
  std::int64_t runtime_min = 80;
  std::int64_t runtime_max = 180;
  std::int64_t year_min = 1970;
  std::int64_t year_max = 2020;
  std::size_t chains = 2;
  std::size_t chain_length = 3;
  /// Ascending: film i (0-based) runs runtime_min + i minutes.
  enum class Runtime : std::uint8_t { Random, Ascending } runtime_mode = Runtime::Random;
  std::uint64_t seed = 1;
};

Dataset generate_movies(const MovieGenOptions& options);

/// Turtle text of a dataset: its prefixes, then one triple per line in
/// insertion order.
std::string write_turtle(const Dataset& ds);

}  // namespace sprefql
