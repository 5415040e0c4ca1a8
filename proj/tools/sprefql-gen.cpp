// Writes a synthetic movie dataset as Turtle on stdout.

#include <CLI11.hpp>

#include <iostream>

#include "sprefql/moviegen.hpp"

int main(int argc, char** argv) {
  sprefql::MovieGenOptions o;
  bool ascending = false;
  CLI::App app{"Synthetic movie dataset generator"};
  app.add_option("-n,--films", o.films, "number of films");
  app.add_option("-g,--genres", o.genres, "number of genres")->check(CLI::PositiveNumber);
  app.add_option("--runtime-min", o.runtime_min);
  app.add_option("--runtime-max", o.runtime_max);
  app.add_option("--year-min", o.year_min);
  app.add_option("--year-max", o.year_max);
  app.add_option("--chains", o.chains, "number of sequel chains");
  app.add_option("-k,--chain-length", o.chain_length, "films per sequel chain");
  app.add_flag("--ascending-runtime", ascending, "film i runs runtime-min + i minutes");
  app.add_option("--seed", o.seed);
  CLI11_PARSE(app, argc, argv);
  if (ascending) o.runtime_mode = sprefql::MovieGenOptions::Runtime::Ascending;
  try {
    std::cout << sprefql::write_turtle(sprefql::generate_movies(o));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
