#ifndef FPTMC_GENERATE_HPP
#define FPTMC_GENERATE_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fptmc/formula.hpp"
#include "fptmc/normal_forms.hpp"
#include "fptmc/structure.hpp"

namespace fptmc {

// All generators draw from this engine with plain modular reduction, so a seed gives
// the same output with every standard library.
using Rng = std::mt19937_64;

std::size_t draw(Rng& rng, std::size_t bound);
bool coin(Rng& rng, double p);

Graph complete_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
// r rows and c columns; vertex (i, j) is i*c + j.
Graph grid_graph(std::size_t rows, std::size_t cols);
Graph complete_bipartite_graph(std::size_t a, std::size_t b);
Graph petersen_graph();
Graph random_graph(std::size_t n, double p, Rng& rng);
Graph random_tree(std::size_t n, Rng& rng);
// Graph on n vertices whose edges are the bits of mask over pairs (0,1), (0,2), ..., (n-2,n-1).
Graph graph_from_mask(std::size_t n, std::uint64_t mask);

// Every tuple of every relation is present independently with probability p.
Structure random_structure(const Vocabulary& vocab, std::size_t n, double p, Rng& rng);

struct FormulaShape {
  Vocabulary vocab;
  // Sigma or Pi with t blocks, or QuantifierFree.
  FragmentClass cls = FragmentClass::Sigma;
  std::size_t t = 1;
  std::size_t variables = 3;
  std::size_t literals = 4;
  bool equality = true;
  // Matrix as a single conjunction of literals instead of an and/or tree.
  bool conjunctive = false;
};

// A prenex sentence whose classification is exactly the requested fragment.
Formula random_prenex_sentence(const FormulaShape& shape, Rng& rng);

}  // namespace fptmc

#endif
