#ifndef FPTMC_ENCODINGS_HPP
#define FPTMC_ENCODINGS_HPP

#include <string>
#include <vector>

#include "fptmc/formula.hpp"
#include "fptmc/structure.hpp"

namespace fptmc {

struct GraphEncoding {
  Graph graph;
  Formula formula;
};

// Intermediate results of the structure-to-graph translation.
struct EncodingSteps {
  // Incidence structure over U, U_R and E1..Es with its sentence.
  Structure incidence;
  Formula incidence_formula;
  // Single binary E with midpoint elements marked by P1..Ps.
  Structure midpoint;
  Formula midpoint_formula;
  // Unary predicates of the midpoint structure in gadget order, with cycle lengths.
  std::vector<std::string> predicates;
  std::vector<std::size_t> cycle_lengths;
  Graph graph;
  Formula graph_formula;  // prenex
};

// Cycle length of the gadget for the i-th unary predicate (1-based).
inline std::size_t gadget_cycle_length(std::size_t i) { return 2 * i + 5; }

// Expects a sentence in prenex NNF over the vocabulary of a.
EncodingSteps encode_to_graph_steps(const Structure& a, const Formula& phi);
GraphEncoding encode_to_graph(const Structure& a, const Formula& phi);

// Expansion of a by complements R_c = A^r minus R, and phi rewritten so every
// relation occurs with one polarity: positive for Σ_odd and Π_even, negative otherwise.
struct ComplementExpansion {
  Structure structure;
  Formula formula;
  bool positive = true;
};
ComplementExpansion complement_expansion(const Structure& a, const Formula& phi, std::size_t s);

// Keeps the fragment: Σ_t to Σ_t and Π_t to Π_t.
GraphEncoding encode_to_graph_arity_preserving(const Structure& a, const Formula& phi, std::size_t s);

// The gadget detector: x has a neighbour on a simple cycle of the given length avoiding x.
Formula cycle_detector(const std::string& x, std::size_t length, const std::string& var_prefix);

}  // namespace fptmc

#endif
