#ifndef FPTMC_CLIQUE_TYPES_HPP
#define FPTMC_CLIQUE_TYPES_HPP

#include <string>
#include <vector>

#include "fptmc/formula.hpp"
#include "fptmc/structure.hpp"

namespace fptmc {

enum class PairRelation { Equal, Edge, Neither };

// Atomic k-type in the theory of graphs: one relation per pair i < j, stored in the
// order (0,1), (0,2), (1,2), (0,3), ...
struct AtomicType {
  std::size_t k = 0;
  std::vector<PairRelation> alpha;

  PairRelation at(std::size_t i, std::size_t j) const;
};

std::size_t pair_index(std::size_t i, std::size_t j);
// Equality is an equivalence and edge/non-edge is constant on its classes.
bool is_consistent(const AtomicType& t);
// All consistent atomic k-types; inconsistent branches are cut as soon as a triple fails.
std::vector<AtomicType> consistent_types(std::size_t k);
Formula type_formula(const AtomicType& t, const std::vector<std::string>& vars);
// Does every k-tuple of type t satisfy the quantifier-free graph formula over vars?
bool type_entails(const AtomicType& t, const Formula& qf, const std::vector<std::string>& vars);

// h(G, θ) on {1..k} x G; vertex (i, v) is (i-1)*|G| + v.
Graph type_product(const Graph& g, const AtomicType& t);

// δ(k) = ∃x1..xk (⋀ xi ≠ xj ∧ ⋀ E xi xj).
Formula clique_sentence(std::size_t k);

struct McInstance {
  Graph graph;
  Formula sentence;
};
McInstance clique_to_mc(const Graph& g, std::size_t k);

struct CliqueInstance {
  Graph graph;
  std::size_t k = 0;
  // The types of the disjuncts of the equivalent ⋁ ∃x̄ θ_i, in enumeration order.
  std::vector<AtomicType> types;
  std::vector<std::string> variables;
};

// Existential sentence over {E} to a clique question with k = number of prefix
// variables (at least 1). Without any entailing type the answer is a fixed
// no-instance: max(k, 2) isolated vertices with that k.
CliqueInstance mc_to_clique(const Graph& g, const Formula& phi, std::size_t max_variables = 5);
// The sentence ⋁ ∃x̄ θ_i of an instance.
Formula type_disjunction(const CliqueInstance& inst);

}  // namespace fptmc

#endif
