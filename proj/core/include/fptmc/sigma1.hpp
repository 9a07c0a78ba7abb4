#ifndef FPTMC_SIGMA1_HPP
#define FPTMC_SIGMA1_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fptmc/brute.hpp"
#include "fptmc/formula.hpp"
#include "fptmc/hash_family.hpp"
#include "fptmc/structure.hpp"

namespace fptmc {

struct Sigma1Options {
  std::size_t max_disjuncts = 10'000;
  HashOptions hash;
};

struct Sigma1Result {
  bool holds = false;
  // values of the leading existential variables, when holds
  std::map<std::string, Element> witness;
  std::size_t disjuncts = 0;
  long max_width = -1;         // of the decompositions of the B_i
  std::size_t colorings = 0;   // color coding only
  std::size_t hash_functions = 0;
  double error_bound = 0;      // randomized color coding only
};

// A″ over τ″: every R with its complement, equality, inequality, and the full
// relation standing for the negated dummy symbol.
struct HomTarget {
  Structure structure;
  std::map<std::string, std::string> complement;
  std::string eq, neq, dummy_neg;
};
HomTarget hom_target(const Structure& a);

// One B_i per disjunct of the DNF of the matrix, padded by negated dummy atoms so
// its Gaifman graph is G(φ). Universe: the prefix variables in order; no patterns
// for a sentence without variables.
struct HomQuery {
  std::vector<std::string> variables;
  std::vector<Structure> patterns;
};
HomQuery sigma1_hom_queries(const Formula& phi, const HomTarget& target, std::size_t max_disjuncts);

// Existential sentences through homomorphism problems; solve_hom on each B_i.
Sigma1Result mc_sigma1_via_hom(const Structure& a, const Formula& phi, const Sigma1Options& opts = {});

// Inequalities handled by color coding: each proper coloring γ of the inequality
// graph and each f of an l-perfect family give A_f ⊨ φ_γ, decided via homomorphisms.
Sigma1Result mc_sigma1_neq_color_coding(const Structure& a, const Formula& phi, const Sigma1Options& opts = {});

// Proper colorings {0..k-1} -> {1..colors} of the graph given by the pairs, lexicographic.
std::vector<std::vector<std::size_t>> proper_colorings(std::size_t k, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                                      std::size_t colors);

// φ_γ for a conjunction of literals over the given variables: each x_i≠x_j becomes
// C_{γ(i)} x_i ∧ C_{γ(j)} x_j, with color symbols named as in color_names(vocab, k).
Formula colored_conjunction(const std::vector<Formula>& literals, const std::vector<std::string>& vars,
                            const std::vector<std::size_t>& gamma, const std::vector<std::string>& colors);

// Embeddings via the canonical query of B and color coding.
std::optional<Mapping> solve_emb(const Structure& a, const Structure& b, const Sigma1Options& opts = {},
                                 Sigma1Result* info = nullptr);

}  // namespace fptmc

#endif
