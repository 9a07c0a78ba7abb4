#ifndef FPTMC_NORMAL_FORMS_HPP
#define FPTMC_NORMAL_FORMS_HPP

#include <string>
#include <utility>
#include <vector>

#include "fptmc/formula.hpp"

namespace fptmc {

// Negations pushed onto atoms, implications and biconditionals eliminated.
Formula to_nnf(const Formula& f);
// Renames bound variables so that every binder is unique and no bound name is also
// free. The first binder of v keeps its name; later ones become v_1, v_2, ... in
// left-to-right order, skipping names already in use.
Formula rename_apart(const Formula& f);
// Prenex NNF with as few quantifier alternations as the quantifier nesting allows.
Formula to_prenex(const Formula& f);

enum class FragmentClass { QuantifierFree, Sigma, Pi, Other };

struct FragmentInfo {
  FragmentClass cls = FragmentClass::QuantifierFree;
  std::size_t t = 0;
  std::size_t rank = 0;
  std::size_t vocab_arity = 0;
  std::size_t var_count = 0;
  std::vector<std::size_t> blocks;
};

FragmentInfo classify(const Formula& f);
std::string fragment_name(const FragmentInfo& info);
// Membership with the usual inclusions: quantifier-free and Π_{t-1} sentences are in Σ_t.
bool in_sigma(const FragmentInfo& info, std::size_t t);
bool in_pi(const FragmentInfo& info, std::size_t t);
bool in_sigma_tu(const FragmentInfo& info, std::size_t t, std::size_t u);

// Quantifier prefix of a prenex formula and its matrix.
struct Prenex {
  std::vector<std::pair<FormulaKind, std::string>> prefix;
  Formula matrix;
};
Prenex split_prenex(const Formula& f);

// G(φ) on variables(φ); labels of the vertices are the variable names.
Graph formula_graph(const Formula& f);
// G(φ≠): equalities under an odd number of negations do not contribute edges.
Graph formula_graph_neq(const Formula& f);

struct CanonicalQuery {
  Formula with_inequalities;     // φ_B
  Formula without_inequalities;  // φ_B^≠
};
// Variables x0..x{n-1} stand for the elements of B.
CanonicalQuery canonical_query(const Structure& b);

// DNF of a quantifier-free NNF formula as lists of literals; DNFBlowup past max_terms.
std::vector<std::vector<Formula>> dnf_terms(const Formula& qf_nnf, std::size_t max_terms);

}  // namespace fptmc

#endif
