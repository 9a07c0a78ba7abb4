#ifndef FPTMC_FAGIN_HPP
#define FPTMC_FAGIN_HPP

#include <optional>
#include <string>
#include <vector>

#include "fptmc/formula.hpp"
#include "fptmc/structure.hpp"

namespace fptmc {

// Example formulas over a graph vocabulary {E/2} with the unary set variable X.
SetVar fagin_set_variable();
Formula phi_vc();
Formula phi_ds();
Formula phi_cli();
// Dominating sets in graphs of valence at most l; ∃^{≤l} is written out.
Formula phi_vc_l(std::size_t l);
// ∃^{≤m} v ψ(v) := ∃w1..wm ∀v (ψ(v) → v = w1 ∨ ... ∨ v = wm).
Formula at_most(std::size_t m, const std::string& v, const Formula& psi, const std::string& witness_prefix);

// X occurs neither under a negation nor in the scope of an existential quantifier
// once the formula is in negation normal form.
bool check_fagin_positive(const Formula& phi, const SetVar& x);

struct FaginDisjunct {
  // Arguments of each X-atom as positions in the universal variable list.
  std::vector<std::vector<std::size_t>> x_atoms;
  // X-free conjuncts.
  std::vector<Formula> rest;
};

// φ ≡ ∀y1..yl ⋁_i ⋀_j ψ_ij with each ψ_ij an X-atom on the y's or X-free.
struct FaginProblem {
  Formula formula;
  SetVar x;
  std::vector<std::string> universal;
  std::vector<FaginDisjunct> disjuncts;
};

// NotPositive unless check_fagin_positive; DNFBlowup past max_disjuncts.
FaginProblem fagin_normalize(const Formula& phi, const SetVar& x, std::size_t max_disjuncts = 10'000);
// ∀ȳ ⋁ ⋀ as a formula; normalizing it again gives the same problem.
Formula fagin_normal_formula(const FaginProblem& p);

// A* over relations R<i>_<j>, one per X-free conjunct with free variables; the
// argument list of each such relation as positions in the universal variables.
// Closed conjuncts are evaluated up front.
struct FaginStar {
  Structure structure;
  struct Item {
    std::vector<std::size_t> args;
    std::optional<std::size_t> relation;
    bool closed_value = true;
  };
  std::vector<std::vector<Item>> items;  // aligned with the disjuncts
};
FaginStar fagin_precompute(const Structure& a, const FaginProblem& p);

struct FaginStats {
  std::size_t peak_family = 0;  // largest |S| seen
  std::size_t final_family = 0;
  std::size_t tuples_checked = 0;
};

// Check-φ: keeps the partial solutions of size at most k, accepts iff one survives
// every ā ∈ A^l. A surviving set is padded to exactly k tuples with the first unused
// tuples of A^r. KTooLarge when k > |A|^r.
std::optional<std::vector<Tuple>> check_phi(const Structure& a, const FaginProblem& p, std::size_t k,
                                            FaginStats* stats = nullptr);
// Same with A* computed once for several k.
std::optional<std::vector<Tuple>> check_phi(const Structure& a, const FaginProblem& p, const FaginStar& star,
                                            std::size_t k, FaginStats* stats = nullptr);

// δ(k) = ∃x̄1..x̄k (⋀ x̄i ≠ x̄j ∧ φ_k) with X ȳ replaced by ⋁ x̄i = ȳ.
Formula fagin_to_slicewise(const Formula& phi, const SetVar& x, std::size_t k);

}  // namespace fptmc

#endif
