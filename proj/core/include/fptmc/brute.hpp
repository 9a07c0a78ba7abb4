#ifndef FPTMC_BRUTE_HPP
#define FPTMC_BRUTE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "fptmc/formula.hpp"
#include "fptmc/structure.hpp"

namespace fptmc {

class PropFormula;

struct BruteOptions {
  // Refuse enumerations with more candidates than this (TooLarge).
  double max_candidates = 1e8;
};

using Mapping = std::vector<Element>;  // image of element i of the source structure

// Exhaustive backtracking; elements of B in ascending order, images in ascending order.
std::optional<Mapping> brute_hom(const Structure& a, const Structure& b, const BruteOptions& opts = {});
std::optional<Mapping> brute_emb(const Structure& a, const Structure& b, const BruteOptions& opts = {});
// Lexicographically first k-clique.
std::optional<std::vector<Element>> brute_clique(const Graph& g, std::size_t k, const BruteOptions& opts = {});
std::size_t count_cliques(const Graph& g, std::size_t k, const BruteOptions& opts = {});
// First satisfying assignment of weight k, variables in table order.
std::optional<std::vector<bool>> brute_wsat(const PropFormula& phi, std::size_t k, const BruteOptions& opts = {});
// First k-subset B of A^r (lexicographic) with (A, B) satisfying φ.
std::optional<std::vector<Tuple>> brute_fagin(const Structure& a, const Formula& phi, const SetVar& x,
                                              std::size_t k, const BruteOptions& opts = {});

// Independent witness checks.
bool check_hom(const Structure& a, const Structure& b, const Mapping& h);
bool check_emb(const Structure& a, const Structure& b, const Mapping& h);
bool check_clique(const Graph& g, const std::vector<Element>& vs, std::size_t k);
bool check_wsat(const PropFormula& phi, const std::vector<bool>& assignment, std::size_t k);
bool check_fagin(const Structure& a, const Formula& phi, const SetVar& x, const std::vector<Tuple>& b, std::size_t k);

double binomial(double n, double k);

}  // namespace fptmc

#endif
