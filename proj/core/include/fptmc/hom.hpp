#ifndef FPTMC_HOM_HPP
#define FPTMC_HOM_HPP

#include <cstdint>
#include <optional>

#include "fptmc/brute.hpp"
#include "fptmc/structure.hpp"
#include "fptmc/treewidth.hpp"

namespace fptmc {

struct HomStats {
  long width = -1;           // of the decomposition used
  std::size_t nodes = 0;     // of its nice form
  std::size_t max_table = 0;  // largest table of partial maps
};

// Table dynamic programming over a nice form of the decomposition of B; the witness
// is recovered top-down and re-checked.
std::optional<Mapping> solve_hom(const Structure& a, const Structure& b, const TreeDecomposition& t,
                                 HomStats* stats = nullptr);
// Uses the min-fill decomposition of the Gaifman graph of B.
std::optional<Mapping> solve_hom(const Structure& a, const Structure& b, HomStats* stats = nullptr);

// A_B: universe A × B, element (a, b) numbered a·|B| + b; every component b is free.
Structure hom_to_emb(const Structure& a, const Structure& b);
Element hom_to_emb_element(const Structure& b, Element a_elem, Element b_elem);

}  // namespace fptmc

#endif
