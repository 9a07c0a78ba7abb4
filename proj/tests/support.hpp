#ifndef FPTMC_TESTS_SUPPORT_HPP
#define FPTMC_TESTS_SUPPORT_HPP

#include <string>
#include <vector>

#include "fptmc/generate.hpp"
#include "fptmc/structure.hpp"

namespace fptmc::testing {

inline Structure structure_of(const Vocabulary& v, std::size_t n, std::vector<std::vector<Tuple>> rels) {
  return Structure(v, n, std::move(rels));
}

inline Vocabulary vocab(std::vector<Symbol> s) { return Vocabulary(std::move(s)); }

// All structures over {E/2} with n elements, as edge masks over the n^2 ordered pairs.
inline std::vector<Structure> all_binary_structures(std::size_t n) {
  std::vector<Structure> out;
  const std::size_t cells = n * n;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << cells); ++mask) {
    std::vector<Tuple> e;
    for (std::size_t c = 0; c < cells; ++c)
      if (mask >> c & 1) e.push_back({Element(c / n), Element(c % n)});
    out.emplace_back(graph_vocabulary(), n, std::vector<std::vector<Tuple>>{e});
  }
  return out;
}

}  // namespace fptmc::testing

#endif
