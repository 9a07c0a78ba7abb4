#ifndef FPTMC_TREEWIDTH_HPP
#define FPTMC_TREEWIDTH_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "fptmc/structure.hpp"

namespace fptmc {

enum class NiceKind { Leaf, Introduce, Forget, Join };

// Rooted tree of bags. Bags are sorted. Nice decompositions also record the node kind
// and the element introduced or forgotten.
struct TreeDecomposition {
  std::vector<std::vector<Element>> bags;
  std::vector<int> parent;  // -1 for the root
  int root = 0;
  std::vector<NiceKind> kind;  // empty unless produced by make_nice
  std::vector<Element> pivot;

  std::size_t size() const { return bags.size(); }
  std::vector<std::vector<int>> children() const;
  // max bag size minus one; -1 only for a decomposition without nodes
  long width() const;
};

// Checks element coverage, tuple coverage and connectedness; returns the width.
long validate_td(const Structure& a, const TreeDecomposition& t);
long validate_td(const Graph& g, const TreeDecomposition& t);

// Rebuilds parent pointers from an undirected tree on the nodes, rooted at the node
// holding the lowest element (first such node on ties; node 0 if all bags are empty).
TreeDecomposition rooted(std::vector<std::vector<Element>> bags, const std::vector<std::pair<int, int>>& edges);

// Decomposition induced by an elimination ordering.
TreeDecomposition from_elimination_order(const Graph& g, const std::vector<Element>& order);

// Min-fill ordering, ties broken by the lowest vertex.
std::vector<Element> min_fill_order(const Graph& g);
TreeDecomposition heuristic_td(const Graph& g);

// Optimal width by dynamic programming over vertex subsets; at most 12 vertices.
constexpr std::size_t kExactTdLimit = 12;
TreeDecomposition exact_td(const Graph& g);
std::size_t treewidth_exact(const Graph& g);

// Leaf, introduce, forget and join nodes; every leaf bag is empty and the root keeps
// the bag of the original root.
TreeDecomposition make_nice(const TreeDecomposition& t);
bool is_nice(const TreeDecomposition& t);

// `node <id> : <e1> <e2> ...` lines followed by `edge <id> <id>` lines.
TreeDecomposition parse_td(const std::string& text);
std::string write_td(const TreeDecomposition& t);

}  // namespace fptmc

#endif
