#ifndef FPTMC_STRUCTURE_HPP
#define FPTMC_STRUCTURE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fptmc {

using Element = std::uint32_t;
using Tuple = std::vector<Element>;

struct Symbol {
  std::string name;
  std::size_t arity = 0;

  bool operator==(const Symbol&) const = default;
};

bool is_identifier(std::string_view s);

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<Symbol> symbols);

  const std::vector<Symbol>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  const Symbol& operator[](std::size_t i) const { return symbols_[i]; }
  std::optional<std::size_t> find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name).has_value(); }
  // Maximal arity of the symbols, 0 for the empty vocabulary.
  std::size_t arity() const;

  Vocabulary with(Symbol s) const;
  // A name not yet used in the vocabulary, derived from base.
  std::string fresh_name(const std::string& base) const;
  // Same symbol set, order ignored.
  bool same_symbols(const Vocabulary& other) const;

  bool operator==(const Vocabulary&) const = default;

 private:
  std::vector<Symbol> symbols_;
};

// Unvalidated structure data as it comes from a parser or a constructor.
struct RawStructure {
  Vocabulary vocab;
  std::size_t n = 0;
  std::vector<std::vector<Tuple>> relations;  // aligned with vocab
  std::vector<std::string> provenance;        // empty or one label per element
};

class Structure {
 public:
  Structure() = default;
  // Validates and canonicalizes (tuples sorted, duplicates removed).
  Structure(Vocabulary vocab, std::size_t n, std::vector<std::vector<Tuple>> relations,
            std::vector<std::string> provenance = {});

  const Vocabulary& vocab() const { return vocab_; }
  std::size_t n() const { return n_; }
  const std::vector<Tuple>& relation(std::size_t i) const { return relations_[i]; }
  const std::vector<Tuple>& relation(std::string_view name) const;
  const std::vector<std::vector<Tuple>>& relations() const { return relations_; }
  bool contains(std::size_t rel, const Tuple& t) const;
  bool contains(std::string_view name, const Tuple& t) const;

  // Size of the list representation: n plus arity times tuple count per relation.
  std::size_t size() const;
  std::size_t tuple_count() const;

  const std::vector<std::string>& provenance() const { return provenance_; }
  std::string label(Element e) const;
  Structure with_provenance(std::vector<std::string> provenance) const;

  Structure reduct(const Vocabulary& sub) const;
  Structure expand(const Symbol& s, std::vector<Tuple> tuples) const;

  bool operator==(const Structure& other) const {
    return vocab_ == other.vocab_ && n_ == other.n_ && relations_ == other.relations_;
  }

 private:
  Vocabulary vocab_;
  std::size_t n_ = 0;
  std::vector<std::vector<Tuple>> relations_;
  std::vector<std::string> provenance_;
};

Structure validate(const RawStructure& raw);

// Simple undirected loop-free graph stored as a structure over {E/2} plus adjacency lists.
class Graph {
 public:
  Graph() = default;
  static Graph from_structure(const Structure& s);
  static Graph from_edges(std::size_t n, const std::vector<std::pair<Element, Element>>& edges,
                          std::vector<std::string> provenance = {});

  std::size_t n() const { return adj_.size(); }
  const std::vector<Element>& neighbors(Element v) const { return adj_[v]; }
  std::size_t degree(Element v) const { return adj_[v].size(); }
  bool adjacent(Element u, Element v) const;
  std::size_t edge_count() const { return structure_.relation(0).size() / 2; }
  // Undirected edges with u < v, sorted.
  std::vector<std::pair<Element, Element>> edges() const;
  const Structure& structure() const { return structure_; }
  const std::vector<std::string>& provenance() const { return structure_.provenance(); }

 private:
  explicit Graph(Structure s);
  Structure structure_;
  std::vector<std::vector<Element>> adj_;
};

Vocabulary graph_vocabulary();

Graph gaifman(const Structure& a);
Graph disjoint_union(const std::vector<Graph>& graphs);

// Names used for the color predicates C_1..C_k added to vocab.
std::vector<std::string> color_names(const Vocabulary& vocab, std::size_t k);
// Expansion by unary C_i = f^{-1}(i) for i = 1..k; f maps elements to 1..k.
Structure color_expand(const Structure& a, const std::vector<std::size_t>& f, std::size_t k);

bool is_symmetric_irreflexive(const Structure& s, std::size_t rel);

}  // namespace fptmc

#endif
