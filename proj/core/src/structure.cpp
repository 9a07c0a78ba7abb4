#include "fptmc/structure.hpp"

#include <algorithm>
#include <set>

#include "fptmc/error.hpp"

namespace fptmc {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  if (!alpha(s[0])) return false;
  for (char c : s)
    if (!alpha(c) && !(c >= '0' && c <= '9')) return false;
  return true;
}

Vocabulary::Vocabulary(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (!is_identifier(s.name))
      throw Error(ErrorCode::InvalidArgument, "bad relation name '" + s.name + "'");
    if (s.arity == 0) throw Error(ErrorCode::ArityMismatch, "relation " + s.name + " has arity 0");
    if (!seen.insert(s.name).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate relation symbol " + s.name);
  }
}

std::optional<std::size_t> Vocabulary::find(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Vocabulary::arity() const {
  std::size_t r = 0;
  for (const auto& s : symbols_) r = std::max(r, s.arity);
  return r;
}

Vocabulary Vocabulary::with(Symbol s) const {
  auto v = symbols_;
  v.push_back(std::move(s));
  return Vocabulary(std::move(v));
}

std::string Vocabulary::fresh_name(const std::string& base) const {
  if (!contains(base)) return base;
  for (std::size_t i = 1;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!contains(cand)) return cand;
  }
}

bool Vocabulary::same_symbols(const Vocabulary& other) const {
  if (size() != other.size()) return false;
  for (const auto& s : symbols_) {
    auto j = other.find(s.name);
    if (!j || other[*j].arity != s.arity) return false;
  }
  return true;
}

Structure::Structure(Vocabulary vocab, std::size_t n, std::vector<std::vector<Tuple>> relations,
                     std::vector<std::string> provenance)
    : vocab_(std::move(vocab)), n_(n), relations_(std::move(relations)), provenance_(std::move(provenance)) {
  if (n_ == 0) throw Error(ErrorCode::EmptyUniverse, "universe must be non-empty");
  if (relations_.size() != vocab_.size())
    throw Error(ErrorCode::ArityMismatch, "relation count does not match vocabulary");
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    for (const auto& t : relations_[i]) {
      if (t.size() != vocab_[i].arity)
        throw Error(ErrorCode::ArityMismatch, "tuple of length " + std::to_string(t.size()) +
                                                  " for " + vocab_[i].name + "/" +
                                                  std::to_string(vocab_[i].arity));
      for (Element e : t)
        if (e >= n_)
          throw Error(ErrorCode::ElementOutOfRange,
                      "element " + std::to_string(e) + " in " + vocab_[i].name + " exceeds universe");
    }
    auto& r = relations_[i];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
  if (!provenance_.empty() && provenance_.size() != n_)
    throw Error(ErrorCode::InvalidArgument, "provenance must label every element");
}

const std::vector<Tuple>& Structure::relation(std::string_view name) const {
  auto i = vocab_.find(name);
  if (!i) throw Error(ErrorCode::UnknownRelation, "no relation " + std::string(name));
  return relations_[*i];
}

bool Structure::contains(std::size_t rel, const Tuple& t) const {
  return std::binary_search(relations_[rel].begin(), relations_[rel].end(), t);
}

bool Structure::contains(std::string_view name, const Tuple& t) const {
  auto i = vocab_.find(name);
  return i && contains(*i, t);
}

std::size_t Structure::size() const {
  std::size_t s = n_;
  for (std::size_t i = 0; i < relations_.size(); ++i) s += vocab_[i].arity * relations_[i].size();
  return s;
}

std::size_t Structure::tuple_count() const {
  std::size_t c = 0;
  for (const auto& r : relations_) c += r.size();
  return c;
}

std::string Structure::label(Element e) const {
  if (!provenance_.empty()) return provenance_[e];
  return std::to_string(e);
}

Structure Structure::with_provenance(std::vector<std::string> provenance) const {
  return Structure(vocab_, n_, relations_, std::move(provenance));
}

Structure Structure::reduct(const Vocabulary& sub) const {
  std::vector<std::vector<Tuple>> rels;
  for (const auto& s : sub.symbols()) {
    auto i = vocab_.find(s.name);
    if (!i || vocab_[*i].arity != s.arity)
      throw Error(ErrorCode::VocabularyMismatch, "reduct symbol " + s.name + " not in vocabulary");
    rels.push_back(relations_[*i]);
  }
  return Structure(sub, n_, std::move(rels), provenance_);
}

Structure Structure::expand(const Symbol& s, std::vector<Tuple> tuples) const {
  auto rels = relations_;
  rels.push_back(std::move(tuples));
  return Structure(vocab_.with(s), n_, std::move(rels), provenance_);
}

Structure validate(const RawStructure& raw) {
  return Structure(raw.vocab, raw.n, raw.relations, raw.provenance);
}

Vocabulary graph_vocabulary() { return Vocabulary({{"E", 2}}); }

bool is_symmetric_irreflexive(const Structure& s, std::size_t rel) {
  for (const auto& t : s.relation(rel)) {
    if (t.size() != 2 || t[0] == t[1]) return false;
    if (!s.contains(rel, Tuple{t[1], t[0]})) return false;
  }
  return true;
}

Graph::Graph(Structure s) : structure_(std::move(s)), adj_(structure_.n()) {
  for (const auto& t : structure_.relation(0)) adj_[t[0]].push_back(t[1]);
  // tuples are sorted, so every adjacency list is already sorted
}

Graph Graph::from_structure(const Structure& s) {
  if (s.vocab().size() != 1 || s.vocab()[0].arity != 2)
    throw Error(ErrorCode::NotAGraph, "graph vocabulary must be a single binary symbol");
  if (!is_symmetric_irreflexive(s, 0))
    throw Error(ErrorCode::NotAGraph, "edge relation must be symmetric and irreflexive");
  if (s.vocab()[0].name != "E") {
    return Graph(Structure(graph_vocabulary(), s.n(), s.relations(), s.provenance()));
  }
  return Graph(s);
}

Graph Graph::from_edges(std::size_t n, const std::vector<std::pair<Element, Element>>& edges,
                        std::vector<std::string> provenance) {
  std::vector<Tuple> e;
  e.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    if (u == v) throw Error(ErrorCode::NotAGraph, "self loop at " + std::to_string(u));
    e.push_back({u, v});
    e.push_back({v, u});
  }
  return Graph(Structure(graph_vocabulary(), n, {std::move(e)}, std::move(provenance)));
}

bool Graph::adjacent(Element u, Element v) const {
  const auto& a = adj_[u];
  return std::binary_search(a.begin(), a.end(), v);
}

std::vector<std::pair<Element, Element>> Graph::edges() const {
  std::vector<std::pair<Element, Element>> out;
  for (Element u = 0; u < n(); ++u)
    for (Element v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

Graph gaifman(const Structure& a) {
  std::vector<std::pair<Element, Element>> edges;
  for (const auto& rel : a.relations())
    for (const auto& t : rel)
      for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j)
          if (t[i] != t[j]) edges.emplace_back(t[i], t[j]);
  return Graph::from_edges(a.n(), edges, a.provenance());
}

Graph disjoint_union(const std::vector<Graph>& graphs) {
  std::size_t n = 0;
  std::vector<std::pair<Element, Element>> edges;
  std::vector<std::string> prov;
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    auto base = static_cast<Element>(n);
    for (auto [u, v] : graphs[g].edges()) edges.emplace_back(base + u, base + v);
    for (Element v = 0; v < graphs[g].n(); ++v)
      prov.push_back("g" + std::to_string(g) + ":" + graphs[g].structure().label(v));
    n += graphs[g].n();
  }
  if (n == 0) throw Error(ErrorCode::EmptyUniverse, "disjoint union of no graphs");
  return Graph::from_edges(n, edges, std::move(prov));
}

std::vector<std::string> color_names(const Vocabulary& vocab, std::size_t k) {
  // one shared suffix keeps the family recognisable even when C1.. clash
  std::string base = "C";
  for (std::size_t attempt = 0;; ++attempt) {
    std::vector<std::string> names;
    bool clash = false;
    for (std::size_t i = 1; i <= k; ++i) {
      std::string nm = base + std::to_string(i);
      if (vocab.contains(nm)) clash = true;
      names.push_back(nm);
    }
    if (!clash) return names;
    base = "C" + std::string(attempt + 1, '_');
  }
}

Structure color_expand(const Structure& a, const std::vector<std::size_t>& f, std::size_t k) {
  if (f.size() != a.n()) throw Error(ErrorCode::InvalidArgument, "coloring must be total");
  auto names = color_names(a.vocab(), k);
  std::vector<std::vector<Tuple>> classes(k);
  for (Element e = 0; e < a.n(); ++e) {
    if (f[e] < 1 || f[e] > k) throw Error(ErrorCode::InvalidArgument, "color out of range");
    classes[f[e] - 1].push_back({e});
  }
  auto symbols = a.vocab().symbols();
  auto rels = a.relations();
  for (std::size_t i = 0; i < k; ++i) {
    symbols.push_back({names[i], 1});
    rels.push_back(std::move(classes[i]));
  }
  return Structure(Vocabulary(std::move(symbols)), a.n(), std::move(rels), a.provenance());
}

}  // namespace fptmc
