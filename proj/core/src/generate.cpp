#include "fptmc/generate.hpp"

#include "fptmc/error.hpp"

namespace fptmc {

std::size_t draw(Rng& rng, std::size_t bound) {
  if (bound == 0) throw Error(ErrorCode::InvalidArgument, "draw from an empty range");
  return static_cast<std::size_t>(rng() % bound);
}

bool coin(Rng& rng, double p) { return double(rng() >> 11) * 0x1.0p-53 < p; }

Graph complete_graph(std::size_t n) {
  std::vector<std::pair<Element, Element>> e;
  for (Element i = 0; i < n; ++i)
    for (Element j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "a cycle needs at least 3 vertices");
  std::vector<std::pair<Element, Element>> e;
  for (Element i = 0; i < n; ++i) e.emplace_back(i, static_cast<Element>((i + 1) % n));
  return Graph::from_edges(n, e);
}

Graph path_graph(std::size_t n) {
  std::vector<std::pair<Element, Element>> e;
  for (Element i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph::from_edges(n, e);
}

Graph grid_graph(std::size_t rows, std::size_t cols) {
  std::vector<std::pair<Element, Element>> e;
  auto id = [&](std::size_t i, std::size_t j) { return static_cast<Element>(i * cols + j); };
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      if (i + 1 < rows) e.emplace_back(id(i, j), id(i + 1, j));
      if (j + 1 < cols) e.emplace_back(id(i, j), id(i, j + 1));
    }
  return Graph::from_edges(rows * cols, e);
}

Graph complete_bipartite_graph(std::size_t a, std::size_t b) {
  std::vector<std::pair<Element, Element>> e;
  for (Element i = 0; i < a; ++i)
    for (Element j = 0; j < b; ++j) e.emplace_back(i, static_cast<Element>(a + j));
  return Graph::from_edges(a + b, e);
}

Graph petersen_graph() {
  std::vector<std::pair<Element, Element>> e;
  for (Element i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(i, i + 5);
    e.emplace_back(i + 5, (i + 2) % 5 + 5);
  }
  return Graph::from_edges(10, e);
}

Graph random_graph(std::size_t n, double p, Rng& rng) {
  std::vector<std::pair<Element, Element>> e;
  for (Element i = 0; i < n; ++i)
    for (Element j = i + 1; j < n; ++j)
      if (coin(rng, p)) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

Graph random_tree(std::size_t n, Rng& rng) {
  std::vector<std::pair<Element, Element>> e;
  for (Element i = 1; i < n; ++i) e.emplace_back(static_cast<Element>(draw(rng, i)), i);
  return Graph::from_edges(n, e);
}

Graph graph_from_mask(std::size_t n, std::uint64_t mask) {
  std::vector<std::pair<Element, Element>> e;
  std::size_t bit = 0;
  for (Element i = 0; i < n; ++i)
    for (Element j = i + 1; j < n; ++j, ++bit)
      if (mask >> bit & 1) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

Structure random_structure(const Vocabulary& vocab, std::size_t n, double p, Rng& rng) {
  std::vector<std::vector<Tuple>> rels(vocab.size());
  for (std::size_t r = 0; r < vocab.size(); ++r) {
    const std::size_t arity = vocab[r].arity;
    Tuple t(arity, 0);
    while (true) {
      if (coin(rng, p)) rels[r].push_back(t);
      std::size_t i = arity;
      while (i > 0 && t[i - 1] + 1 >= n) t[--i] = 0;
      if (i == 0) break;
      ++t[i - 1];
    }
  }
  return Structure(vocab, n, std::move(rels));
}

namespace {

Formula random_literal(const FormulaShape& shape, const std::vector<std::string>& vars, Rng& rng) {
  const std::size_t kinds = shape.vocab.size() + (shape.equality ? 1 : 0);
  if (kinds == 0) throw Error(ErrorCode::InvalidArgument, "no relation symbols and no equality to build literals from");
  std::size_t k = draw(rng, kinds);
  Formula a;
  if (k == shape.vocab.size()) {
    a = equal(vars[draw(rng, vars.size())], vars[draw(rng, vars.size())]);
  } else {
    std::vector<std::string> args;
    for (std::size_t i = 0; i < shape.vocab[k].arity; ++i) args.push_back(vars[draw(rng, vars.size())]);
    a = atom(shape.vocab[k].name, std::move(args));
  }
  return coin(rng, 0.5) ? neg(a) : a;
}

Formula random_matrix(const FormulaShape& shape, const std::vector<std::string>& vars, std::size_t literals,
                      Rng& rng) {
  if (literals <= 1) return random_literal(shape, vars, rng);
  std::size_t left = 1 + draw(rng, literals - 1);
  Formula a = random_matrix(shape, vars, left, rng), b = random_matrix(shape, vars, literals - left, rng);
  return coin(rng, 0.5) ? conj({a, b}) : disj({a, b});
}

}  // namespace

Formula random_prenex_sentence(const FormulaShape& shape, Rng& rng) {
  std::size_t blocks = shape.cls == FragmentClass::QuantifierFree ? 0 : shape.t;
  if (shape.cls == FragmentClass::Other) throw Error(ErrorCode::InvalidArgument, "cannot generate fragment 'other'");
  if (blocks > shape.variables)
    throw Error(ErrorCode::InvalidArgument, "need at least one variable per quantifier block");
  // a quantifier-free sentence has no variables
  if (blocks == 0) return coin(rng, 0.5) ? f_true() : f_false();
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < shape.variables; ++i) vars.push_back("x" + std::to_string(i));
  // block sizes: one variable each, the rest spread at random
  std::vector<std::size_t> size(blocks, 1);
  for (std::size_t i = blocks; i < shape.variables; ++i) ++size[draw(rng, blocks)];
  Formula body;
  if (shape.conjunctive) {
    std::vector<Formula> lits;
    for (std::size_t i = 0; i < std::max<std::size_t>(1, shape.literals); ++i)
      lits.push_back(random_literal(shape, vars, rng));
    body = conj(std::move(lits));
  } else {
    body = random_matrix(shape, vars, std::max<std::size_t>(1, shape.literals), rng);
  }
  bool existential = shape.cls == FragmentClass::Sigma;
  std::size_t first = 0;
  std::vector<std::pair<FormulaKind, std::string>> prefix;
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t i = 0; i < size[b]; ++i)
      prefix.emplace_back(existential ? FormulaKind::Exists : FormulaKind::Forall, vars[first + i]);
    first += size[b];
    existential = !existential;
  }
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) body = quantify(it->first, it->second, body);
  return body;
}

}  // namespace fptmc
