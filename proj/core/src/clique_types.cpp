#include "fptmc/clique_types.hpp"

#include <functional>

#include "fptmc/error.hpp"
#include "fptmc/eval.hpp"
#include "fptmc/normal_forms.hpp"

namespace fptmc {

std::size_t pair_index(std::size_t i, std::size_t j) { return j * (j - 1) / 2 + i; }

PairRelation AtomicType::at(std::size_t i, std::size_t j) const {
  return i < j ? alpha[pair_index(i, j)] : alpha[pair_index(j, i)];
}

namespace {

bool triple_ok(PairRelation ab, PairRelation ac, PairRelation bc) {
  int eq = (ab == PairRelation::Equal) + (ac == PairRelation::Equal) + (bc == PairRelation::Equal);
  if (eq == 2) return false;
  if (eq == 1) {
    if (ab == PairRelation::Equal) return ac == bc;
    if (ac == PairRelation::Equal) return ab == bc;
    return ab == ac;
  }
  return true;
}

}  // namespace

bool is_consistent(const AtomicType& t) {
  if (t.alpha.size() != t.k * (t.k - (t.k > 0)) / 2) return false;
  for (std::size_t a = 0; a < t.k; ++a)
    for (std::size_t b = a + 1; b < t.k; ++b)
      for (std::size_t c = b + 1; c < t.k; ++c)
        if (!triple_ok(t.at(a, b), t.at(a, c), t.at(b, c))) return false;
  return true;
}

std::vector<AtomicType> consistent_types(std::size_t k) {
  std::vector<AtomicType> out;
  AtomicType t;
  t.k = k;
  const std::size_t pairs = k * (k - (k > 0)) / 2;
  t.alpha.assign(pairs, PairRelation::Equal);
  // pairs are assigned in storage order, so (i, j) comes after every pair inside {0..j-1}
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) {
    if (j >= k) {
      out.push_back(t);
      return;
    }
    for (PairRelation r : {PairRelation::Equal, PairRelation::Edge, PairRelation::Neither}) {
      t.alpha[pair_index(i, j)] = r;
      bool ok = true;
      for (std::size_t l = 0; l < i && ok; ++l) ok = triple_ok(t.at(l, i), t.at(l, j), t.at(i, j));
      if (!ok) continue;
      if (i + 1 < j) go(i + 1, j);
      else go(0, j + 1);
    }
  };
  go(0, 1);
  return out;
}

Formula type_formula(const AtomicType& t, const std::vector<std::string>& vars) {
  std::vector<Formula> cs;
  for (std::size_t j = 1; j < t.k; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      const auto& x = vars[i];
      const auto& y = vars[j];
      switch (t.at(i, j)) {
        case PairRelation::Equal: cs.push_back(equal(x, y)); break;
        case PairRelation::Edge: cs.push_back(atom("E", {x, y})); break;
        case PairRelation::Neither: cs.push_back(conj({neg(atom("E", {x, y})), neq(x, y)})); break;
      }
    }
  return conj(std::move(cs));
}

bool type_entails(const AtomicType& t, const Formula& qf, const std::vector<std::string>& vars) {
  // realize the type on its equality classes
  std::vector<Element> cls(t.k);
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < t.k; ++i) {
    cls[i] = static_cast<Element>(reps.size());
    for (std::size_t r = 0; r < reps.size(); ++r)
      if (t.at(reps[r], i) == PairRelation::Equal) {
        cls[i] = static_cast<Element>(r);
        break;
      }
    if (cls[i] == reps.size()) reps.push_back(i);
  }
  std::vector<std::pair<Element, Element>> edges;
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = a + 1; b < reps.size(); ++b)
      if (t.at(reps[a], reps[b]) == PairRelation::Edge) edges.emplace_back(a, b);
  Graph h = Graph::from_edges(reps.size(), edges);
  Assignment alpha;
  for (std::size_t i = 0; i < t.k; ++i) alpha.vars[vars[i]] = cls[i];
  return eval_naive(h.structure(), qf, alpha);
}

Graph type_product(const Graph& g, const AtomicType& t) {
  const std::size_t n = g.n();
  std::vector<std::pair<Element, Element>> edges;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < t.k; ++i)
    for (Element v = 0; v < n; ++v) labels.push_back("(" + std::to_string(i + 1) + "," + g.structure().label(v) + ")");
  for (std::size_t i = 0; i < t.k; ++i)
    for (std::size_t j = i + 1; j < t.k; ++j) {
      PairRelation r = t.at(i, j);
      for (Element v = 0; v < n; ++v)
        for (Element w = 0; w < n; ++w) {
          bool ok = r == PairRelation::Equal  ? v == w
                    : r == PairRelation::Edge ? g.adjacent(v, w)
                                              : v != w && !g.adjacent(v, w);
          if (ok) edges.emplace_back(static_cast<Element>(i * n + v), static_cast<Element>(j * n + w));
        }
    }
  return Graph::from_edges(t.k * n, edges, std::move(labels));
}

Formula clique_sentence(std::size_t k) {
  std::vector<std::string> vars;
  for (std::size_t i = 1; i <= k; ++i) vars.push_back("x" + std::to_string(i));
  std::vector<Formula> cs;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) cs.push_back(neq(vars[i], vars[j]));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) cs.push_back(atom("E", {vars[i], vars[j]}));
  return exists(vars, conj(std::move(cs)));
}

McInstance clique_to_mc(const Graph& g, std::size_t k) { return {g, clique_sentence(k)}; }

CliqueInstance mc_to_clique(const Graph& g, const Formula& phi, std::size_t max_variables) {
  if (!is_sentence(phi)) throw Error(ErrorCode::UnboundVariable, "expects a sentence");
  for (const auto& s : relations_used(phi))
    if (s.name != "E" || s.arity != 2) throw Error(ErrorCode::VocabularyMismatch, "graph sentences may only use E/2");
  Formula p = to_prenex(phi);
  FragmentInfo info = classify(p);
  if (!in_sigma(info, 1)) throw Error(ErrorCode::InvalidArgument, "expects an existential sentence");
  Prenex pre = split_prenex(p);
  CliqueInstance inst;
  for (const auto& [q, v] : pre.prefix) inst.variables.push_back(v);
  if (inst.variables.empty()) inst.variables.push_back("x");
  inst.k = inst.variables.size();
  if (inst.k > max_variables)
    throw Error(ErrorCode::TooManyVariables, std::to_string(inst.k) + " variables exceed the limit of " +
                                                 std::to_string(max_variables));
  for (const auto& t : consistent_types(inst.k))
    if (type_entails(t, pre.matrix, inst.variables)) inst.types.push_back(t);
  if (inst.types.empty()) {
    inst.k = std::max<std::size_t>(inst.k, 2);
    inst.graph = Graph::from_edges(inst.k, {});
    return inst;
  }
  std::vector<Graph> parts;
  for (const auto& t : inst.types) parts.push_back(type_product(g, t));
  inst.graph = disjoint_union(parts);
  return inst;
}

Formula type_disjunction(const CliqueInstance& inst) {
  std::vector<Formula> ds;
  for (const auto& t : inst.types) ds.push_back(exists(inst.variables, type_formula(t, inst.variables)));
  return disj(std::move(ds));
}

}  // namespace fptmc
