#include "fptmc/sigma1.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "fptmc/error.hpp"
#include "fptmc/eval.hpp"
#include "fptmc/hom.hpp"
#include "fptmc/normal_forms.hpp"
#include "fptmc/treewidth.hpp"

namespace fptmc {

HomTarget hom_target(const Structure& a) {
  HomTarget t;
  Vocabulary vocab = a.vocab();
  std::vector<std::vector<Tuple>> rels = a.relations();
  auto add = [&](const std::string& base, std::size_t arity, std::vector<Tuple> tuples) {
    std::string name = vocab.fresh_name(base);
    vocab = vocab.with({name, arity});
    rels.push_back(std::move(tuples));
    return name;
  };
  for (const auto& r : a.vocab().symbols()) {
    std::vector<Tuple> all;
    Tuple tup(r.arity, 0);
    while (true) {
      if (!a.contains(r.name, tup)) all.push_back(tup);
      std::size_t i = r.arity;
      while (i > 0 && tup[i - 1] + 1 >= a.n()) tup[--i] = 0;
      if (i == 0) break;
      ++tup[i - 1];
    }
    t.complement[r.name] = add(r.name + "_c", r.arity, std::move(all));
  }
  std::vector<Tuple> eq, ne, full;
  for (Element x = 0; x < a.n(); ++x)
    for (Element y = 0; y < a.n(); ++y) {
      (x == y ? eq : ne).push_back({x, y});
      full.push_back({x, y});
    }
  t.eq = add("EQ", 2, std::move(eq));
  t.neq = add("NEQ", 2, std::move(ne));
  t.dummy_neg = add("S_c", 2, std::move(full));
  t.structure = Structure(vocab, a.n(), std::move(rels), a.provenance());
  return t;
}

namespace {

Formula existential_prenex(const Formula& phi) {
  if (!is_sentence(phi)) throw Error(ErrorCode::UnboundVariable, "expected a sentence");
  Formula p = to_prenex(phi);
  FragmentInfo info = classify(p);
  if (!(info.cls == FragmentClass::QuantifierFree || (info.cls == FragmentClass::Sigma && info.t == 1)))
    throw Error(ErrorCode::InvalidArgument, "expected an existential sentence, got " + fragment_name(info));
  return p;
}

void check_vocabulary(const Formula& phi, const Vocabulary& vocab) {
  for (const auto& sym : relations_used(phi)) {
    auto idx = vocab.find(sym.name);
    if (!idx) throw Error(ErrorCode::UnknownRelation, "relation " + sym.name + " is not in the vocabulary");
    if (vocab[*idx].arity != sym.arity) throw Error(ErrorCode::ArityMismatch, "relation " + sym.name + " used with wrong arity");
  }
}

std::map<std::string, Element> witness_of(const std::vector<std::string>& vars, const Mapping& h) {
  std::map<std::string, Element> w;
  for (std::size_t i = 0; i < vars.size(); ++i) w[vars[i]] = h[i];
  return w;
}

void verify_witness(const Structure& a, const Formula& matrix, const std::map<std::string, Element>& w) {
  Assignment alpha;
  alpha.vars = w;
  if (!eval_naive(a, matrix, alpha)) throw Error(ErrorCode::InvalidArgument, "internal: witness fails the matrix");
}

}  // namespace

HomQuery sigma1_hom_queries(const Formula& phi, const HomTarget& target, std::size_t max_disjuncts) {
  Prenex pre = split_prenex(phi);
  HomQuery q;
  std::map<std::string, Element> index;
  for (const auto& [kind, v] : pre.prefix) {
    if (kind != FormulaKind::Exists) throw Error(ErrorCode::InvalidArgument, "expected an existential prefix");
    index[v] = static_cast<Element>(q.variables.size());
    q.variables.push_back(v);
  }
  const Vocabulary& vocab = target.structure.vocab();
  auto rel_of = [&](const std::string& name) {
    auto idx = vocab.find(name);
    if (!idx) throw Error(ErrorCode::UnknownRelation, "relation " + name + " is not in the vocabulary");
    return *idx;
  };
  auto elem = [&](const std::string& v) {
    auto it = index.find(v);
    if (it == index.end()) throw Error(ErrorCode::UnboundVariable, "variable " + v + " is not quantified");
    return it->second;
  };
  std::set<std::pair<Element, Element>> graph_edges;
  if (!variables(pre.matrix).empty()) {
    Graph g = formula_graph(pre.matrix);
    for (auto [u, v] : g.edges()) {
      Element x = elem(g.provenance()[u]), y = elem(g.provenance()[v]);
      graph_edges.emplace(std::min(x, y), std::max(x, y));
    }
  }
  if (q.variables.empty()) return q;
  for (const auto& term : dnf_terms(pre.matrix, max_disjuncts)) {
    std::vector<std::vector<Tuple>> rels(vocab.size());
    std::set<std::pair<Element, Element>> covered;
    for (const auto& lit : term) {
      bool positive = lit.kind() != FormulaKind::Not;
      const Formula& at = positive ? lit : lit.child();
      Tuple t;
      for (const auto& v : at.args()) t.push_back(elem(v));
      std::size_t r;
      if (at.kind() == FormulaKind::Equal) {
        r = rel_of(positive ? target.eq : target.neq);
      } else {
        auto c = target.complement.find(at.relation());
        if (c == target.complement.end()) throw Error(ErrorCode::UnknownRelation, "relation " + at.relation() + " is not in the vocabulary");
        r = rel_of(positive ? at.relation() : c->second);
        if (vocab[r].arity != t.size()) throw Error(ErrorCode::ArityMismatch, "relation " + at.relation() + " used with wrong arity");
      }
      for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j)
          if (t[i] != t[j]) covered.emplace(std::min(t[i], t[j]), std::max(t[i], t[j]));
      rels[r].push_back(std::move(t));
    }
    std::size_t dummy = rel_of(target.dummy_neg);
    for (const auto& e : graph_edges)
      if (!covered.count(e)) rels[dummy].push_back({e.first, e.second});
    q.patterns.emplace_back(vocab, q.variables.size(), std::move(rels), q.variables);
  }
  return q;
}

Sigma1Result mc_sigma1_via_hom(const Structure& a, const Formula& phi, const Sigma1Options& opts) {
  check_vocabulary(phi, a.vocab());
  Formula p = existential_prenex(phi);
  HomTarget target = hom_target(a);
  HomQuery q = sigma1_hom_queries(p, target, opts.max_disjuncts);
  Sigma1Result res;
  if (q.variables.empty()) {
    auto terms = dnf_terms(split_prenex(p).matrix, opts.max_disjuncts);
    res.disjuncts = terms.size();
    res.holds = !terms.empty();
    return res;
  }
  res.disjuncts = q.patterns.size();
  for (const auto& b : q.patterns) {
    HomStats st;
    auto h = solve_hom(target.structure, b, &st);
    res.max_width = std::max(res.max_width, st.width);
    if (h) {
      res.holds = true;
      res.witness = witness_of(q.variables, *h);
      verify_witness(a, split_prenex(p).matrix, res.witness);
      break;
    }
  }
  return res;
}

std::vector<std::vector<std::size_t>> proper_colorings(std::size_t k, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                                      std::size_t colors) {
  std::vector<std::vector<std::size_t>> conflicts(k);
  for (auto [i, j] : pairs) {
    if (i >= k || j >= k) throw Error(ErrorCode::InvalidArgument, "coloring constraint outside the variables");
    if (i == j) return {};
    conflicts[std::max(i, j)].push_back(std::min(i, j));
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> gamma(k, 0);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == k) {
      out.push_back(gamma);
      return;
    }
    for (std::size_t c = 1; c <= colors; ++c) {
      bool ok = true;
      for (std::size_t j : conflicts[i]) ok = ok && gamma[j] != c;
      if (!ok) continue;
      gamma[i] = c;
      go(i + 1);
    }
  };
  go(0);
  return out;
}

Formula colored_conjunction(const std::vector<Formula>& literals, const std::vector<std::string>& vars,
                            const std::vector<std::size_t>& gamma, const std::vector<std::string>& colors) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < vars.size(); ++i) index[vars[i]] = i;
  std::vector<Formula> out;
  for (const auto& lit : literals) {
    if (lit.kind() == FormulaKind::Not && lit.child().kind() == FormulaKind::Equal) {
      const auto& args = lit.child().args();
      for (const auto& v : args) {
        std::size_t c = gamma.at(index.at(v));
        out.push_back(atom(colors.at(c - 1), {v}));
      }
    } else {
      out.push_back(lit);
    }
  }
  return conj(std::move(out));
}

Sigma1Result mc_sigma1_neq_color_coding(const Structure& a, const Formula& phi, const Sigma1Options& opts) {
  check_vocabulary(phi, a.vocab());
  Formula p = existential_prenex(phi);
  Prenex pre = split_prenex(p);
  std::vector<std::string> vars;
  for (const auto& [kind, v] : pre.prefix) vars.push_back(v);
  const std::size_t k = vars.size();
  Sigma1Result res;
  if (k == 0) {
    res = mc_sigma1_via_hom(a, p, opts);
    return res;
  }
  auto terms = dnf_terms(pre.matrix, opts.max_disjuncts);
  res.disjuncts = terms.size();

  HashFamily fam = build_hash_family(a.n(), k, opts.hash);
  res.hash_functions = fam.functions.size();
  res.error_bound = fam.error_bound;
  const std::vector<std::string> colors = color_names(a.vocab(), k);
  std::vector<HomTarget> targets;
  for (const auto& f : fam.functions) targets.push_back(hom_target(color_expand(a, f, k)));
  if (targets.empty()) return res;

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < k; ++i) index[vars[i]] = i;
  for (const auto& term : terms) {
    // only variables under an inequality receive a color
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> colored;
    for (const auto& lit : term)
      if (lit.kind() == FormulaKind::Not && lit.child().kind() == FormulaKind::Equal) {
        std::size_t i = index.at(lit.child().args()[0]), j = index.at(lit.child().args()[1]);
        pairs.emplace_back(i, j);
        for (std::size_t v : {i, j})
          if (std::find(colored.begin(), colored.end(), v) == colored.end()) colored.push_back(v);
      }
    std::sort(colored.begin(), colored.end());
    std::vector<std::pair<std::size_t, std::size_t>> local;
    for (auto [i, j] : pairs) {
      auto li = std::lower_bound(colored.begin(), colored.end(), i) - colored.begin();
      auto lj = std::lower_bound(colored.begin(), colored.end(), j) - colored.begin();
      local.emplace_back(static_cast<std::size_t>(li), static_cast<std::size_t>(lj));
    }
    for (const auto& partial : proper_colorings(colored.size(), local, k)) {
      ++res.colorings;
      std::vector<std::size_t> gamma(k, 0);
      for (std::size_t i = 0; i < colored.size(); ++i) gamma[colored[i]] = partial[i];
      Formula phi_gamma = exists(vars, colored_conjunction(term, vars, gamma, colors));
      HomQuery q = sigma1_hom_queries(phi_gamma, targets.front(), opts.max_disjuncts);
      const Structure& b = q.patterns.at(0);
      TreeDecomposition td = heuristic_td(gaifman(b));
      res.max_width = std::max(res.max_width, td.width());
      for (const auto& target : targets) {
        auto h = solve_hom(target.structure, b, td);
        if (h) {
          res.holds = true;
          res.witness = witness_of(vars, *h);
          verify_witness(a, pre.matrix, res.witness);
          return res;
        }
      }
    }
  }
  return res;
}

std::optional<Mapping> solve_emb(const Structure& a, const Structure& b, const Sigma1Options& opts, Sigma1Result* info) {
  if (!a.vocab().same_symbols(b.vocab()))
    throw Error(ErrorCode::VocabularyMismatch, "structures have different vocabularies");
  if (b.n() == 0) return Mapping{};
  if (b.n() > a.n()) return std::nullopt;
  Sigma1Result r = mc_sigma1_neq_color_coding(a, canonical_query(b).with_inequalities, opts);
  if (info) *info = r;
  if (!r.holds) return std::nullopt;
  Mapping h(b.n());
  for (std::size_t i = 0; i < b.n(); ++i) h[i] = r.witness.at("x" + std::to_string(i));
  if (!check_emb(a, b, h)) throw Error(ErrorCode::InvalidArgument, "internal: embedding failed verification");
  return h;
}

}  // namespace fptmc
