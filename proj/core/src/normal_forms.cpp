#include "fptmc/normal_forms.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "fptmc/error.hpp"

namespace fptmc {

namespace {

FormulaKind dual(FormulaKind k) {
  switch (k) {
    case FormulaKind::And: return FormulaKind::Or;
    case FormulaKind::Or: return FormulaKind::And;
    case FormulaKind::Exists: return FormulaKind::Forall;
    case FormulaKind::Forall: return FormulaKind::Exists;
    case FormulaKind::True: return FormulaKind::False;
    case FormulaKind::False: return FormulaKind::True;
    default: return k;
  }
}

Formula nnf(const Formula& f, bool negated) {
  switch (f.kind()) {
    case FormulaKind::True: return negated ? f_false() : f;
    case FormulaKind::False: return negated ? f_true() : f;
    case FormulaKind::Atom:
    case FormulaKind::Equal: return negated ? neg(f) : f;
    case FormulaKind::Not: return nnf(f.child(), !negated);
    case FormulaKind::And:
    case FormulaKind::Or: {
      std::vector<Formula> ch;
      for (const auto& c : f.children()) ch.push_back(nnf(c, negated));
      bool is_and = (f.kind() == FormulaKind::And) != negated;
      return is_and ? conj(std::move(ch)) : disj(std::move(ch));
    }
    case FormulaKind::Implies:
      if (negated) return conj({nnf(f.child(0), false), nnf(f.child(1), true)});
      return disj({nnf(f.child(0), true), nnf(f.child(1), false)});
    case FormulaKind::Iff: {
      const auto& a = f.child(0);
      const auto& b = f.child(1);
      if (negated) return disj({conj({nnf(a, false), nnf(b, true)}), conj({nnf(a, true), nnf(b, false)})});
      return conj({disj({nnf(a, true), nnf(b, false)}), disj({nnf(b, true), nnf(a, false)})});
    }
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      FormulaKind q = negated ? dual(f.kind()) : f.kind();
      return quantify(q, f.var(), nnf(f.child(), negated));
    }
  }
  return f;
}

class Renamer {
 public:
  explicit Renamer(const Formula& f) : free_(free_variables(f)) {
    for (const auto& v : variables(f)) taken_.insert(v);
  }

  Formula run(const Formula& f, const std::map<std::string, std::string>& env) {
    auto look = [&](const std::string& v) {
      auto it = env.find(v);
      return it == env.end() ? v : it->second;
    };
    switch (f.kind()) {
      case FormulaKind::Atom: {
        std::vector<std::string> a;
        for (const auto& v : f.args()) a.push_back(look(v));
        return atom(f.relation(), std::move(a));
      }
      case FormulaKind::Equal: return equal(look(f.args()[0]), look(f.args()[1]));
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        std::string name = f.var();
        if (free_.count(name) || !binders_.insert(name).second) {
          auto& c = counter_[f.var()];
          do {
            name = f.var() + "_" + std::to_string(++c);
          } while (taken_.count(name));
          taken_.insert(name);
          binders_.insert(name);
        }
        auto inner = env;
        inner[f.var()] = name;
        return quantify(f.kind(), name, run(f.child(), inner));
      }
      case FormulaKind::True:
      case FormulaKind::False: return f;
      default: {
        std::vector<Formula> ch;
        for (const auto& c : f.children()) ch.push_back(run(c, env));
        return rebuild(f, std::move(ch));
      }
    }
  }

 private:
  std::set<std::string> free_;
  std::set<std::string> taken_;
  std::set<std::string> binders_;
  std::map<std::string, std::size_t> counter_;
};

struct Block {
  FormulaKind q;
  std::vector<std::string> vars;
};
using Seq = std::vector<Block>;

struct PrefixPlan {
  Seq seq[2];  // [0]: first block existential, [1]: first block universal
  Formula matrix;
};

FormulaKind start_kind(int i) { return i == 0 ? FormulaKind::Exists : FormulaKind::Forall; }

PrefixPlan plan(const Formula& f) {
  PrefixPlan out;
  if (f.is_quantifier()) {
    PrefixPlan b = plan(f.child());
    int qi = f.kind() == FormulaKind::Exists ? 0 : 1;
    Seq s = b.seq[qi];
    if (s.empty()) s.push_back({f.kind(), {}});
    s[0].vars.insert(s[0].vars.begin(), f.var());
    out.seq[qi] = s;
    Seq other{{start_kind(1 - qi), {}}};
    other.insert(other.end(), s.begin(), s.end());
    out.seq[1 - qi] = std::move(other);
    out.matrix = b.matrix;
    return out;
  }
  if (f.kind() == FormulaKind::And || f.kind() == FormulaKind::Or) {
    std::vector<PrefixPlan> kids;
    std::vector<Formula> mats;
    for (const auto& c : f.children()) {
      kids.push_back(plan(c));
      mats.push_back(kids.back().matrix);
    }
    for (int t = 0; t < 2; ++t) {
      Seq merged;
      for (const auto& k : kids) {
        const Seq& s = k.seq[t];
        for (std::size_t p = 0; p < s.size(); ++p) {
          if (merged.size() <= p) merged.push_back({s[p].q, {}});
          merged[p].vars.insert(merged[p].vars.end(), s[p].vars.begin(), s[p].vars.end());
        }
      }
      out.seq[t] = std::move(merged);
    }
    out.matrix = rebuild(f, std::move(mats));
    return out;
  }
  out.matrix = f;
  return out;
}

std::pair<std::size_t, std::size_t> cost(const Seq& s) {
  std::size_t nonempty = 0;
  for (const auto& b : s)
    if (!b.vars.empty()) ++nonempty;
  return {nonempty, s.size()};
}

void graph_edges(const Formula& f, bool negated, bool drop_neq, std::map<std::string, Element>& ids,
                 std::vector<std::pair<Element, Element>>& edges) {
  switch (f.kind()) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      if (drop_neq && negated && f.kind() == FormulaKind::Equal) return;
      for (std::size_t i = 0; i < f.args().size(); ++i)
        for (std::size_t j = i + 1; j < f.args().size(); ++j)
          if (f.args()[i] != f.args()[j]) edges.emplace_back(ids.at(f.args()[i]), ids.at(f.args()[j]));
      return;
    case FormulaKind::Not: graph_edges(f.child(), !negated, drop_neq, ids, edges); return;
    default:
      for (const auto& c : f.children()) graph_edges(c, negated, drop_neq, ids, edges);
  }
}

Graph build_formula_graph(const Formula& f, bool drop_neq) {
  auto vars = variables(f);
  std::map<std::string, Element> ids;
  for (std::size_t i = 0; i < vars.size(); ++i) ids[vars[i]] = static_cast<Element>(i);
  std::vector<std::pair<Element, Element>> edges;
  graph_edges(drop_neq ? to_nnf(f) : f, false, drop_neq, ids, edges);
  if (vars.empty()) throw Error(ErrorCode::EmptyUniverse, "formula has no variables");
  return Graph::from_edges(vars.size(), edges, vars);
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf(f, false); }

Formula rename_apart(const Formula& f) {
  Renamer r(f);
  return r.run(f, {});
}

Formula to_prenex(const Formula& f) {
  PrefixPlan p = plan(rename_apart(to_nnf(f)));
  const Seq& best = cost(p.seq[0]) <= cost(p.seq[1]) ? p.seq[0] : p.seq[1];
  Formula out = p.matrix;
  for (auto b = best.rbegin(); b != best.rend(); ++b)
    for (auto v = b->vars.rbegin(); v != b->vars.rend(); ++v) out = quantify(b->q, *v, out);
  return out;
}

Prenex split_prenex(const Formula& f) {
  Prenex p;
  Formula g = f;
  while (g.is_quantifier()) {
    p.prefix.emplace_back(g.kind(), g.var());
    g = g.child();
  }
  p.matrix = g;
  return p;
}

FragmentInfo classify(const Formula& f) {
  if (!is_prenex(f)) throw Error(ErrorCode::NotPrenex, "classification needs a prenex formula");
  FragmentInfo info;
  Prenex p = split_prenex(f);
  for (std::size_t i = 0; i < p.prefix.size(); ++i) {
    if (i == 0 || p.prefix[i].first != p.prefix[i - 1].first) info.blocks.push_back(0);
    ++info.blocks.back();
  }
  info.rank = p.prefix.size();
  info.var_count = variables(f).size();
  for (const auto& s : relations_used(f)) info.vocab_arity = std::max(info.vocab_arity, s.arity);
  info.t = info.blocks.size();
  if (!is_nnf(p.matrix)) {
    info.cls = FragmentClass::Other;
  } else if (p.prefix.empty()) {
    info.cls = FragmentClass::QuantifierFree;
  } else {
    info.cls = p.prefix[0].first == FormulaKind::Exists ? FragmentClass::Sigma : FragmentClass::Pi;
  }
  return info;
}

std::string fragment_name(const FragmentInfo& info) {
  switch (info.cls) {
    case FragmentClass::QuantifierFree: return "quantifier-free";
    case FragmentClass::Sigma: return "Sigma" + std::to_string(info.t);
    case FragmentClass::Pi: return "Pi" + std::to_string(info.t);
    case FragmentClass::Other: return "other";
  }
  return "other";
}

bool in_sigma(const FragmentInfo& info, std::size_t t) {
  switch (info.cls) {
    case FragmentClass::QuantifierFree: return true;
    case FragmentClass::Sigma: return info.t <= t;
    case FragmentClass::Pi: return info.t + 1 <= t;
    default: return false;
  }
}

bool in_pi(const FragmentInfo& info, std::size_t t) {
  switch (info.cls) {
    case FragmentClass::QuantifierFree: return true;
    case FragmentClass::Pi: return info.t <= t;
    case FragmentClass::Sigma: return info.t + 1 <= t;
    default: return false;
  }
}

bool in_sigma_tu(const FragmentInfo& info, std::size_t t, std::size_t u) {
  if (!in_sigma(info, t)) return false;
  std::size_t first = info.cls == FragmentClass::Sigma ? 1 : 0;
  for (std::size_t i = first; i < info.blocks.size(); ++i)
    if (info.blocks[i] > u) return false;
  return true;
}

Graph formula_graph(const Formula& f) { return build_formula_graph(f, false); }
Graph formula_graph_neq(const Formula& f) { return build_formula_graph(f, true); }

CanonicalQuery canonical_query(const Structure& b) {
  std::vector<std::string> xs;
  for (std::size_t i = 0; i < b.n(); ++i) xs.push_back("x" + std::to_string(i));
  std::vector<Formula> ineqs, atoms;
  for (std::size_t i = 0; i < b.n(); ++i)
    for (std::size_t j = i + 1; j < b.n(); ++j) ineqs.push_back(neq(xs[i], xs[j]));
  for (std::size_t r = 0; r < b.vocab().size(); ++r)
    for (const auto& t : b.relation(r)) {
      std::vector<std::string> args;
      for (Element e : t) args.push_back(xs[e]);
      atoms.push_back(atom(b.vocab()[r].name, std::move(args)));
    }
  auto all = ineqs;
  all.insert(all.end(), atoms.begin(), atoms.end());
  return {exists(xs, conj(std::move(all))), exists(xs, conj(std::move(atoms)))};
}

std::vector<std::vector<Formula>> dnf_terms(const Formula& f, std::size_t max_terms) {
  using Terms = std::vector<std::vector<Formula>>;
  switch (f.kind()) {
    case FormulaKind::True: return Terms{{}};
    case FormulaKind::False: return Terms{};
    case FormulaKind::Or: {
      Terms out;
      for (const auto& c : f.children()) {
        auto t = dnf_terms(c, max_terms);
        out.insert(out.end(), t.begin(), t.end());
        if (out.size() > max_terms) throw Error(ErrorCode::DNFBlowup, "more than " + std::to_string(max_terms) + " disjuncts");
      }
      return out;
    }
    case FormulaKind::And: {
      Terms out{{}};
      for (const auto& c : f.children()) {
        auto t = dnf_terms(c, max_terms);
        if (out.size() * t.size() > max_terms)
          throw Error(ErrorCode::DNFBlowup, "more than " + std::to_string(max_terms) + " disjuncts");
        Terms next;
        for (const auto& a : out)
          for (const auto& b : t) {
            auto m = a;
            m.insert(m.end(), b.begin(), b.end());
            next.push_back(std::move(m));
          }
        out = std::move(next);
      }
      return out;
    }
    default:
      if (!f.is_literal()) throw Error(ErrorCode::NotPrenexNNF, "DNF needs a quantifier-free NNF formula");
      return Terms{{f}};
  }
}

}  // namespace fptmc
