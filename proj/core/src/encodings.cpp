#include "fptmc/encodings.hpp"

#include <functional>
#include <map>
#include <set>

#include "fptmc/error.hpp"
#include "fptmc/normal_forms.hpp"

namespace fptmc {

namespace {

struct Fresh {
  std::set<std::string> used;
  std::size_t counter = 0;
  std::string operator()(const std::string& base) {
    while (true) {
      std::string s = base + std::to_string(++counter);
      if (used.insert(s).second) return s;
    }
  }
};

void require_prenex_sentence(const Formula& phi) {
  if (!is_prenex(phi) || !is_nnf(phi) || !is_sentence(phi))
    throw Error(ErrorCode::NotPrenexNNF, "expected a sentence in prenex negation normal form: " + to_string(phi));
}

std::string unary_name(const std::string& r) { return "U_" + r; }
std::string incidence_name(std::size_t i) { return "E" + std::to_string(i); }
std::string position_name(std::size_t i) { return "P" + std::to_string(i); }

Formula relativize(const Formula& f, const Vocabulary& tau, Fresh& fresh) {
  switch (f.kind()) {
    case FormulaKind::Exists:
      return exists(f.var(), conj({atom("U", {f.var()}), relativize(f.child(), tau, fresh)}));
    case FormulaKind::Forall:
      return forall(f.var(), implies(atom("U", {f.var()}), relativize(f.child(), tau, fresh)));
    case FormulaKind::Atom: {
      if (!tau.contains(f.relation()))
        throw Error(ErrorCode::UnknownRelation, "relation " + f.relation() + " is not in the vocabulary");
      std::string z = fresh("z");
      std::vector<Formula> parts{atom(unary_name(f.relation()), {z})};
      for (std::size_t i = 0; i < f.args().size(); ++i) parts.push_back(atom(incidence_name(i + 1), {f.args()[i], z}));
      return exists(z, conj(parts));
    }
    case FormulaKind::True:
    case FormulaKind::False:
    case FormulaKind::Equal:
      return f;
    default: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(relativize(c, tau, fresh));
      return rebuild(f, cs);
    }
  }
}

}  // namespace

Formula cycle_detector(const std::string& x, std::size_t length, const std::string& var_prefix) {
  std::vector<std::string> ys;
  for (std::size_t i = 1; i <= length; ++i) ys.push_back(var_prefix + std::to_string(i));
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < length; ++i)
    for (std::size_t j = i + 1; j < length; ++j) parts.push_back(neq(ys[i], ys[j]));
  for (const auto& y : ys) parts.push_back(neq(y, x));
  parts.push_back(atom("E", {x, ys[0]}));
  for (std::size_t i = 0; i < length; ++i) parts.push_back(atom("E", {ys[i], ys[(i + 1) % length]}));
  return exists(ys, conj(parts));
}

EncodingSteps encode_to_graph_steps(const Structure& a, const Formula& phi) {
  require_prenex_sentence(phi);
  const Vocabulary& tau = a.vocab();
  for (const auto& sym : relations_used(phi)) {
    auto idx = tau.find(sym.name);
    if (!idx || tau[*idx].arity != sym.arity)
      throw Error(ErrorCode::UnknownRelation, "relation " + sym.name + "/" + std::to_string(sym.arity) + " does not match the vocabulary");
  }
  const std::size_t s = tau.arity();
  EncodingSteps out;

  // step 1: incidence structure
  std::vector<Symbol> beta{{"U", 1}};
  for (const auto& r : tau.symbols()) beta.push_back({unary_name(r.name), 1});
  for (std::size_t i = 1; i <= s; ++i) beta.push_back({incidence_name(i), 2});
  Vocabulary bvocab(beta);

  std::vector<std::string> blabels;
  for (Element e = 0; e < a.n(); ++e) blabels.push_back(a.label(e));
  std::vector<std::vector<Tuple>> brel(bvocab.size());
  for (Element e = 0; e < a.n(); ++e) brel[0].push_back({e});
  for (std::size_t r = 0; r < tau.size(); ++r) {
    for (const auto& t : a.relation(r)) {
      Element b = static_cast<Element>(blabels.size());
      std::string label = "b(" + tau[r].name;
      for (Element e : t) label += " " + a.label(e);
      blabels.push_back(label + ")");
      brel[1 + r].push_back({b});
      for (std::size_t i = 0; i < t.size(); ++i) {
        brel[1 + tau.size() + i].push_back({t[i], b});
        brel[1 + tau.size() + i].push_back({b, t[i]});
      }
    }
  }
  out.incidence = Structure(bvocab, blabels.size(), brel, blabels);

  Fresh fresh;
  for (const auto& v : variables(phi)) fresh.used.insert(v);
  out.incidence_formula = relativize(phi, tau, fresh);

  // step 2: one edge relation, midpoints tagged by position
  std::vector<Symbol> gamma;
  for (std::size_t r = 0; r <= tau.size(); ++r) gamma.push_back(bvocab[r]);
  gamma.push_back({"E", 2});
  for (std::size_t i = 1; i <= s; ++i) gamma.push_back({position_name(i), 1});
  Vocabulary cvocab(gamma);
  const std::size_t e_index = tau.size() + 1;

  std::vector<std::string> clabels = blabels;
  std::vector<std::vector<Tuple>> crel(cvocab.size());
  for (std::size_t r = 0; r <= tau.size(); ++r) crel[r] = out.incidence.relation(r);
  for (std::size_t i = 1; i <= s; ++i) {
    for (const auto& t : out.incidence.relation(tau.size() + i)) {
      Element c = static_cast<Element>(clabels.size());
      clabels.push_back("c(" + std::to_string(i) + " " + blabels[t[0]] + " " + blabels[t[1]] + ")");
      for (Element end : {t[0], t[1]}) {
        crel[e_index].push_back({end, c});
        crel[e_index].push_back({c, end});
      }
      crel[e_index + i].push_back({c});
    }
  }
  out.midpoint = Structure(cvocab, clabels.size(), crel, clabels);

  Formula phi_c = out.incidence_formula;
  for (std::size_t i = 1; i <= s; ++i) {
    std::string pi = position_name(i);
    phi_c = replace_atoms(phi_c, incidence_name(i), [&](const std::vector<std::string>& args) {
      std::string w = fresh("w");
      return exists(w, conj({atom("E", {args[0], w}), atom("E", {w, args[1]}), atom(pi, {w})}));
    });
  }
  out.midpoint_formula = phi_c;

  // step 3: replace unary predicates by pendant odd cycles
  for (std::size_t i = 1; i <= s; ++i) out.predicates.push_back(position_name(i));
  for (std::size_t r = 0; r <= tau.size(); ++r) out.predicates.push_back(cvocab[r].name);

  std::vector<std::string> hlabels = clabels;
  std::vector<std::pair<Element, Element>> edges;
  for (const auto& t : out.midpoint.relation(e_index))
    if (t[0] < t[1]) edges.emplace_back(t[0], t[1]);
  Formula phi_h = phi_c;
  for (std::size_t q = 0; q < out.predicates.size(); ++q) {
    const std::string& name = out.predicates[q];
    std::size_t len = gadget_cycle_length(q + 1);
    out.cycle_lengths.push_back(len);
    for (const auto& t : out.midpoint.relation(name)) {
      Element first = static_cast<Element>(hlabels.size());
      for (std::size_t j = 0; j < len; ++j)
        hlabels.push_back("gadget(" + name + " " + clabels[t[0]] + " " + std::to_string(j) + ")");
      edges.emplace_back(t[0], first);
      for (std::size_t j = 0; j < len; ++j)
        edges.emplace_back(first + static_cast<Element>(j), first + static_cast<Element>((j + 1) % len));
    }
    phi_h = replace_atoms(phi_h, name, [&](const std::vector<std::string>& args) {
      std::string prefix;
      bool clash = true;
      while (clash) {
        prefix = fresh("g") + "_";
        clash = false;
        for (std::size_t j = 1; j <= len; ++j) clash = clash || fresh.used.count(prefix + std::to_string(j)) > 0;
      }
      for (std::size_t j = 1; j <= len; ++j) fresh.used.insert(prefix + std::to_string(j));
      return cycle_detector(args[0], len, prefix);
    });
  }
  out.graph = Graph::from_edges(hlabels.size(), edges, hlabels);
  out.graph_formula = to_prenex(phi_h);
  return out;
}

GraphEncoding encode_to_graph(const Structure& a, const Formula& phi) {
  EncodingSteps st = encode_to_graph_steps(a, phi);
  return GraphEncoding{st.graph, st.graph_formula};
}

ComplementExpansion complement_expansion(const Structure& a, const Formula& phi, std::size_t s) {
  if (a.vocab().arity() > s)
    throw Error(ErrorCode::ArityBoundExceeded,
                "vocabulary arity " + std::to_string(a.vocab().arity()) + " exceeds the bound " + std::to_string(s));
  require_prenex_sentence(phi);
  FragmentInfo info = classify(phi);
  bool positive = true;
  if (info.cls == FragmentClass::Sigma) positive = info.t % 2 == 1;
  if (info.cls == FragmentClass::Pi) positive = info.t % 2 == 0;

  Structure ext = a;
  Vocabulary vocab = a.vocab();
  std::map<std::string, std::string> comp;
  for (const auto& r : a.vocab().symbols()) {
    std::string name = vocab.fresh_name(r.name + "_c");
    vocab = vocab.with({name, r.arity});
    comp[r.name] = name;
    std::vector<Tuple> all;
    Tuple t(r.arity, 0);
    while (true) {
      if (!a.contains(r.name, t)) all.push_back(t);
      std::size_t i = r.arity;
      while (i > 0 && t[i - 1] + 1 == a.n()) t[--i] = 0;
      if (i == 0) break;
      ++t[i - 1];
    }
    ext = ext.expand({name, r.arity}, all);
  }

  std::function<Formula(const Formula&)> rewrite = [&](const Formula& f) -> Formula {
    if (f.kind() == FormulaKind::Atom) return positive ? f : neg(atom(comp.at(f.relation()), f.args()));
    if (f.kind() == FormulaKind::Not && f.child().kind() == FormulaKind::Atom)
      return positive ? atom(comp.at(f.child().relation()), f.child().args()) : f;
    if (f.children().empty()) return f;
    std::vector<Formula> cs;
    for (const auto& c : f.children()) cs.push_back(rewrite(c));
    return rebuild(f, cs);
  };
  return ComplementExpansion{ext, rewrite(phi), positive};
}

GraphEncoding encode_to_graph_arity_preserving(const Structure& a, const Formula& phi, std::size_t s) {
  ComplementExpansion ce = complement_expansion(a, phi, s);
  return encode_to_graph(ce.structure, ce.formula);
}

}  // namespace fptmc
