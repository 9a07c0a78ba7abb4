#include "fptmc/fagin.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fptmc/brute.hpp"
#include "fptmc/error.hpp"
#include "fptmc/eval.hpp"
#include "fptmc/normal_forms.hpp"

namespace fptmc {

SetVar fagin_set_variable() { return {"X", 1}; }

Formula phi_vc() { return forall(std::vector<std::string>{"y", "z"}, implies(atom("E", {"y", "z"}), disj({atom("X", {"y"}), atom("X", {"z"})}))); }

Formula phi_ds() {
  return forall("y", exists("x", conj({atom("X", {"x"}), disj({equal("x", "y"), atom("E", {"x", "y"})})})));
}

Formula phi_cli() {
  return forall(std::vector<std::string>{"y", "z"}, implies(conj({atom("X", {"y"}), atom("X", {"z"})}),
                                    disj({equal("y", "z"), atom("E", {"y", "z"})})));
}

Formula at_most(std::size_t m, const std::string& v, const Formula& psi, const std::string& witness_prefix) {
  std::vector<std::string> ws;
  std::vector<Formula> eqs;
  for (std::size_t i = 1; i <= m; ++i) {
    ws.push_back(witness_prefix + std::to_string(i));
    eqs.push_back(equal(v, ws.back()));
  }
  return exists(ws, forall(v, implies(psi, disj(std::move(eqs)))));
}

Formula phi_vc_l(std::size_t l) {
  if (l == 0) throw Error(ErrorCode::InvalidArgument, "valence bound must be at least 1");
  Formula valence = forall("x", at_most(l, "z", atom("E", {"x", "z"}), "w"));
  std::vector<std::string> ys;
  std::vector<Formula> covered, marked{atom("X", {"y0"})};
  ys.push_back("y0");
  for (std::size_t i = 1; i <= l; ++i) {
    ys.push_back("y" + std::to_string(i));
    covered.push_back(equal("z", ys.back()));
    marked.push_back(atom("X", {ys.back()}));
  }
  Formula nbhd = forall("z", implies(atom("E", {"y0", "z"}), disj(std::move(covered))));
  return conj({valence, forall(ys, implies(nbhd, disj(std::move(marked))))});
}

namespace {

bool positive_in(const Formula& f, const std::string& x, bool under_exists) {
  switch (f.kind()) {
    case FormulaKind::Atom: return f.relation() != x || !under_exists;
    case FormulaKind::Not: return !mentions_relation(f, x);
    case FormulaKind::Exists: return positive_in(f.child(), x, true);
    default:
      for (const auto& c : f.children())
        if (!positive_in(c, x, under_exists)) return false;
      return true;
  }
}

struct Named {
  std::vector<std::vector<std::string>> x_atoms;
  std::vector<Formula> rest;
};

struct Norm {
  std::vector<std::string> vars;
  std::vector<Named> disjuncts;
};

Norm normalize(const Formula& f, const std::string& x, std::size_t cap) {
  if (!mentions_relation(f, x)) {
    if (f.kind() == FormulaKind::True) return {{}, {Named{}}};
    if (f.kind() == FormulaKind::False) return {};
    return {{}, {Named{{}, {f}}}};
  }
  switch (f.kind()) {
    case FormulaKind::Atom: return {{}, {Named{{f.args()}, {}}}};
    case FormulaKind::Forall: {
      Norm n = normalize(f.child(), x, cap);
      n.vars.insert(n.vars.begin(), f.var());
      return n;
    }
    case FormulaKind::Or: {
      Norm out;
      for (const auto& c : f.children()) {
        Norm n = normalize(c, x, cap);
        out.vars.insert(out.vars.end(), n.vars.begin(), n.vars.end());
        out.disjuncts.insert(out.disjuncts.end(), n.disjuncts.begin(), n.disjuncts.end());
        if (out.disjuncts.size() > cap) throw Error(ErrorCode::DNFBlowup, "more than " + std::to_string(cap) + " disjuncts");
      }
      return out;
    }
    case FormulaKind::And: {
      Norm out{{}, {Named{}}};
      for (const auto& c : f.children()) {
        Norm n = normalize(c, x, cap);
        out.vars.insert(out.vars.end(), n.vars.begin(), n.vars.end());
        if (double(out.disjuncts.size()) * double(n.disjuncts.size()) > double(cap))
          throw Error(ErrorCode::DNFBlowup, "more than " + std::to_string(cap) + " disjuncts");
        std::vector<Named> prod;
        for (const auto& a : out.disjuncts)
          for (const auto& b : n.disjuncts) {
            Named d = a;
            d.x_atoms.insert(d.x_atoms.end(), b.x_atoms.begin(), b.x_atoms.end());
            d.rest.insert(d.rest.end(), b.rest.begin(), b.rest.end());
            prod.push_back(std::move(d));
          }
        out.disjuncts = std::move(prod);
      }
      return out;
    }
    default: throw Error(ErrorCode::NotPositive, "set variable " + x + " is negated or existentially quantified");
  }
}

std::vector<Tuple> all_tuples(std::size_t n, std::size_t r) {
  std::vector<Tuple> out;
  Tuple t(r, 0);
  while (true) {
    out.push_back(t);
    std::size_t i = r;
    while (i > 0 && t[i - 1] + 1 >= n) t[--i] = 0;
    if (i == 0) break;
    ++t[i - 1];
  }
  return out;
}

}  // namespace

bool check_fagin_positive(const Formula& phi, const SetVar& x) { return positive_in(to_nnf(phi), x.name, false); }

FaginProblem fagin_normalize(const Formula& phi, const SetVar& x, std::size_t max_disjuncts) {
  if (!is_sentence(phi)) throw Error(ErrorCode::UnboundVariable, "Fagin formula must be a sentence");
  Formula f = rename_apart(to_nnf(phi));
  if (!positive_in(f, x.name, false))
    throw Error(ErrorCode::NotPositive, "set variable " + x.name + " is negated or existentially quantified");
  Norm n = normalize(f, x.name, max_disjuncts);
  FaginProblem p;
  p.formula = phi;
  p.x = x;
  p.universal = n.vars;
  auto pos = [&](const std::string& v) {
    auto it = std::find(p.universal.begin(), p.universal.end(), v);
    if (it == p.universal.end()) throw Error(ErrorCode::NotPositive, "X-atom argument " + v + " is not universal");
    return static_cast<std::size_t>(it - p.universal.begin());
  };
  for (const auto& d : n.disjuncts) {
    FaginDisjunct out;
    for (const auto& args : d.x_atoms) {
      if (args.size() != x.arity) throw Error(ErrorCode::ArityMismatch, "X-atom of wrong arity");
      std::vector<std::size_t> ps;
      for (const auto& v : args) ps.push_back(pos(v));
      out.x_atoms.push_back(std::move(ps));
    }
    out.rest = d.rest;
    p.disjuncts.push_back(std::move(out));
  }
  return p;
}

Formula fagin_normal_formula(const FaginProblem& p) {
  std::vector<Formula> ds;
  for (const auto& d : p.disjuncts) {
    std::vector<Formula> cs;
    for (const auto& args : d.x_atoms) {
      std::vector<std::string> names;
      for (std::size_t i : args) names.push_back(p.universal[i]);
      cs.push_back(atom(p.x.name, std::move(names)));
    }
    cs.insert(cs.end(), d.rest.begin(), d.rest.end());
    ds.push_back(conj(std::move(cs)));
  }
  return forall(p.universal, disj(std::move(ds)));
}

FaginStar fagin_precompute(const Structure& a, const FaginProblem& p) {
  FaginStar star;
  std::vector<Symbol> symbols;
  std::vector<std::vector<Tuple>> rels;
  for (std::size_t i = 0; i < p.disjuncts.size(); ++i) {
    std::vector<FaginStar::Item> items;
    for (std::size_t j = 0; j < p.disjuncts[i].rest.size(); ++j) {
      const Formula& psi = p.disjuncts[i].rest[j];
      auto fv = free_variables(psi);
      FaginStar::Item item;
      std::vector<std::string> order;
      for (std::size_t q = 0; q < p.universal.size(); ++q)
        if (fv.count(p.universal[q])) {
          item.args.push_back(q);
          order.push_back(p.universal[q]);
        }
      if (order.empty()) {
        item.closed_value = eval_naive(a, psi);
      } else {
        Evaluator ev(a, psi, order);
        std::vector<Tuple> tuples;
        for (auto& t : all_tuples(a.n(), order.size()))
          if (ev.eval(t)) tuples.push_back(std::move(t));
        item.relation = symbols.size();
        symbols.push_back({"R" + std::to_string(i + 1) + "_" + std::to_string(j + 1), order.size()});
        rels.push_back(std::move(tuples));
      }
      items.push_back(std::move(item));
    }
    star.items.push_back(std::move(items));
  }
  star.structure = Structure(Vocabulary(symbols), a.n(), std::move(rels));
  return star;
}

std::optional<std::vector<Tuple>> check_phi(const Structure& a, const FaginProblem& p, std::size_t k,
                                            FaginStats* stats) {
  return check_phi(a, p, fagin_precompute(a, p), k, stats);
}

std::optional<std::vector<Tuple>> check_phi(const Structure& a, const FaginProblem& p, const FaginStar& star,
                                            std::size_t k, FaginStats* stats) {
  const double space = std::pow(double(a.n()), double(p.x.arity));
  if (double(k) > space)
    throw Error(ErrorCode::KTooLarge, "k = " + std::to_string(k) + " exceeds |A|^r = " +
                                          std::to_string(static_cast<unsigned long long>(space)));
  if (std::pow(double(a.n()), double(p.universal.size())) > 1e8)
    throw Error(ErrorCode::TooLarge, "too many tuples for the universal variables");
  const std::size_t m = p.disjuncts.size(), l = p.universal.size();

  using Set = std::vector<Tuple>;
  std::set<Set> family{Set{}};
  FaginStats st;
  st.peak_family = 1;
  std::vector<char> rest_ok(m);
  std::vector<Set> needed(m);
  Tuple abar(l, 0), proj;
  for (const Tuple& t : all_tuples(a.n(), l)) {
    abar = t;
    ++st.tuples_checked;
    for (std::size_t i = 0; i < m; ++i) {
      rest_ok[i] = 1;
      for (const auto& item : star.items[i]) {
        if (!item.relation) {
          rest_ok[i] = rest_ok[i] && item.closed_value;
          continue;
        }
        proj.clear();
        for (std::size_t q : item.args) proj.push_back(abar[q]);
        rest_ok[i] = rest_ok[i] && star.structure.contains(*item.relation, proj);
      }
      needed[i].clear();
      if (!rest_ok[i]) continue;
      for (const auto& args : p.disjuncts[i].x_atoms) {
        Tuple x;
        for (std::size_t q : args) x.push_back(abar[q]);
        needed[i].push_back(std::move(x));
      }
      std::sort(needed[i].begin(), needed[i].end());
      needed[i].erase(std::unique(needed[i].begin(), needed[i].end()), needed[i].end());
    }
    std::set<Set> next;
    for (const Set& b : family) {
      bool holds = false;
      for (std::size_t i = 0; i < m && !holds; ++i)
        holds = rest_ok[i] && std::includes(b.begin(), b.end(), needed[i].begin(), needed[i].end());
      if (holds) {
        next.insert(b);
        continue;
      }
      for (std::size_t i = 0; i < m; ++i) {
        if (!rest_ok[i]) continue;
        Set ext;
        std::set_union(b.begin(), b.end(), needed[i].begin(), needed[i].end(), std::back_inserter(ext));
        if (ext.size() <= k) next.insert(std::move(ext));
      }
    }
    family = std::move(next);
    st.peak_family = std::max(st.peak_family, family.size());
    if (family.empty()) break;
  }
  st.final_family = family.size();
  if (stats) *stats = st;
  if (family.empty()) return std::nullopt;

  Set best = *family.begin();
  for (const Set& b : family)
    if (b.size() < best.size()) best = b;
  for (const Tuple& t : all_tuples(a.n(), p.x.arity)) {
    if (best.size() >= k) break;
    if (!std::binary_search(best.begin(), best.end(), t)) {
      best.insert(std::upper_bound(best.begin(), best.end(), t), t);
    }
  }
  if (!check_fagin(a, p.formula, p.x, best, k))
    throw Error(ErrorCode::InvalidArgument, "internal: Check-phi witness failed verification");
  return best;
}

Formula fagin_to_slicewise(const Formula& phi, const SetVar& x, std::size_t k) {
  auto used_list = variables(phi);
  std::set<std::string> used(used_list.begin(), used_list.end());
  auto fresh = [&](std::string name) {
    while (used.count(name)) name += "_";
    used.insert(name);
    return name;
  };
  std::vector<std::vector<std::string>> xs(k);
  std::vector<std::string> all;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t m = 0; m < x.arity; ++m) {
      xs[i].push_back(fresh("v" + std::to_string(i + 1) + "_" + std::to_string(m + 1)));
      all.push_back(xs[i].back());
    }
  Formula body = replace_atoms(phi, x.name, [&](const std::vector<std::string>& args) {
    std::vector<Formula> alts;
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<Formula> eqs;
      for (std::size_t m = 0; m < x.arity; ++m) eqs.push_back(equal(xs[i][m], args[m]));
      alts.push_back(conj(std::move(eqs)));
    }
    return disj(std::move(alts));
  });
  std::vector<Formula> cs;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      std::vector<Formula> diff;
      for (std::size_t m = 0; m < x.arity; ++m) diff.push_back(neq(xs[i][m], xs[j][m]));
      cs.push_back(disj(std::move(diff)));
    }
  cs.push_back(body);
  return exists(all, conj(std::move(cs)));
}

}  // namespace fptmc
