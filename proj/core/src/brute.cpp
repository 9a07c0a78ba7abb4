#include "fptmc/brute.hpp"

#include <cmath>
#include <functional>
#include <set>

#include "fptmc/error.hpp"
#include "fptmc/eval.hpp"
#include "fptmc/prop.hpp"

namespace fptmc {

double binomial(double n, double k) {
  if (k < 0 || k > n) return 0;
  double r = 1;
  for (double i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

namespace {

void guard(double candidates, const BruteOptions& opts, const char* what) {
  if (candidates > opts.max_candidates)
    throw Error(ErrorCode::TooLarge, std::string(what) + ": " + std::to_string(candidates) +
                                         " candidates exceed the guard of " + std::to_string(opts.max_candidates));
}

struct Constraint {
  std::size_t rel_a;
  Tuple tuple_b;
};

std::optional<Mapping> search_maps(const Structure& a, const Structure& b, bool injective, const BruteOptions& opts) {
  if (!a.vocab().same_symbols(b.vocab()))
    throw Error(ErrorCode::VocabularyMismatch, "structures have different vocabularies");
  guard(std::pow(double(a.n()), double(b.n())), opts, injective ? "brute_emb" : "brute_hom");
  if (injective && b.n() > a.n()) return std::nullopt;

  // each tuple is checked once its largest element has been mapped
  std::vector<std::vector<Constraint>> at(b.n());
  for (std::size_t r = 0; r < b.vocab().size(); ++r) {
    std::size_t ra = *a.vocab().find(b.vocab()[r].name);
    for (const auto& t : b.relation(r)) {
      Element mx = 0;
      for (Element e : t) mx = std::max(mx, e);
      at[mx].push_back({ra, t});
    }
  }
  Mapping h(b.n());
  std::vector<char> used(a.n(), 0);
  std::function<bool(Element)> go = [&](Element i) -> bool {
    if (i == b.n()) return true;
    for (Element v = 0; v < a.n(); ++v) {
      if (injective && used[v]) continue;
      h[i] = v;
      bool ok = true;
      for (const auto& c : at[i]) {
        Tuple img;
        for (Element e : c.tuple_b) img.push_back(h[e]);
        if (!a.contains(c.rel_a, img)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used[v] = 1;
      if (go(i + 1)) return true;
      used[v] = 0;
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  bool verified = injective ? check_emb(a, b, h) : check_hom(a, b, h);
  if (!verified) throw Error(ErrorCode::InvalidArgument, "internal: witness failed verification");
  return h;
}

template <class F>
bool for_each_subset(std::size_t n, std::size_t k, F&& visit) {
  // lexicographic k-subsets of {0..n-1}; visit returns true to stop
  if (k > n) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (visit(idx)) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::optional<Mapping> brute_hom(const Structure& a, const Structure& b, const BruteOptions& opts) {
  return search_maps(a, b, false, opts);
}

std::optional<Mapping> brute_emb(const Structure& a, const Structure& b, const BruteOptions& opts) {
  return search_maps(a, b, true, opts);
}

std::optional<std::vector<Element>> brute_clique(const Graph& g, std::size_t k, const BruteOptions& opts) {
  guard(binomial(double(g.n()), double(k)), opts, "brute_clique");
  std::vector<Element> cur;
  std::function<bool(Element)> go = [&](Element from) -> bool {
    if (cur.size() == k) return true;
    for (Element v = from; v < g.n(); ++v) {
      bool ok = true;
      for (Element u : cur)
        if (!g.adjacent(u, v)) ok = false;
      if (!ok) continue;
      cur.push_back(v);
      if (go(v + 1)) return true;
      cur.pop_back();
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  if (!check_clique(g, cur, k)) throw Error(ErrorCode::InvalidArgument, "internal: clique failed verification");
  return cur;
}

std::size_t count_cliques(const Graph& g, std::size_t k, const BruteOptions& opts) {
  guard(binomial(double(g.n()), double(k)), opts, "count_cliques");
  std::size_t count = 0;
  for_each_subset(g.n(), k, [&](const std::vector<std::size_t>& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j)
        if (!g.adjacent(static_cast<Element>(s[i]), static_cast<Element>(s[j]))) return false;
    ++count;
    return false;
  });
  return count;
}

std::optional<std::vector<bool>> brute_wsat(const PropFormula& phi, std::size_t k, const BruteOptions& opts) {
  std::size_t nv = phi.variables().size();
  guard(binomial(double(nv), double(k)), opts, "brute_wsat");
  std::optional<std::vector<bool>> found;
  for_each_subset(nv, k, [&](const std::vector<std::size_t>& s) {
    std::vector<bool> asg(nv, false);
    for (std::size_t i : s) asg[i] = true;
    if (phi.eval(asg)) {
      found = asg;
      return true;
    }
    return false;
  });
  if (found && !check_wsat(phi, *found, k)) throw Error(ErrorCode::InvalidArgument, "internal: assignment failed verification");
  return found;
}

std::optional<std::vector<Tuple>> brute_fagin(const Structure& a, const Formula& phi, const SetVar& x, std::size_t k,
                                              const BruteOptions& opts) {
  double space = std::pow(double(a.n()), double(x.arity));
  guard(binomial(space, double(k)), opts, "brute_fagin");
  std::vector<Tuple> all;
  Tuple t(x.arity, 0);
  std::function<void(std::size_t)> gen = [&](std::size_t i) {
    if (i == x.arity) {
      all.push_back(t);
      return;
    }
    for (Element e = 0; e < a.n(); ++e) {
      t[i] = e;
      gen(i + 1);
    }
  };
  gen(0);
  Evaluator ev(a, phi, {}, x);
  std::optional<std::vector<Tuple>> found;
  for_each_subset(all.size(), k, [&](const std::vector<std::size_t>& s) {
    std::vector<Tuple> b;
    for (std::size_t i : s) b.push_back(all[i]);
    ev.set_relation(b);
    if (ev.eval({})) {
      found = b;
      return true;
    }
    return false;
  });
  if (found && !check_fagin(a, phi, x, *found, k)) throw Error(ErrorCode::InvalidArgument, "internal: relation failed verification");
  return found;
}

bool check_hom(const Structure& a, const Structure& b, const Mapping& h) {
  if (h.size() != b.n() || !a.vocab().same_symbols(b.vocab())) return false;
  for (Element v : h)
    if (v >= a.n()) return false;
  for (std::size_t r = 0; r < b.vocab().size(); ++r) {
    std::size_t ra = *a.vocab().find(b.vocab()[r].name);
    for (const auto& t : b.relation(r)) {
      Tuple img;
      for (Element e : t) img.push_back(h[e]);
      if (!a.contains(ra, img)) return false;
    }
  }
  return true;
}

bool check_emb(const Structure& a, const Structure& b, const Mapping& h) {
  std::set<Element> seen(h.begin(), h.end());
  return seen.size() == h.size() && check_hom(a, b, h);
}

bool check_clique(const Graph& g, const std::vector<Element>& vs, std::size_t k) {
  if (vs.size() != k) return false;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i] >= g.n()) return false;
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (vs[i] == vs[j] || !g.adjacent(vs[i], vs[j])) return false;
  }
  return true;
}

bool check_wsat(const PropFormula& phi, const std::vector<bool>& assignment, std::size_t k) {
  if (assignment.size() != phi.variables().size()) return false;
  std::size_t w = 0;
  for (bool b : assignment) w += b ? 1 : 0;
  return w == k && phi.eval(assignment);
}

bool check_fagin(const Structure& a, const Formula& phi, const SetVar& x, const std::vector<Tuple>& b, std::size_t k) {
  std::set<Tuple> distinct(b.begin(), b.end());
  if (distinct.size() != k || b.size() != k) return false;
  Assignment alpha;
  alpha.setvar = x;
  alpha.set = b;
  return eval_naive(a, phi, alpha);
}

}  // namespace fptmc
