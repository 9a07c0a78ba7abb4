#include "fptmc/eval.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "fptmc/error.hpp"
#include "fptmc/normal_forms.hpp"

namespace fptmc {

namespace {

constexpr Element kUnbound = std::numeric_limits<Element>::max();

// ---------------------------------------------------------------- miniscoping

class Miniscoper {
 public:
  Formula run(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::And:
      case FormulaKind::Or: {
        std::vector<Formula> ch;
        for (const auto& c : f.children()) ch.push_back(run(c));
        return rebuild(f, std::move(ch));
      }
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        std::vector<std::string> vs;
        Formula g = f;
        while (g.kind() == f.kind()) {
          vs.push_back(g.var());
          g = g.child();
        }
        return push(f.kind(), vs, run(g));
      }
      default: return f;
    }
  }

 private:
  const std::set<std::string>& free(const Formula& f) {
    auto it = cache_.find(f.id());
    if (it != cache_.end()) return it->second.second;
    auto& slot = cache_[f.id()];
    slot.first = f;  // keeps the node alive so its address stays unique
    slot.second = free_variables(f);
    return slot.second;
  }

  Formula push(FormulaKind q, std::vector<std::string> xs, const Formula& g) {
    const auto& fv = free(g);
    xs.erase(std::remove_if(xs.begin(), xs.end(), [&](const std::string& x) { return !fv.count(x); }), xs.end());
    if (xs.empty()) return g;
    FormulaKind distributes = q == FormulaKind::Exists ? FormulaKind::Or : FormulaKind::And;
    FormulaKind splits = q == FormulaKind::Exists ? FormulaKind::And : FormulaKind::Or;
    if (g.kind() == distributes) {
      std::vector<Formula> ch;
      for (const auto& c : g.children()) ch.push_back(push(q, xs, c));
      return rebuild(g, std::move(ch));
    }
    if (g.kind() == q) {
      Formula h = g;
      while (h.kind() == q) {
        xs.push_back(h.var());
        h = h.child();
      }
      return push(q, xs, h);
    }
    if (g.kind() != splits) return quantify_all(q, xs, g);

    std::vector<Formula> ch(g.children());
    // variables local to a single conjunct move into it
    std::vector<std::vector<std::string>> local(ch.size());
    std::vector<std::string> shared;
    for (const auto& x : xs) {
      std::vector<std::size_t> with;
      for (std::size_t i = 0; i < ch.size(); ++i)
        if (free(ch[i]).count(x)) with.push_back(i);
      if (with.size() == 1) local[with[0]].push_back(x);
      else shared.push_back(x);
    }
    for (std::size_t i = 0; i < ch.size(); ++i)
      if (!local[i].empty()) ch[i] = push(q, local[i], ch[i]);
    if (shared.empty()) return rebuild(g, std::move(ch));

    std::vector<Formula> out;
    for (auto& [vs, members] : components(ch, shared)) {
      std::vector<Formula> part;
      for (std::size_t m : members) part.push_back(ch[m]);
      Formula body = rebuild(g, std::move(part));
      out.push_back(vs.size() >= 2 ? split_block(q, vs, body) : quantify_all(q, vs, body));
    }
    for (std::size_t i = 0; i < ch.size(); ++i)
      if (!touches(ch[i], shared)) out.push_back(ch[i]);
    return out.size() == 1 ? out[0] : rebuild(g, std::move(out));
  }

  bool touches(const Formula& f, const std::vector<std::string>& xs) {
    const auto& fv = free(f);
    for (const auto& x : xs)
      if (fv.count(x)) return true;
    return false;
  }

  // Children linked by the given variables, in order of their first member; children
  // mentioning none of the variables are left out.
  std::vector<std::pair<std::vector<std::string>, std::vector<std::size_t>>> components(const std::vector<Formula>& ch,
                                                                                    const std::vector<std::string>& xs) {
    std::vector<std::size_t> parent(ch.size());
    for (std::size_t i = 0; i < ch.size(); ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
      return parent[i] == i ? i : parent[i] = root(parent[i]);
    };
    std::map<std::string, std::size_t> owner;
    for (std::size_t i = 0; i < ch.size(); ++i) {
      const auto& fv = free(ch[i]);
      for (const auto& x : xs)
        if (fv.count(x)) {
          auto it = owner.find(x);
          if (it == owner.end()) owner[x] = i;
          else parent[root(i)] = root(it->second);
        }
    }
    std::map<std::size_t, std::size_t> slot;
    std::vector<std::pair<std::vector<std::string>, std::vector<std::size_t>>> out;
    for (std::size_t i = 0; i < ch.size(); ++i) {
      if (!touches(ch[i], xs)) continue;
      auto [it, fresh] = slot.try_emplace(root(i), out.size());
      if (fresh) out.emplace_back();
      out[it->second].second.push_back(i);
    }
    for (const auto& x : xs)
      if (owner.count(x)) out[slot.at(root(owner[x]))].first.push_back(x);
    return out;
  }

  // A connected block is split further when binding one variable first separates the
  // rest into independent parts or detaches conjuncts from them. Variables constrained
  // by an atom over already bound variables go first.
  Formula split_block(FormulaKind q, const std::vector<std::string>& xs, const Formula& body) {
    const auto& ch = body.children();
    const bool want = q == FormulaKind::Exists;
    std::tuple<bool, std::size_t, std::size_t> best{false, 0, 0};  // (anchored, parts, detached)
    std::size_t best_i = xs.size();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      std::vector<std::string> rest;
      for (std::size_t j = 0; j < xs.size(); ++j)
        if (j != i) rest.push_back(xs[j]);
      auto parts = components(ch, rest);
      std::size_t detached = 0;
      bool anchored = false, heavy = false;
      for (const auto& c : ch) {
        if (!free(c).count(xs[i])) continue;
        if (!touches(c, rest)) {
          ++detached;
          if (!is_literal(c)) heavy = true;
          const Formula& at = c.kind() == FormulaKind::Not ? c.child() : c;
          if (at.kind() == FormulaKind::Atom && (c.kind() != FormulaKind::Not) == want) anchored = true;
        }
      }
      if (parts.size() < 2) {
        // detaching conjuncts pays off when they carry quantifiers of their own or when
        // the remaining block depends on fewer outside variables
        if (detached == 0) continue;
        std::set<std::string> inner, outer;
        for (const auto& c : ch) {
          bool in_rest = touches(c, rest);
          for (const auto& v : free(c)) {
            if (std::find(xs.begin(), xs.end(), v) != xs.end() && v != xs[i]) continue;
            outer.insert(v);
            if (in_rest) inner.insert(v);
          }
        }
        outer.erase(xs[i]);
        if (!heavy && inner.size() > outer.size()) continue;
      }
      std::tuple<bool, std::size_t, std::size_t> score{anchored, parts.size(), detached};
      if (best_i == xs.size() || score > best) {
        best = score;
        best_i = i;
      }
    }
    if (best_i == xs.size()) return quantify_all(q, xs, body);
    std::vector<std::string> rest;
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (j != best_i) rest.push_back(xs[j]);
    return quantify(q, xs[best_i], push(q, rest, body));
  }

  static bool is_literal(const Formula& f) {
    const Formula& g = f.kind() == FormulaKind::Not ? f.child() : f;
    return g.kind() == FormulaKind::Atom || g.kind() == FormulaKind::Equal;
  }

  static Formula quantify_all(FormulaKind q, const std::vector<std::string>& xs, Formula body) {
    for (std::size_t i = xs.size(); i-- > 0;) body = quantify(q, xs[i], body);
    return body;
  }

  std::unordered_map<const Formula::Node*, std::pair<Formula, std::set<std::string>>> cache_;
};

// ---------------------------------------------------------------- relations

struct RelData {
  std::size_t arity = 0;
  const std::vector<Tuple>* tuples = nullptr;
  std::vector<Tuple> owned;
  bool radix = true;
  std::unordered_set<std::uint64_t> keys;
  std::set<Tuple> wide;
  // (bound-position mask, target-position mask) -> bound values -> candidate values
  std::map<std::pair<unsigned, unsigned>, std::unordered_map<std::uint64_t, std::vector<Element>>> proj;
};

enum class NT { True, False, Lit, Eq, And, Or, Block };

struct Hint {
  bool eq = false;
  int rel = -1;
  std::vector<int> slots;
  bool operator==(const Hint&) const = default;
  bool operator<(const Hint& o) const {
    return std::tie(eq, rel, slots) < std::tie(o.eq, o.rel, o.slots);
  }
};

struct CNode {
  NT t = NT::True;
  bool pos = true;
  int rel = -1;
  std::vector<int> slots;
  std::vector<int> kids;
  bool ex = true;
  std::vector<int> bound;
  std::vector<int> free;
  std::vector<Hint> hints;
  std::vector<int> uses;  // slots occurring free below this node, sorted
  // for blocks over a conjunction or disjunction: body children mentioning each bound slot
  std::map<int, std::vector<int>> touch;
  bool use_memo = false;
  // shared by all blocks with the same shape
  std::shared_ptr<std::unordered_map<std::uint64_t, char>> memo;
  // Path lookahead: slots required pairwise distinct, the binary atoms between them
  // a witness must satisfy, and the relations those atoms use.
  std::vector<int> distinct;
  std::map<int, std::vector<int>> links;
  int link_graph = -1;
};

enum class TV : char { F, T, U };

std::uint64_t pow_fits(std::uint64_t n, std::size_t r) {
  // Returns n^r or 0 if it does not fit comfortably in 63 bits.
  std::uint64_t p = 1;
  for (std::size_t i = 0; i < r; ++i) {
    if (n != 0 && p > (std::uint64_t(1) << 62) / n) return 0;
    p *= n;
  }
  return p;
}

}  // namespace

Formula miniscope(const Formula& nnf) {
  Miniscoper m;
  return m.run(nnf);
}

struct Evaluator::Impl {
  const Structure& a;
  std::uint64_t n;
  EvalOptions opts;
  std::vector<RelData> rels;
  int set_rel = -1;
  std::vector<CNode> nodes;
  int root = -1;
  std::vector<Element> val;
  std::vector<int> free_slots;
  std::uint64_t bindings = 0;
  std::map<std::vector<int>, int> link_graph_index;
  std::vector<std::vector<std::vector<Element>>> link_graphs;
  std::vector<std::uint32_t> mark;
  std::vector<std::size_t> dist;
  std::uint32_t stamp = 0;

  Impl(const Structure& s, const Formula& f, const std::vector<std::string>& free_order,
       const std::optional<SetVar>& setvar, EvalOptions o)
      : a(s), n(s.n()), opts(o) {
    for (std::size_t i = 0; i < a.vocab().size(); ++i) {
      RelData r;
      r.arity = a.vocab()[i].arity;
      r.tuples = &a.relation(i);
      rels.push_back(std::move(r));
    }
    std::map<std::string, int> relidx;
    for (std::size_t i = 0; i < a.vocab().size(); ++i) relidx[a.vocab()[i].name] = static_cast<int>(i);
    if (setvar) {
      RelData r;
      r.arity = setvar->arity;
      r.tuples = &r.owned;
      set_rel = static_cast<int>(rels.size());
      relidx[setvar->name] = set_rel;
      rels.push_back(std::move(r));
      rels.back().tuples = &rels.back().owned;
    }
    for (auto& r : rels) build_keys(r);

    std::map<std::string, int> env;
    int next_slot = 0;
    for (const auto& v : free_order) {
      env[v] = next_slot;
      free_slots.push_back(next_slot++);
    }
    for (const auto& v : free_variables(f))
      if (!env.count(v)) throw Error(ErrorCode::UnboundVariable, "free variable " + v + " has no value");

    Formula prepared = miniscope(rename_apart(to_nnf(f)));
    root = compile(prepared, env, next_slot, relidx);
    val.assign(static_cast<std::size_t>(next_slot), kUnbound);
    std::vector<int> scratch;
    finish(root, scratch);
    std::map<std::string, std::shared_ptr<std::unordered_map<std::uint64_t, char>>> shapes;
    share_memos(shapes);
  }

  // Blocks that agree up to renaming of slots share one memo table; the free slots of
  // each block are ordered by first occurrence so equal shapes produce equal keys.
  void share_memos(std::map<std::string, std::shared_ptr<std::unordered_map<std::uint64_t, char>>>& shapes) {
    for (std::size_t id = 0; id < nodes.size(); ++id) {
      CNode& c = nodes[id];
      if (c.t != NT::Block || !c.use_memo) continue;
      std::map<int, int> canon;
      std::string sig;
      signature(static_cast<int>(id), canon, sig);
      std::vector<std::pair<int, int>> order;
      for (int f : c.free) order.emplace_back(canon.at(f), f);
      std::sort(order.begin(), order.end());
      c.free.clear();
      for (auto& [k, f] : order) c.free.push_back(f);
      auto& m = shapes[sig];
      if (!m) m = std::make_shared<std::unordered_map<std::uint64_t, char>>();
      c.memo = m;
    }
  }

  void signature(int id, std::map<int, int>& canon, std::string& out) const {
    const CNode& c = nodes[id];
    auto slot = [&](int s) {
      auto it = canon.find(s);
      if (it == canon.end()) it = canon.emplace(s, static_cast<int>(canon.size())).first;
      out += std::to_string(it->second);
      out += ',';
    };
    out += static_cast<char>('a' + static_cast<int>(c.t));
    switch (c.t) {
      case NT::Lit:
        out += std::to_string(c.rel);
        [[fallthrough]];
      case NT::Eq:
        out += c.pos ? '+' : '-';
        for (int s : c.slots) slot(s);
        break;
      case NT::Block:
        out += c.ex ? 'E' : 'A';
        for (int b : c.bound) slot(b);
        break;
      default:
        break;
    }
    out += '(';
    for (int k : c.kids) signature(k, canon, out);
    out += ')';
  }

  void build_keys(RelData& r) {
    r.keys.clear();
    r.wide.clear();
    r.proj.clear();
    r.radix = pow_fits(n, r.arity) != 0;
    for (const auto& t : *r.tuples) {
      if (r.radix) r.keys.insert(encode(t.data(), t.size()));
      else r.wide.insert(t);
    }
  }

  std::uint64_t encode(const Element* e, std::size_t len) const {
    std::uint64_t k = 0;
    for (std::size_t i = len; i-- > 0;) k = k * n + e[i];
    return k;
  }

  int add(CNode c) {
    nodes.push_back(std::move(c));
    return static_cast<int>(nodes.size()) - 1;
  }

  int compile(const Formula& f, std::map<std::string, int>& env, int& next_slot, const std::map<std::string, int>& relidx) {
    auto slot_of = [&](const std::string& v) {
      auto it = env.find(v);
      if (it == env.end()) throw Error(ErrorCode::UnboundVariable, "unbound variable " + v);
      return it->second;
    };
    CNode c;
    switch (f.kind()) {
      case FormulaKind::True: c.t = NT::True; return add(std::move(c));
      case FormulaKind::False: c.t = NT::False; return add(std::move(c));
      case FormulaKind::Not:
      case FormulaKind::Atom:
      case FormulaKind::Equal: {
        const Formula& at = f.kind() == FormulaKind::Not ? f.child() : f;
        c.pos = f.kind() != FormulaKind::Not;
        for (const auto& v : at.args()) c.slots.push_back(slot_of(v));
        if (at.kind() == FormulaKind::Equal) {
          c.t = NT::Eq;
        } else {
          c.t = NT::Lit;
          auto it = relidx.find(at.relation());
          if (it == relidx.end()) throw Error(ErrorCode::UnknownRelation, "relation " + at.relation() + " not in vocabulary");
          if (rels[it->second].arity != at.args().size())
            throw Error(ErrorCode::ArityMismatch, "atom " + at.relation() + " has wrong arity");
          c.rel = it->second;
        }
        return add(std::move(c));
      }
      case FormulaKind::And:
      case FormulaKind::Or: {
        c.t = f.kind() == FormulaKind::And ? NT::And : NT::Or;
        std::vector<int> kids;
        for (const auto& ch : f.children()) kids.push_back(compile(ch, env, next_slot, relidx));
        // cheap children first
        std::stable_sort(kids.begin(), kids.end(), [&](int x, int y) { return rank(x) < rank(y); });
        c.kids = std::move(kids);
        return add(std::move(c));
      }
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        c.t = NT::Block;
        c.ex = f.kind() == FormulaKind::Exists;
        Formula g = f;
        std::map<std::string, int> saved;
        std::vector<std::string> names;
        while (g.kind() == f.kind()) {
          if (!saved.count(g.var())) saved[g.var()] = env.count(g.var()) ? env[g.var()] : -1;
          env[g.var()] = next_slot;
          c.bound.push_back(next_slot++);
          g = g.child();
        }
        c.kids.push_back(compile(g, env, next_slot, relidx));
        for (auto& [v, s] : saved) {
          if (s < 0) env.erase(v);
          else env[v] = s;
        }
        return add(std::move(c));
      }
      default: throw Error(ErrorCode::NotPrenexNNF, "unexpected connective after normalization");
    }
  }

  int rank(int id) const {
    switch (nodes[id].t) {
      case NT::True:
      case NT::False: return 0;
      case NT::Eq: return 1;
      case NT::Lit: return 2;
      case NT::And:
      case NT::Or: return 3;
      case NT::Block: return 4;
    }
    return 4;
  }

  // Computes free slots of blocks and hint lists; returns the slots used below id.
  void finish(int id, std::vector<int>& used) {
    CNode& c = nodes[id];
    if (c.t == NT::Lit || c.t == NT::Eq) {
      std::set<int> u(c.slots.begin(), c.slots.end());
      c.uses.assign(u.begin(), u.end());
      used.insert(used.end(), c.slots.begin(), c.slots.end());
      return;
    }
    std::vector<int> below;
    for (int k : std::vector<int>(c.kids)) finish(k, below);
    CNode& cc = nodes[id];
    if (cc.t != NT::Block) {
      std::set<int> u(below.begin(), below.end());
      cc.uses.assign(u.begin(), u.end());
    }
    if (cc.t == NT::Block) {
      std::set<int> fr(below.begin(), below.end());
      for (int b : cc.bound) fr.erase(b);
      cc.free.assign(fr.begin(), fr.end());
      cc.uses = cc.free;
      cc.use_memo = cc.free.size() <= 3 && pow_fits(n, cc.free.size()) != 0;
      plan_lookahead(id);
      const CNode& body = nodes[cc.kids[0]];
      if (body.t == NT::And || body.t == NT::Or) {
        std::map<int, std::vector<int>> touch;
        for (int b : cc.bound)
          for (int k : body.kids)
            if (std::binary_search(nodes[k].uses.begin(), nodes[k].uses.end(), b)) touch[b].push_back(k);
        nodes[id].touch = std::move(touch);
      }
      std::vector<Hint> all = necessary(cc.kids[0], cc.ex);
      for (const auto& h : all) {
        bool mine = false;
        for (int s : h.slots)
          if (std::find(cc.bound.begin(), cc.bound.end(), s) != cc.bound.end()) mine = true;
        if (mine) cc.hints.push_back(h);
      }
      used.insert(used.end(), fr.begin(), fr.end());
    } else {
      used.insert(used.end(), below.begin(), below.end());
    }
  }

  // Finds a large set of slots that must take distinct values in any witness (any
  // counterexample for universal blocks) together with the binary atoms among them.
  void plan_lookahead(int id) {
    const CNode& c = nodes[id];
    const CNode& body = nodes[c.kids[0]];
    if (body.t != (c.ex ? NT::And : NT::Or)) return;
    std::map<int, std::set<int>> neq;
    std::vector<std::pair<int, int>> edges;
    std::set<int> rels_used;
    for (int k : body.kids) {
      const CNode& kid = nodes[k];
      if (kid.slots.size() != 2 || kid.slots[0] == kid.slots[1]) continue;
      if (kid.t == NT::Eq && kid.pos != c.ex) {
        neq[kid.slots[0]].insert(kid.slots[1]);
        neq[kid.slots[1]].insert(kid.slots[0]);
      } else if (kid.t == NT::Lit && kid.pos == c.ex && kid.rel != set_rel) {
        edges.emplace_back(kid.slots[0], kid.slots[1]);
        rels_used.insert(kid.rel);
      }
    }
    if (edges.empty()) return;
    std::vector<int> order;
    for (auto& [v, ns] : neq) order.push_back(v);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return neq[x].size() > neq[y].size(); });
    std::vector<int> clique;
    for (int v : order) {
      bool ok = true;
      for (int u : clique)
        if (!neq[v].count(u)) ok = false;
      if (ok) clique.push_back(v);
    }
    std::set<int> in(clique.begin(), clique.end());
    std::map<int, std::vector<int>> links;
    for (auto [x, y] : edges)
      if (in.count(x) && in.count(y)) {
        links[x].push_back(y);
        links[y].push_back(x);
      }
    bool bound_link = false;
    for (auto& [v, ns] : links)
      if (std::find(c.bound.begin(), c.bound.end(), v) != c.bound.end()) bound_link = true;
    if (!bound_link) return;
    std::vector<int> key(rels_used.begin(), rels_used.end());
    auto [it, fresh] = link_graph_index.try_emplace(key, static_cast<int>(link_graphs.size()));
    if (fresh) {
      std::vector<std::vector<Element>> adj(n);
      for (int r : key)
        for (const auto& t : *rels[r].tuples)
          if (t[0] != t[1]) {
            adj[t[0]].push_back(t[1]);
            adj[t[1]].push_back(t[0]);
          }
      for (auto& v : adj) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
      }
      link_graphs.push_back(std::move(adj));
    }
    CNode& cc = nodes[id];
    cc.distinct = std::move(clique);
    cc.links = std::move(links);
    cc.link_graph = it->second;
  }

  // True when the bound values already rule out every witness: two bound distinct
  // slots joined through m unbound distinct slots need a path of at most m+1 edges
  // avoiding the other bound values.
  bool paths_blocked(const CNode& c) {
    const auto& adj = link_graphs[c.link_graph];
    if (mark.size() != n) {
      mark.assign(n, 0);
      dist.assign(n, 0);
    }
    std::vector<int> todo;
    for (int s : c.distinct)
      if (val[s] == kUnbound && c.links.count(s)) todo.push_back(s);
    std::set<int> done;
    for (int start : todo) {
      if (done.count(start)) continue;
      std::vector<int> comp{start}, att;
      done.insert(start);
      for (std::size_t i = 0; i < comp.size(); ++i)
        for (int t : c.links.at(comp[i])) {
          if (val[t] != kUnbound) {
            if (std::find(att.begin(), att.end(), t) == att.end()) att.push_back(t);
          } else if (done.insert(t).second) {
            comp.push_back(t);
          }
        }
      if (att.size() < 2) continue;
      const std::uint32_t blocked = ++stamp, reached = ++stamp;
      for (int d : c.distinct)
        if (val[d] != kUnbound) mark[val[d]] = blocked;
      Element src = val[att[0]];
      std::vector<Element> frontier{src};
      mark[src] = reached;
      dist[src] = 0;
      std::size_t limit = comp.size() + 1, found = 0;
      std::vector<char> hit(att.size(), 0);
      for (std::size_t head = 0; head < frontier.size() && found + 1 < att.size(); ++head) {
        Element u = frontier[head];
        if (dist[u] >= limit) break;
        for (Element w : adj[u]) {
          if (mark[w] == reached) continue;
          if (mark[w] == blocked) {
            for (std::size_t j = 1; j < att.size(); ++j)
              if (!hit[j] && val[att[j]] == w) {
                hit[j] = 1;
                ++found;
              }
            continue;
          }
          mark[w] = reached;
          dist[w] = dist[u] + 1;
          frontier.push_back(w);
        }
      }
      if (found + 1 < att.size()) return true;
    }
    return false;
  }

  // Atoms that must hold whenever the subformula takes the value want.
  std::vector<Hint> necessary(int id, bool want) const {
    const CNode& c = nodes[id];
    switch (c.t) {
      case NT::True:
      case NT::False: return {};
      case NT::Lit:
      case NT::Eq:
        if (c.pos != want) return {};
        return {Hint{c.t == NT::Eq, c.rel, c.slots}};
      case NT::And:
      case NT::Or: {
        bool unite = (c.t == NT::And) == want;
        std::vector<Hint> acc;
        bool first = true;
        for (int k : c.kids) {
          auto h = necessary(k, want);
          std::sort(h.begin(), h.end());
          h.erase(std::unique(h.begin(), h.end()), h.end());
          if (unite) {
            std::vector<Hint> m;
            std::set_union(acc.begin(), acc.end(), h.begin(), h.end(), std::back_inserter(m));
            acc = std::move(m);
          } else if (first) {
            acc = std::move(h);
          } else {
            std::vector<Hint> m;
            std::set_intersection(acc.begin(), acc.end(), h.begin(), h.end(), std::back_inserter(m));
            acc = std::move(m);
          }
          first = false;
        }
        return acc;
      }
      case NT::Block: {
        auto h = necessary(c.kids[0], want);
        std::vector<Hint> out;
        for (auto& x : h) {
          bool inner = false;
          for (int s : x.slots)
            if (std::find(c.bound.begin(), c.bound.end(), s) != c.bound.end()) inner = true;
          if (!inner) out.push_back(std::move(x));
        }
        return out;
      }
    }
    return {};
  }

  bool member(const RelData& r, const std::vector<int>& slots) const {
    Element buf[16];
    if (slots.size() <= 16 && r.radix) {
      for (std::size_t i = 0; i < slots.size(); ++i) buf[i] = val[slots[i]];
      return r.keys.count(encode(buf, slots.size())) != 0;
    }
    Tuple t;
    for (int s : slots) t.push_back(val[s]);
    if (r.radix) return r.keys.count(encode(t.data(), t.size())) != 0;
    return r.wide.count(t) != 0;
  }

  bool all_bound(const std::vector<int>& slots) const {
    for (int s : slots)
      if (val[s] == kUnbound) return false;
    return true;
  }

  std::uint64_t memo_key(const CNode& c) const {
    std::uint64_t k = 0;
    for (int s : c.free) k = k * n + val[s];
    return k;
  }

  TV kleene(int id) {
    CNode& c = nodes[id];
    switch (c.t) {
      case NT::True: return TV::T;
      case NT::False: return TV::F;
      case NT::Lit:
        if (!all_bound(c.slots)) return TV::U;
        return member(rels[c.rel], c.slots) == c.pos ? TV::T : TV::F;
      case NT::Eq:
        if (!all_bound(c.slots)) return TV::U;
        return (val[c.slots[0]] == val[c.slots[1]]) == c.pos ? TV::T : TV::F;
      case NT::And:
      case NT::Or: {
        TV absorbing = c.t == NT::And ? TV::F : TV::T;
        TV neutral = c.t == NT::And ? TV::T : TV::F;
        TV res = neutral;
        for (int k : c.kids) {
          TV v = kleene(k);
          if (v == absorbing) return absorbing;
          if (v == TV::U) res = TV::U;
        }
        return res;
      }
      case NT::Block:
        if (c.use_memo && all_bound(c.free)) return eval(id) ? TV::T : TV::F;
        return TV::U;
    }
    return TV::U;
  }

  bool eval(int id) {
    CNode& c = nodes[id];
    switch (c.t) {
      case NT::True: return true;
      case NT::False: return false;
      case NT::Lit: return member(rels[c.rel], c.slots) == c.pos;
      case NT::Eq: return (val[c.slots[0]] == val[c.slots[1]]) == c.pos;
      case NT::And:
        for (int k : c.kids)
          if (!eval(k)) return false;
        return true;
      case NT::Or:
        for (int k : c.kids)
          if (eval(k)) return true;
        return false;
      case NT::Block: {
        std::uint64_t key = 0;
        if (c.use_memo) {
          key = memo_key(c);
          auto it = c.memo->find(key);
          if (it != c.memo->end()) return it->second;
        }
        std::vector<int> remaining = c.bound;
        bool r = eval_block(id, remaining);
        CNode& again = nodes[id];
        if (again.use_memo && again.memo->size() < 4'000'000) again.memo->emplace(key, r ? 1 : 0);
        return r;
      }
    }
    return false;
  }

  const std::vector<Element>* candidates_from(const Hint& h, int s, std::vector<Element>& single) {
    if (h.eq) {
      int other = h.slots[0] == s ? h.slots[1] : h.slots[0];
      if (other == s || val[other] == kUnbound) return nullptr;
      single.assign(1, val[other]);
      return &single;
    }
    RelData& r = rels[h.rel];
    unsigned bmask = 0, pmask = 0;
    for (std::size_t i = 0; i < h.slots.size(); ++i) {
      if (h.slots[i] == s) pmask |= 1u << i;
      else if (val[h.slots[i]] != kUnbound) bmask |= 1u << i;
    }
    auto key_of = [&](const auto& get) {
      std::uint64_t k = 0;
      for (std::size_t i = h.slots.size(); i-- > 0;)
        if (bmask >> i & 1u) k = k * n + get(i);
      return k;
    };
    auto [it, fresh] = r.proj.try_emplace({bmask, pmask});
    auto& index = it->second;
    if (fresh) {
      std::size_t p0 = 0;
      while (!(pmask >> p0 & 1u)) ++p0;
      for (const auto& t : *r.tuples) {
        bool ok = true;
        for (std::size_t i = 0; i < t.size(); ++i)
          if ((pmask >> i & 1u) && t[i] != t[p0]) ok = false;
        if (!ok) continue;
        index[key_of([&](std::size_t i) { return t[i]; })].push_back(t[p0]);
      }
      for (auto& [k, v] : index) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
      }
    }
    static const std::vector<Element> kEmpty;
    auto f = index.find(key_of([&](std::size_t i) { return val[h.slots[i]]; }));
    return f == index.end() ? &kEmpty : &f->second;
  }

  bool eval_block(int id, std::vector<int>& remaining) {
    const bool ex = nodes[id].ex;
    const int body = nodes[id].kids[0];
    if (remaining.empty()) return eval(body);

    // pick the most constrained variable
    std::size_t best_i = 0;
    const std::vector<Element>* best = nullptr;
    std::size_t best_size = n;
    std::vector<Element> single_best, single;
    for (std::size_t i = 0; i < remaining.size() && best_size > 0; ++i) {
      int s = remaining[i];
      for (const auto& h : nodes[id].hints) {
        if (std::find(h.slots.begin(), h.slots.end(), s) == h.slots.end()) continue;
        const auto* cand = candidates_from(h, s, single);
        if (!cand) continue;
        if (cand->size() < best_size) {
          best_size = cand->size();
          best_i = i;
          if (cand == &single) {
            single_best = single;
            best = &single_best;
          } else {
            best = cand;
          }
        }
      }
    }
    int s = remaining[best_i];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_i));
    std::vector<Element> values;
    if (best) values = *best;
    bool result = !ex;
    std::size_t count = best ? values.size() : n;
    for (std::size_t j = 0; j < count; ++j) {
      if (++bindings > opts.max_bindings)
        throw Error(ErrorCode::TooLarge, "evaluation exceeded " + std::to_string(opts.max_bindings) + " bindings");
      val[s] = best ? values[j] : static_cast<Element>(j);
      TV tv = TV::U;
      const CNode& bn = nodes[body];
      if (bn.t == NT::And || bn.t == NT::Or) {
        // only the children mentioning s can have changed
        TV absorbing = bn.t == NT::And ? TV::F : TV::T;
        auto it = nodes[id].touch.find(s);
        if (it != nodes[id].touch.end())
          for (int k : it->second)
            if (kleene(k) == absorbing) {
              tv = absorbing;
              break;
            }
      } else {
        tv = kleene(body);
      }
      bool value;
      if (tv == TV::U && nodes[id].link_graph >= 0 && paths_blocked(nodes[id])) tv = ex ? TV::F : TV::T;
      if (tv == TV::U) value = eval_block(id, remaining);
      else value = tv == TV::T;
      if (value == ex) {
        result = ex;
        break;
      }
    }
    val[s] = kUnbound;
    remaining.insert(remaining.begin() + static_cast<std::ptrdiff_t>(best_i), s);
    return result;
  }
};

Evaluator::Evaluator(const Structure& a, const Formula& f, std::vector<std::string> free_order,
                     std::optional<SetVar> setvar, EvalOptions opts)
    : impl_(std::make_unique<Impl>(a, f, free_order, setvar, opts)) {}

Evaluator::~Evaluator() = default;

bool Evaluator::eval(const std::vector<Element>& free_values) {
  auto& im = *impl_;
  if (free_values.size() != im.free_slots.size())
    throw Error(ErrorCode::UnboundVariable, "wrong number of free variable values");
  for (std::size_t i = 0; i < free_values.size(); ++i) {
    if (free_values[i] >= im.n) throw Error(ErrorCode::ElementOutOfRange, "assignment outside universe");
    im.val[im.free_slots[i]] = free_values[i];
  }
  bool r = im.eval(im.root);
  for (int s : im.free_slots) im.val[s] = kUnbound;
  return r;
}

void Evaluator::set_relation(std::vector<Tuple> tuples) {
  auto& im = *impl_;
  if (im.set_rel < 0) throw Error(ErrorCode::InvalidArgument, "formula has no set variable");
  RelData& r = im.rels[im.set_rel];
  for (const auto& t : tuples) {
    if (t.size() != r.arity) throw Error(ErrorCode::ArityMismatch, "set variable tuple of wrong length");
    for (Element e : t)
      if (e >= im.n) throw Error(ErrorCode::ElementOutOfRange, "set variable tuple outside universe");
  }
  r.owned = std::move(tuples);
  r.tuples = &r.owned;
  im.build_keys(r);
  for (auto& c : im.nodes)
    if (c.memo) c.memo->clear();
}

std::uint64_t Evaluator::bindings() const { return impl_->bindings; }

bool eval_naive(const Structure& a, const Formula& f, const Assignment& alpha, const EvalOptions& opts) {
  std::vector<std::string> order;
  std::vector<Element> values;
  for (const auto& [v, e] : alpha.vars) {
    order.push_back(v);
    values.push_back(e);
  }
  Evaluator ev(a, f, order, alpha.setvar, opts);
  if (alpha.setvar) ev.set_relation(alpha.set);
  return ev.eval(values);
}

}  // namespace fptmc
