#include "fptmc/treewidth.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "fptmc/error.hpp"

namespace fptmc {

std::vector<std::vector<int>> TreeDecomposition::children() const {
  std::vector<std::vector<int>> out(bags.size());
  for (std::size_t i = 0; i < parent.size(); ++i)
    if (parent[i] >= 0) out[static_cast<std::size_t>(parent[i])].push_back(static_cast<int>(i));
  return out;
}

long TreeDecomposition::width() const {
  long w = -1;
  for (const auto& b : bags) w = std::max(w, static_cast<long>(b.size()) - 1);
  return w;
}

namespace {

void check_tree(const TreeDecomposition& t) {
  const std::size_t m = t.bags.size();
  if (m == 0) throw Error(ErrorCode::InvalidDecomposition, "decomposition has no nodes");
  if (t.parent.size() != m) throw Error(ErrorCode::InvalidDecomposition, "parent table does not match the nodes");
  if (t.root < 0 || static_cast<std::size_t>(t.root) >= m || t.parent[t.root] != -1)
    throw Error(ErrorCode::InvalidDecomposition, "root is not a parentless node");
  for (std::size_t i = 0; i < m; ++i) {
    if (static_cast<int>(i) == t.root) continue;
    if (t.parent[i] < 0 || static_cast<std::size_t>(t.parent[i]) >= m)
      throw Error(ErrorCode::InvalidDecomposition, "node " + std::to_string(i) + " has no valid parent");
  }
  // every node reaches the root
  std::vector<char> state(m, 0);  // 0 unknown, 1 on the current walk, 2 reaches the root
  state[t.root] = 2;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::size_t> walk;
    std::size_t v = i;
    while (state[v] == 0) {
      state[v] = 1;
      walk.push_back(v);
      v = static_cast<std::size_t>(t.parent[v]);
    }
    if (state[v] == 1) throw Error(ErrorCode::InvalidDecomposition, "parent pointers form a cycle");
    for (std::size_t w : walk) state[w] = 2;
  }
  for (const auto& b : t.bags)
    if (!std::is_sorted(b.begin(), b.end()) || std::adjacent_find(b.begin(), b.end()) != b.end())
      throw Error(ErrorCode::InvalidDecomposition, "bags must be sorted without repetitions");
}

bool bag_has(const std::vector<Element>& bag, Element e) { return std::binary_search(bag.begin(), bag.end(), e); }

}  // namespace

long validate_td(const Structure& a, const TreeDecomposition& t) {
  check_tree(t);
  std::vector<std::vector<int>> where(a.n());
  for (std::size_t i = 0; i < t.bags.size(); ++i)
    for (Element e : t.bags[i]) {
      if (e >= a.n())
        throw Error(ErrorCode::InvalidDecomposition, "bag " + std::to_string(i) + " holds element " + std::to_string(e) +
                                                         " outside the universe");
      where[e].push_back(static_cast<int>(i));
    }
  for (Element e = 0; e < a.n(); ++e)
    if (where[e].empty()) throw Error(ErrorCode::ElementNotCovered, "element " + std::to_string(e) + " is in no bag");
  for (std::size_t r = 0; r < a.vocab().size(); ++r)
    for (const auto& tup : a.relation(r)) {
      if (tup.empty()) continue;
      bool covered = false;
      for (int node : where[tup[0]]) {
        bool all = true;
        for (Element e : tup) all = all && bag_has(t.bags[node], e);
        if (all) {
          covered = true;
          break;
        }
      }
      if (!covered) {
        std::string s;
        for (Element e : tup) s += " " + std::to_string(e);
        throw Error(ErrorCode::TupleNotCovered, a.vocab()[r].name + s + " lies in no bag");
      }
    }
  for (Element e = 0; e < a.n(); ++e) {
    std::size_t tops = 0;
    for (int node : where[e]) {
      int p = t.parent[node];
      if (p < 0 || !bag_has(t.bags[p], e)) ++tops;
    }
    if (tops != 1)
      throw Error(ErrorCode::DisconnectedOccurrence,
                  "the bags holding element " + std::to_string(e) + " do not form a subtree");
  }
  return t.width();
}

long validate_td(const Graph& g, const TreeDecomposition& t) { return validate_td(g.structure(), t); }

TreeDecomposition rooted(std::vector<std::vector<Element>> bags, const std::vector<std::pair<int, int>>& edges) {
  const std::size_t m = bags.size();
  if (m == 0) throw Error(ErrorCode::InvalidDecomposition, "decomposition has no nodes");
  if (edges.size() != m - 1)
    throw Error(ErrorCode::InvalidDecomposition, std::to_string(edges.size()) + " edges cannot join " +
                                                     std::to_string(m) + " nodes into a tree");
  std::vector<std::vector<int>> adj(m);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= m || static_cast<std::size_t>(v) >= m || u == v)
      throw Error(ErrorCode::InvalidDecomposition, "edge between invalid nodes");
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& b : bags) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }
  int root = 0;
  Element lowest = std::numeric_limits<Element>::max();
  for (std::size_t i = 0; i < m; ++i)
    if (!bags[i].empty() && bags[i][0] < lowest) {
      lowest = bags[i][0];
      root = static_cast<int>(i);
    }
  TreeDecomposition t;
  t.bags = std::move(bags);
  t.parent.assign(m, -2);
  t.root = root;
  t.parent[root] = -1;
  std::vector<int> stack{root};
  std::size_t seen = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj[u])
      if (t.parent[v] == -2) {
        t.parent[v] = u;
        ++seen;
        stack.push_back(v);
      }
  }
  if (seen != m) throw Error(ErrorCode::InvalidDecomposition, "decomposition tree is not connected");
  return t;
}

TreeDecomposition from_elimination_order(const Graph& g, const std::vector<Element>& order) {
  const std::size_t n = g.n();
  if (n == 0) return rooted({{}}, {});
  if (order.size() != n) throw Error(ErrorCode::InvalidArgument, "elimination order must list every vertex once");
  std::vector<std::size_t> pos(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (order[i] >= n || pos[order[i]] != n) throw Error(ErrorCode::InvalidArgument, "elimination order must list every vertex once");
    pos[order[i]] = i;
  }
  std::vector<std::set<Element>> adj(n);
  for (Element v = 0; v < n; ++v) adj[v].insert(g.neighbors(v).begin(), g.neighbors(v).end());
  std::vector<std::vector<Element>> bags(n);
  std::vector<std::pair<int, int>> edges;
  std::vector<int> roots;
  for (std::size_t i = 0; i < n; ++i) {
    Element v = order[i];
    std::vector<Element> later(adj[v].begin(), adj[v].end());
    bags[i] = later;
    bags[i].push_back(v);
    for (Element a : later) {
      adj[a].erase(v);
      for (Element b : later)
        if (a != b) adj[a].insert(b);
    }
    if (later.empty()) {
      roots.push_back(static_cast<int>(i));
    } else {
      Element first = *std::min_element(later.begin(), later.end(), [&](Element x, Element y) { return pos[x] < pos[y]; });
      edges.emplace_back(static_cast<int>(i), static_cast<int>(pos[first]));
    }
  }
  for (std::size_t i = 1; i < roots.size(); ++i) edges.emplace_back(roots[i - 1], roots[i]);
  return rooted(std::move(bags), edges);
}

std::vector<Element> min_fill_order(const Graph& g) {
  const std::size_t n = g.n();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (Element v = 0; v < n; ++v)
    for (Element u : g.neighbors(v)) adj[v][u] = 1;
  std::vector<char> gone(n, 0);
  std::vector<Element> order;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best_fill = std::numeric_limits<std::size_t>::max();
    Element best = 0;
    for (Element v = 0; v < n; ++v) {
      if (gone[v]) continue;
      std::vector<Element> nb;
      for (Element u = 0; u < n; ++u)
        if (!gone[u] && adj[v][u]) nb.push_back(u);
      std::size_t fill = 0;
      for (std::size_t i = 0; i < nb.size() && fill < best_fill; ++i)
        for (std::size_t j = i + 1; j < nb.size(); ++j)
          if (!adj[nb[i]][nb[j]]) ++fill;
      if (fill < best_fill) {
        best_fill = fill;
        best = v;
      }
    }
    std::vector<Element> nb;
    for (Element u = 0; u < n; ++u)
      if (!gone[u] && adj[best][u]) nb.push_back(u);
    for (Element a : nb)
      for (Element b : nb)
        if (a != b) adj[a][b] = 1;
    gone[best] = 1;
    order.push_back(best);
  }
  return order;
}

TreeDecomposition heuristic_td(const Graph& g) { return from_elimination_order(g, min_fill_order(g)); }

namespace {

std::pair<std::size_t, std::vector<Element>> exact_order(const Graph& g) {
  const std::size_t n = g.n();
  if (n > kExactTdLimit)
    throw Error(ErrorCode::TooLarge, "exact tree decomposition is limited to " + std::to_string(kExactTdLimit) +
                                         " vertices, got " + std::to_string(n));
  std::vector<unsigned> nb(n, 0);
  for (Element v = 0; v < n; ++v)
    for (Element u : g.neighbors(v)) nb[v] |= 1u << u;
  const unsigned full = n == 0 ? 0 : (1u << n) - 1;
  // vertices outside s ∪ {v} reachable from v through s
  auto q = [&](unsigned s, Element v) {
    unsigned seen = 1u << v, frontier = 1u << v, out = 0;
    while (frontier) {
      unsigned next = 0;
      for (Element u = 0; u < n; ++u)
        if (frontier >> u & 1u) next |= nb[u];
      next &= ~seen;
      seen |= next;
      out |= next & ~s;
      frontier = next & s;
    }
    return static_cast<std::size_t>(__builtin_popcount(out));
  };
  const std::size_t inf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> tw(std::size_t(1) << n, inf);
  std::vector<int> last(std::size_t(1) << n, -1);
  tw[0] = 0;
  for (unsigned s = 0; s <= full; ++s) {
    if (tw[s] == inf) continue;
    for (Element v = 0; v < n; ++v) {
      if (s >> v & 1u) continue;
      unsigned t = s | 1u << v;
      std::size_t w = std::max(tw[s], q(s, v));
      if (w < tw[t]) {
        tw[t] = w;
        last[t] = static_cast<int>(v);
      }
    }
    if (s == full) break;
  }
  std::vector<Element> order(n);
  unsigned s = full;
  for (std::size_t i = n; i-- > 0;) {
    order[i] = static_cast<Element>(last[s]);
    s &= ~(1u << last[s]);
  }
  return {tw[full], order};
}

}  // namespace

TreeDecomposition exact_td(const Graph& g) { return from_elimination_order(g, exact_order(g).second); }

std::size_t treewidth_exact(const Graph& g) { return exact_order(g).first; }

TreeDecomposition make_nice(const TreeDecomposition& t) {
  check_tree(t);
  const auto kids = t.children();
  TreeDecomposition out;
  auto add = [&](std::vector<Element> bag, NiceKind k, Element pivot, std::vector<int> below) {
    int id = static_cast<int>(out.bags.size());
    out.bags.push_back(std::move(bag));
    out.kind.push_back(k);
    out.pivot.push_back(pivot);
    out.parent.push_back(-1);
    for (int c : below) out.parent[c] = id;
    return id;
  };
  auto morph = [&](int top, const std::vector<Element>& from, const std::vector<Element>& to) {
    std::vector<Element> cur = from;
    for (Element e : from)
      if (!bag_has(to, e)) {
        cur.erase(std::find(cur.begin(), cur.end(), e));
        top = add(cur, NiceKind::Forget, e, {top});
      }
    for (Element e : to)
      if (!bag_has(from, e)) {
        cur.insert(std::upper_bound(cur.begin(), cur.end(), e), e);
        top = add(cur, NiceKind::Introduce, e, {top});
      }
    return top;
  };
  std::function<int(int)> build = [&](int node) {
    std::vector<int> tops;
    for (int c : kids[node]) tops.push_back(morph(build(c), t.bags[c], t.bags[node]));
    if (tops.empty()) return morph(add({}, NiceKind::Leaf, 0, {}), {}, t.bags[node]);
    int cur = tops[0];
    for (std::size_t i = 1; i < tops.size(); ++i) cur = add(t.bags[node], NiceKind::Join, 0, {cur, tops[i]});
    return cur;
  };
  out.root = build(t.root);
  out.parent[out.root] = -1;
  return out;
}

bool is_nice(const TreeDecomposition& t) {
  if (t.kind.size() != t.size() || t.pivot.size() != t.size()) return false;
  const auto kids = t.children();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& b = t.bags[i];
    switch (t.kind[i]) {
      case NiceKind::Leaf:
        if (!kids[i].empty() || !b.empty()) return false;
        break;
      case NiceKind::Introduce:
      case NiceKind::Forget: {
        if (kids[i].size() != 1) return false;
        const auto& c = t.bags[kids[i][0]];
        const auto& big = t.kind[i] == NiceKind::Introduce ? b : c;
        const auto& small = t.kind[i] == NiceKind::Introduce ? c : b;
        std::vector<Element> expect = small;
        expect.insert(std::upper_bound(expect.begin(), expect.end(), t.pivot[i]), t.pivot[i]);
        if (bag_has(small, t.pivot[i]) || expect != big) return false;
        break;
      }
      case NiceKind::Join:
        if (kids[i].size() != 2 || t.bags[kids[i][0]] != b || t.bags[kids[i][1]] != b) return false;
        break;
    }
  }
  return true;
}

TreeDecomposition parse_td(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::map<std::string, int> ids;
  std::vector<std::vector<Element>> bags;
  std::vector<std::pair<int, int>> edges;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "node") {
      std::string id, colon;
      if (!(ls >> id >> colon) || colon != ":") fail("expected `node <id> : <elements>`");
      if (ids.count(id)) fail("node " + id + " declared twice");
      ids[id] = static_cast<int>(bags.size());
      std::vector<Element> bag;
      std::string tok;
      while (ls >> tok) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) fail("bad element " + tok);
        bag.push_back(static_cast<Element>(std::stoul(tok)));
      }
      bags.push_back(std::move(bag));
    } else if (word == "edge") {
      std::string a, b, extra;
      if (!(ls >> a >> b) || (ls >> extra)) fail("expected `edge <id> <id>`");
      if (!ids.count(a) || !ids.count(b)) fail("edge mentions an undeclared node");
      edges.emplace_back(ids[a], ids[b]);
    } else {
      fail("unknown directive " + word);
    }
  }
  return rooted(std::move(bags), edges);
}

std::string write_td(const TreeDecomposition& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += "node " + std::to_string(i) + " :";
    for (Element e : t.bags[i]) out += " " + std::to_string(e);
    out += "\n";
  }
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t.parent[i] >= 0) out += "edge " + std::to_string(t.parent[i]) + " " + std::to_string(i) + "\n";
  return out;
}

}  // namespace fptmc
