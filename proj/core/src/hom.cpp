#include "fptmc/hom.hpp"

#include <algorithm>

#include "fptmc/error.hpp"

namespace fptmc {

namespace {

struct Check {
  std::size_t rel_a;
  Tuple tuple_b;
};

std::vector<int> postorder(const TreeDecomposition& t) {
  const auto kids = t.children();
  std::vector<int> out, stack{t.root};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (int c : kids[v]) stack.push_back(c);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::size_t index_in(const std::vector<Element>& bag, Element e) {
  return static_cast<std::size_t>(std::lower_bound(bag.begin(), bag.end(), e) - bag.begin());
}

}  // namespace

std::optional<Mapping> solve_hom(const Structure& a, const Structure& b, const TreeDecomposition& td, HomStats* stats) {
  if (!a.vocab().same_symbols(b.vocab()))
    throw Error(ErrorCode::VocabularyMismatch, "structures have different vocabularies");
  try {
    validate_td(b, td);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidDecomposition, std::string("decomposition of B rejected: ") + e.what());
  }
  std::vector<std::vector<Check>> by_elem(b.n());
  for (std::size_t r = 0; r < b.vocab().size(); ++r) {
    std::size_t ra = *a.vocab().find(b.vocab()[r].name);
    for (const auto& t : b.relation(r)) {
      if (t.empty()) {
        if (a.relation(ra).empty()) return std::nullopt;
        continue;
      }
      Tuple distinct = t;
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      for (Element e : distinct) by_elem[e].push_back({ra, t});
    }
  }
  if (b.n() == 0) return Mapping{};
  if (a.n() == 0) return std::nullopt;

  TreeDecomposition nice = make_nice(td);
  const auto kids = nice.children();
  std::vector<std::vector<Tuple>> table(nice.size());
  std::size_t max_table = 0;
  for (int node : postorder(nice)) {
    const auto& bag = nice.bags[node];
    auto& out = table[node];
    switch (nice.kind[node]) {
      case NiceKind::Leaf: out.push_back({}); break;
      case NiceKind::Introduce: {
        Element v = nice.pivot[node];
        std::size_t p = index_in(bag, v);
        std::vector<const Check*> checks;
        for (const auto& c : by_elem[v]) {
          bool inside = true;
          for (Element e : c.tuple_b) inside = inside && std::binary_search(bag.begin(), bag.end(), e);
          if (inside) checks.push_back(&c);
        }
        Tuple img;
        for (const auto& entry : table[kids[node][0]]) {
          Tuple row(bag.size());
          for (std::size_t i = 0, j = 0; i < bag.size(); ++i)
            if (i != p) row[i] = entry[j++];
          for (Element x = 0; x < a.n(); ++x) {
            row[p] = x;
            bool ok = true;
            for (const Check* c : checks) {
              img.clear();
              for (Element e : c->tuple_b) img.push_back(row[index_in(bag, e)]);
              if (!a.contains(c->rel_a, img)) {
                ok = false;
                break;
              }
            }
            if (ok) out.push_back(row);
          }
        }
        std::sort(out.begin(), out.end());
        break;
      }
      case NiceKind::Forget: {
        const auto& child_bag = nice.bags[kids[node][0]];
        std::size_t p = index_in(child_bag, nice.pivot[node]);
        for (const auto& entry : table[kids[node][0]]) {
          Tuple row;
          for (std::size_t i = 0; i < entry.size(); ++i)
            if (i != p) row.push_back(entry[i]);
          out.push_back(std::move(row));
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        break;
      }
      case NiceKind::Join: {
        const auto& l = table[kids[node][0]];
        const auto& r = table[kids[node][1]];
        std::set_intersection(l.begin(), l.end(), r.begin(), r.end(), std::back_inserter(out));
        break;
      }
    }
    max_table = std::max(max_table, out.size());
  }
  if (stats) {
    stats->width = td.width();
    stats->nodes = nice.size();
    stats->max_table = max_table;
  }
  if (table[nice.root].empty()) return std::nullopt;

  Mapping h(b.n(), 0);
  std::vector<std::pair<int, Tuple>> stack{{nice.root, table[nice.root].front()}};
  while (!stack.empty()) {
    auto [node, entry] = std::move(stack.back());
    stack.pop_back();
    const auto& bag = nice.bags[node];
    for (std::size_t i = 0; i < bag.size(); ++i) h[bag[i]] = entry[i];
    switch (nice.kind[node]) {
      case NiceKind::Leaf: break;
      case NiceKind::Introduce: {
        std::size_t p = index_in(bag, nice.pivot[node]);
        Tuple row;
        for (std::size_t i = 0; i < entry.size(); ++i)
          if (i != p) row.push_back(entry[i]);
        stack.emplace_back(kids[node][0], std::move(row));
        break;
      }
      case NiceKind::Forget: {
        int c = kids[node][0];
        std::size_t p = index_in(nice.bags[c], nice.pivot[node]);
        for (const auto& cand : table[c]) {
          bool match = true;
          for (std::size_t i = 0, j = 0; i < cand.size() && match; ++i)
            if (i != p) match = cand[i] == entry[j++];
          if (match) {
            stack.emplace_back(c, cand);
            break;
          }
        }
        break;
      }
      case NiceKind::Join:
        stack.emplace_back(kids[node][0], entry);
        stack.emplace_back(kids[node][1], entry);
        break;
    }
  }
  if (!check_hom(a, b, h)) throw Error(ErrorCode::InvalidArgument, "internal: homomorphism failed verification");
  return h;
}

std::optional<Mapping> solve_hom(const Structure& a, const Structure& b, HomStats* stats) {
  return solve_hom(a, b, heuristic_td(gaifman(b)), stats);
}

Element hom_to_emb_element(const Structure& b, Element a_elem, Element b_elem) {
  return static_cast<Element>(a_elem * b.n() + b_elem);
}

Structure hom_to_emb(const Structure& a, const Structure& b) {
  if (!a.vocab().same_symbols(b.vocab()))
    throw Error(ErrorCode::VocabularyMismatch, "structures have different vocabularies");
  const std::size_t nb = b.n();
  std::vector<std::string> labels;
  for (Element x = 0; x < a.n(); ++x)
    for (Element y = 0; y < nb; ++y) labels.push_back("(" + a.label(x) + "," + b.label(y) + ")");
  std::vector<std::vector<Tuple>> rels(a.vocab().size());
  for (std::size_t r = 0; r < a.vocab().size(); ++r) {
    const std::size_t arity = a.vocab()[r].arity;
    if (nb == 0 && arity > 0) continue;
    for (const auto& t : a.relation(r)) {
      Tuple comp(arity, 0);
      while (true) {
        Tuple img(arity);
        for (std::size_t i = 0; i < arity; ++i) img[i] = hom_to_emb_element(b, t[i], comp[i]);
        rels[r].push_back(std::move(img));
        std::size_t i = arity;
        while (i > 0 && comp[i - 1] + 1 >= nb) comp[--i] = 0;
        if (i == 0) break;
        ++comp[i - 1];
      }
    }
  }
  return Structure(a.vocab(), a.n() * nb, std::move(rels), std::move(labels));
}

}  // namespace fptmc
