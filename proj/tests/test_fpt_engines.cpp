#include <doctest.h>

#include <set>

#include "fptmc/brute.hpp"
#include "fptmc/error.hpp"
#include "fptmc/eval.hpp"
#include "fptmc/fagin.hpp"
#include "fptmc/generate.hpp"
#include "fptmc/hash_family.hpp"
#include "fptmc/hom.hpp"
#include "fptmc/normal_forms.hpp"
#include "fptmc/parser.hpp"
#include "fptmc/sigma1.hpp"
#include "support.hpp"

using namespace fptmc;
using namespace fptmc::testing;

namespace {

const SetVar kX = fagin_set_variable();

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

Formula path_formula(std::size_t k) {
  std::vector<std::string> xs;
  std::vector<Formula> parts;
  for (std::size_t i = 1; i <= k; ++i) xs.push_back("x" + std::to_string(i));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) parts.push_back(neq(xs[i], xs[j]));
  for (std::size_t i = 0; i + 1 < k; ++i) parts.push_back(atom("E", {xs[i], xs[i + 1]}));
  return exists(xs, conj(parts));
}

std::set<std::pair<std::string, std::string>> labeled_edges(const Graph& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [u, v] : g.edges()) {
    auto a = g.structure().label(u), b = g.structure().label(v);
    out.insert(std::minmax(a, b));
  }
  return out;
}

}  // namespace

TEST_SUITE("fpt-engines") {

TEST_CASE("positivity of the example formulas") {
  CHECK(check_fagin_positive(phi_vc(), kX));
  CHECK_FALSE(check_fagin_positive(phi_ds(), kX));
  CHECK_FALSE(check_fagin_positive(phi_cli(), kX));
  CHECK(check_fagin_positive(phi_vc_l(2), kX));
  CHECK(code_of([] { fagin_normalize(phi_ds(), kX); }) == ErrorCode::NotPositive);
  CHECK(code_of([] { fagin_normalize(phi_cli(), kX); }) == ErrorCode::NotPositive);
}

TEST_CASE("normalizing the vertex-cover formula") {
  FaginProblem p = fagin_normalize(phi_vc(), kX);
  CHECK(p.universal.size() == 2);
  CHECK(p.disjuncts.size() == 3);
  std::size_t with_x = 0;
  for (const auto& d : p.disjuncts) with_x += !d.x_atoms.empty();
  CHECK(with_x == 2);
  FaginProblem again = fagin_normalize(fagin_normal_formula(p), kX);
  CHECK(fagin_normal_formula(again) == fagin_normal_formula(p));
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << (n * (n - 1) / 2)); ++mask) {
      Structure g = graph_from_mask(n, mask).structure();
      for (std::uint32_t xs = 0; xs < (1u << n); ++xs) {
        Assignment alpha;
        alpha.setvar = kX;
        for (Element v = 0; v < n; ++v)
          if (xs >> v & 1) alpha.set.push_back({v});
        CHECK(eval_naive(g, phi_vc(), alpha) == eval_naive(g, fagin_normal_formula(p), alpha));
      }
    }
}

TEST_CASE("the bounded-valence formula normalizes") {
  FaginProblem p = fagin_normalize(phi_vc_l(2), kX);
  CHECK(p.universal.size() == 3);
  CHECK_FALSE(p.disjuncts.empty());
}

TEST_CASE("precomputed relations") {
  Structure k2 = complete_graph(2).structure();
  FaginProblem p = fagin_normalize(phi_vc(), kX);
  FaginStar star = fagin_precompute(k2, p);
  bool found = false;
  for (std::size_t i = 0; i < p.disjuncts.size(); ++i)
    for (std::size_t j = 0; j < star.items[i].size(); ++j)
      if (star.items[i][j].relation) {
        CHECK(star.structure.relation(*star.items[i][j].relation) == std::vector<Tuple>{{0, 0}, {1, 1}});
        found = true;
      }
  CHECK(found);
  Formula taut = forall(std::vector<std::string>{"y", "z"}, disj({atom("X", {"y"}), disj({atom("E", {"y", "z"}), neg(atom("E", {"y", "z"}))})}));
  FaginProblem tp = fagin_normalize(taut, kX);
  FaginStar ts = fagin_precompute(path_graph(3).structure(), tp);
  for (std::size_t i = 0; i < tp.disjuncts.size(); ++i)
    for (const auto& item : ts.items[i])
      if (item.relation && tp.disjuncts[i].rest.size() == 1 &&
          tp.disjuncts[i].rest[0].kind() == FormulaKind::Or)
        CHECK(ts.structure.relation(*item.relation).size() == 9);
}

TEST_CASE("precomputed relations match naive evaluation") {
  Rng rng(51);
  FormulaShape shape;
  shape.vocab = vocab({{"E", 2}, {"P", 1}});
  shape.cls = FragmentClass::QuantifierFree;
  for (int i = 0; i < 50; ++i) {
    Structure a = random_structure(shape.vocab, 1 + draw(rng, 4), 0.4, rng);
    Formula psi = parse_formula(coin(rng, 0.5) ? "E(y,z) & !P(z)" : "EX w. E(y,w) & E(w,z)");
    FaginProblem p = fagin_normalize(forall(std::vector<std::string>{"y", "z"}, disj({atom("X", {"y"}), psi})), kX);
    FaginStar star = fagin_precompute(a, p);
    for (std::size_t d = 0; d < p.disjuncts.size(); ++d)
      for (std::size_t j = 0; j < star.items[d].size(); ++j) {
        const auto& item = star.items[d][j];
        if (!item.relation) continue;
        const Formula& f = p.disjuncts[d].rest[j];
        std::vector<std::string> names;
        for (std::size_t pos : item.args) names.push_back(p.universal[pos]);
        std::vector<Element> vals(names.size(), 0);
        while (true) {
          Assignment alpha;
          for (std::size_t q = 0; q < names.size(); ++q) alpha.vars[names[q]] = vals[q];
          CHECK(star.structure.contains(star.structure.vocab()[*item.relation].name, vals) == eval_naive(a, f, alpha));
          std::size_t q = 0;
          while (q < vals.size() && ++vals[q] == a.n()) vals[q++] = 0;
          if (q == vals.size()) break;
        }
      }
  }
}

TEST_CASE("bounded search over tuple families") {
  FaginProblem vc = fagin_normalize(phi_vc(), kX);
  auto w = check_phi(path_graph(3).structure(), vc, 1);
  REQUIRE(w);
  CHECK(*w == std::vector<Tuple>{{1}});
  CHECK_FALSE(check_phi(complete_graph(3).structure(), vc, 1));
  CHECK(check_phi(complete_graph(3).structure(), vc, 2));
  CHECK(check_phi(complete_graph(3).structure(), vc, 3));
  CHECK(code_of([&] { check_phi(complete_graph(3).structure(), vc, 4); }) == ErrorCode::KTooLarge);
  FaginStats st;
  check_phi(cycle_graph(6).structure(), vc, 3, &st);
  CHECK(st.peak_family >= 1);
}

TEST_CASE("bounded search agrees with brute force on random graphs") {
  Rng rng(52);
  std::vector<std::pair<Formula, FaginProblem>> cases{{phi_vc(), fagin_normalize(phi_vc(), kX)},
                                                      {phi_vc_l(2), fagin_normalize(phi_vc_l(2), kX)}};
  for (int i = 0; i < 300; ++i) {
    std::size_t n = 1 + draw(rng, 8), k = draw(rng, 4);
    if (k > n) k = n;
    Structure g = random_graph(n, 0.3, rng).structure();
    const auto& [phi, p] = cases[draw(rng, cases.size())];
    auto alg = check_phi(g, p, k);
    CHECK(alg.has_value() == brute_fagin(g, phi, kX, k).has_value());
    if (alg) CHECK(check_fagin(g, phi, kX, *alg, k));
  }
}

TEST_CASE("bounded search for vc_3 on small graphs") {
  Formula phi = phi_vc_l(3);
  FaginProblem p = fagin_normalize(phi, kX);
  Rng rng(53);
  for (int i = 0; i < 30; ++i) {
    std::size_t n = 1 + draw(rng, 5), k = std::min<std::size_t>(n, draw(rng, 3));
    Structure g = random_graph(n, 0.4, rng).structure();
    CHECK(check_phi(g, p, k).has_value() == brute_fagin(g, phi, kX, k).has_value());
  }
}

TEST_CASE("positive formulas are monotone in the set variable") {
  Rng rng(54);
  for (int i = 0; i < 100; ++i) {
    std::size_t n = 1 + draw(rng, 6);
    Structure g = random_graph(n, 0.4, rng).structure();
    Formula phi = coin(rng, 0.5) ? phi_vc() : phi_vc_l(2);
    Assignment small, big;
    small.setvar = big.setvar = kX;
    for (Element v = 0; v < n; ++v) {
      if (coin(rng, 0.4)) small.set.push_back({v});
      if (coin(rng, 0.4) || (!small.set.empty() && small.set.back() == Tuple{v})) big.set.push_back({v});
    }
    if (eval_naive(g, phi, small)) CHECK(eval_naive(g, phi, big));
  }
}

TEST_CASE("slicewise definitions") {
  Structure k2 = complete_graph(2).structure();
  CHECK(eval_naive(k2, fagin_to_slicewise(phi_cli(), kX, 2)));
  Formula zero = fagin_to_slicewise(phi_vc(), kX, 0);
  CHECK_FALSE(mentions_relation(zero, "X"));
  CHECK(eval_naive(Structure(graph_vocabulary(), 2, {{}}), zero));
  CHECK_FALSE(eval_naive(k2, zero));
  Rng rng(55);
  std::vector<Formula> phis{phi_vc(), phi_ds(), phi_cli()};
  for (int i = 0; i < 100; ++i) {
    std::size_t n = 1 + draw(rng, 4), k = draw(rng, 3);
    Structure g = random_graph(n, 0.5, rng).structure();
    const Formula& phi = phis[draw(rng, phis.size())];
    CHECK(eval_naive(g, fagin_to_slicewise(phi, kX, k)) == brute_fagin(g, phi, kX, k).has_value());
  }
}

TEST_CASE("homomorphisms to embeddings") {
  Structure loop(graph_vocabulary(), 1, {{{0, 0}}});
  Structure k2 = complete_graph(2).structure(), p3 = path_graph(3).structure();
  CHECK(brute_hom(loop, k2));
  Structure lb = hom_to_emb(loop, k2);
  CHECK(lb.n() == 2);
  CHECK(brute_emb(lb, k2));
  CHECK(brute_hom(k2, p3));
  CHECK_FALSE(brute_emb(k2, p3));
  Structure kb = hom_to_emb(k2, p3);
  CHECK(kb.n() == 6);
  CHECK(brute_emb(kb, p3));
  Rng rng(56);
  for (int i = 0; i < 60; ++i) {
    Structure a = random_structure(vocab({{"E", 2}}), 1 + draw(rng, 3), 0.4, rng);
    Structure b = random_structure(vocab({{"E", 2}}), 1 + draw(rng, 3), 0.4, rng);
    Structure ab = hom_to_emb(a, b);
    CHECK(ab.n() == a.n() * b.n());
    CHECK(brute_hom(a, b).has_value() == brute_emb(ab, b).has_value());
  }
}

TEST_CASE("homomorphism dynamic programming") {
  Rng rng(57);
  Vocabulary v = vocab({{"E", 2}, {"P", 1}});
  for (int i = 0; i < 500; ++i) {
    Structure a = random_structure(v, 1 + draw(rng, 6), 0.45, rng);
    Structure b = random_structure(v, 1 + draw(rng, 4), 0.3, rng);
    auto h = solve_hom(a, b);
    CHECK(h.has_value() == brute_hom(a, b).has_value());
    if (h) CHECK(check_hom(a, b, *h));
  }
  Structure single(graph_vocabulary(), 1, {{}});
  CHECK(solve_hom(random_graph(5, 0.3, rng).structure(), single));
  for (int i = 0; i < 5; ++i) {
    Graph big = random_graph(30, 0.05, rng);
    Structure path = path_graph(11).structure();
    CHECK(solve_hom(big.structure(), path).has_value() == (big.edge_count() > 0));
  }
  Structure c5 = cycle_graph(5).structure();
  TreeDecomposition bad = rooted({{0, 1}}, {});
  CHECK(code_of([&] { solve_hom(complete_graph(3).structure(), c5, bad); }) == ErrorCode::InvalidDecomposition);
  HomStats st;
  CHECK(solve_hom(complete_graph(3).structure(), c5, exact_td(gaifman(c5)), &st));
  CHECK(st.width == 2);
}

TEST_CASE("hash families") {
  HashFamily one = build_hash_family(5, 1);
  CHECK(one.functions.size() == 1);
  HashFamily three = build_hash_family(3, 3);
  bool bijective = false;
  for (const auto& f : three.functions) bijective = bijective || std::set<std::size_t>(f.begin(), f.end()).size() == 3;
  CHECK(bijective);
  for (std::size_t n = 1; n <= 12; ++n)
    for (std::size_t l = 1; l <= 4; ++l) CHECK_FALSE(uncovered_subset(build_hash_family(n, l)));
  for (const auto& f : build_hash_family(12, 3).functions)
    for (std::size_t c : f) CHECK((c >= 1 && c <= 3));
  HashOptions tight;
  tight.max_subsets = 100;
  CHECK(code_of([&] { build_hash_family(12, 3, tight); }) == ErrorCode::InfeasibleDeterministic);
}

TEST_CASE("randomized hash families") {
  HashOptions o;
  o.mode = HashMode::Randomized;
  o.seed = 9;
  o.epsilon = 1e-3;
  HashFamily f = build_hash_family(20, 3, o);
  CHECK(f.trials == randomized_trials(3, 1e-3));
  CHECK(f.trials == 139);
  CHECK(f.error_bound <= 1e-3);
  CHECK(f.functions == build_hash_family(20, 3, o).functions);
  CHECK(f.functions[5] == random_coloring(20, 3, 9, 5));
  o.seed = 10;
  CHECK(f.functions != build_hash_family(20, 3, o).functions);
  CHECK(code_of([] { randomized_trials(3, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("existential sentences via homomorphisms") {
  CHECK(mc_sigma1_via_hom(path_graph(3).structure(), path_formula(3)).holds);
  CHECK_FALSE(mc_sigma1_via_hom(complete_graph(2).structure(), path_formula(3)).holds);
  Formula unsat = parse_formula("EX x. EX y. E(x,y) & !E(x,y)");
  Rng rng(58);
  for (int i = 0; i < 10; ++i) CHECK_FALSE(mc_sigma1_via_hom(random_graph(1 + draw(rng, 5), 0.5, rng).structure(), unsat).holds);
  Sigma1Options cap;
  cap.max_disjuncts = 3;
  CHECK(code_of([&] {
          mc_sigma1_via_hom(path_graph(3).structure(),
                            parse_formula("EX x. EX y. (E(x,y) | x=y) & (E(y,x) | x=y) & (E(x,x) | y=y)"), cap);
        }) == ErrorCode::DNFBlowup);
  CHECK(code_of([] { mc_sigma1_via_hom(path_graph(3).structure(), parse_formula("ALL x. E(x,x)")); }) ==
        ErrorCode::InvalidArgument);
  Sigma1Result r = mc_sigma1_via_hom(path_graph(3).structure(), path_formula(3));
  CHECK(r.witness.size() == 3);
}

TEST_CASE("color coding agrees with naive evaluation") {
  Rng rng(59);
  FormulaShape shape;
  shape.vocab = vocab({{"E", 2}, {"P", 1}});
  shape.cls = FragmentClass::Sigma;
  shape.t = 1;
  shape.conjunctive = true;
  for (int i = 0; i < 200; ++i) {
    Structure a = random_structure(shape.vocab, 1 + draw(rng, 8), 0.3, rng);
    shape.variables = 1 + draw(rng, 4);
    shape.literals = 1 + draw(rng, 5);
    Formula phi = random_prenex_sentence(shape, rng);
    Sigma1Result r = mc_sigma1_neq_color_coding(a, phi);
    CHECK(r.holds == eval_naive(a, phi));
  }
}

TEST_CASE("color coding details") {
  Formula plain = parse_formula("EX x. EX y. E(x,y) & P(y)");
  Structure a(vocab({{"E", 2}, {"P", 1}}), 3, {{{0, 1}}, {{1}}});
  Sigma1Result r = mc_sigma1_neq_color_coding(a, plain);
  CHECK(r.holds == mc_sigma1_via_hom(a, plain).holds);
  CHECK(r.colorings == 1);
  Sigma1Result p = mc_sigma1_neq_color_coding(path_graph(3).structure(), path_formula(3));
  CHECK(p.holds);
  CHECK(p.max_width <= 2);
  Sigma1Options rnd;
  rnd.hash.mode = HashMode::Randomized;
  rnd.hash.epsilon = 1e-3;
  Sigma1Result q = mc_sigma1_neq_color_coding(path_graph(3).structure(), path_formula(3), rnd);
  CHECK(q.holds);
  CHECK(q.error_bound <= 1e-3);
}

TEST_CASE("proper colorings and colored formulas keep the inequality-free graph") {
  auto cs = proper_colorings(3, {{0, 1}, {1, 2}}, 3);
  CHECK(cs.size() == 12);
  for (const auto& g : cs) CHECK((g[0] != g[1] && g[1] != g[2]));
  CHECK(proper_colorings(2, {{0, 0}}, 2).empty());
  Rng rng(60);
  FormulaShape shape;
  shape.vocab = vocab({{"E", 2}});
  shape.conjunctive = true;
  for (int i = 0; i < 50; ++i) {
    shape.variables = 2 + draw(rng, 3);
    shape.literals = 2 + draw(rng, 4);
    Prenex pre = split_prenex(random_prenex_sentence(shape, rng));
    std::vector<Formula> lits = pre.matrix.kind() == FormulaKind::And ? pre.matrix.children() : std::vector<Formula>{pre.matrix};
    std::vector<std::string> vars;
    for (const auto& [q, v] : pre.prefix) vars.push_back(v);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    auto index = [&](const std::string& v) { return std::size_t(std::find(vars.begin(), vars.end(), v) - vars.begin()); };
    for (const auto& l : lits)
      if (l.kind() == FormulaKind::Not && l.child().kind() == FormulaKind::Equal)
        pairs.push_back({index(l.child().args()[0]), index(l.child().args()[1])});
    auto colors = color_names(shape.vocab, vars.size());
    for (const auto& gamma : proper_colorings(vars.size(), pairs, vars.size())) {
      Formula colored = exists(vars, colored_conjunction(lits, vars, gamma, colors));
      CHECK(labeled_edges(formula_graph(colored)) == labeled_edges(formula_graph_neq(exists(vars, conj(lits)))));
      break;
    }
  }
}

TEST_CASE("embeddings via color coding") {
  Rng rng(61);
  for (int i = 0; i < 300; ++i) {
    Structure a = random_graph(1 + draw(rng, 8), 0.35, rng).structure();
    Structure b = random_tree(1 + draw(rng, 4), rng).structure();
    auto e = solve_emb(a, b);
    CHECK(e.has_value() == brute_emb(a, b).has_value());
    if (e) CHECK(check_emb(a, b, *e));
  }
  CHECK(solve_emb(cycle_graph(4).structure(), path_graph(4).structure()));
  CHECK_FALSE(solve_emb(complete_bipartite_graph(3, 3).structure(), complete_graph(3).structure()));
}

TEST_CASE("randomized embeddings never give false positives") {
  Rng rng(62);
  Sigma1Options o;
  o.hash.mode = HashMode::Randomized;
  o.hash.epsilon = 1e-2;
  for (int i = 0; i < 100; ++i) {
    Structure a = random_graph(2 + draw(rng, 6), 0.3, rng).structure();
    Structure b = random_tree(2 + draw(rng, 3), rng).structure();
    o.hash.seed = i;
    auto e = solve_emb(a, b, o);
    if (e) CHECK(brute_emb(a, b).has_value());
  }
}

}  // TEST_SUITE
