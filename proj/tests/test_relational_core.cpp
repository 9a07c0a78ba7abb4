#include <doctest.h>

#include "fptmc/encodings.hpp"
#include "fptmc/error.hpp"
#include "fptmc/eval.hpp"
#include "fptmc/generate.hpp"
#include "fptmc/normal_forms.hpp"
#include "fptmc/parser.hpp"
#include "fptmc/structure.hpp"
#include "fptmc/structure_io.hpp"
#include "support.hpp"

using namespace fptmc;
using namespace fptmc::testing;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

std::size_t odd_cycle_free_check(const Graph& g) {
  // number of vertices on odd closed walks found by 2-coloring components
  std::vector<int> color(g.n(), -1);
  std::size_t conflicts = 0;
  for (Element s = 0; s < g.n(); ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::vector<Element> stack{s};
    while (!stack.empty()) {
      Element v = stack.back();
      stack.pop_back();
      for (Element w : g.neighbors(v)) {
        if (color[w] == -1) {
          color[w] = 1 - color[v];
          stack.push_back(w);
        } else if (color[w] == color[v]) {
          ++conflicts;
        }
      }
    }
  }
  return conflicts;
}

}  // namespace

TEST_SUITE("relational-core") {

TEST_CASE("validate accepts K2 and rejects malformed data") {
  Structure k2(graph_vocabulary(), 2, {{{0, 1}, {1, 0}}});
  Graph g = Graph::from_structure(k2);
  CHECK(g.n() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(code_of([] { Structure(vocab({{"R", 3}}), 3, {{{0, 1}}}); }) == ErrorCode::ArityMismatch);
  CHECK(code_of([] { Structure(graph_vocabulary(), 0, {{}}); }) == ErrorCode::EmptyUniverse);
  CHECK(code_of([] { Structure(graph_vocabulary(), 2, {{{0, 2}}}); }) == ErrorCode::ElementOutOfRange);
  CHECK(code_of([] { Graph::from_structure(Structure(graph_vocabulary(), 2, {{{0, 1}}})); }) == ErrorCode::NotAGraph);
  CHECK(code_of([] { Graph::from_structure(Structure(graph_vocabulary(), 2, {{{0, 0}}})); }) == ErrorCode::NotAGraph);
}

TEST_CASE("vocabulary arity and structure size") {
  Vocabulary v = vocab({{"E", 2}, {"R", 3}, {"P", 1}});
  CHECK(v.arity() == 3);
  CHECK(Vocabulary().arity() == 0);
  Structure a(v, 4, {{{0, 1}, {1, 2}}, {{0, 1, 2}}, {{3}, {0}}});
  CHECK(a.size() == 4 + 2 * 2 + 3 * 1 + 1 * 2);
  CHECK(a.tuple_count() == 5);
}

TEST_CASE("size equals n plus arity times tuple count on random structures") {
  Rng rng(11);
  Vocabulary v = vocab({{"E", 2}, {"R", 3}, {"P", 1}});
  for (int i = 0; i < 50; ++i) {
    Structure a = random_structure(v, 1 + draw(rng, 5), 0.3, rng);
    std::size_t expected = a.n();
    for (std::size_t r = 0; r < v.size(); ++r) expected += v[r].arity * a.relation(r).size();
    CHECK(a.size() == expected);
  }
}

TEST_CASE("gaifman graph") {
  Graph tri = gaifman(Structure(vocab({{"R", 3}}), 3, {{{0, 1, 2}}}));
  CHECK(tri.edge_count() == 3);
  Graph empty = gaifman(Structure(vocab({{"R", 3}, {"P", 1}}), 4, {{}, {}}));
  CHECK(empty.edge_count() == 0);
  Graph one = gaifman(Structure(graph_vocabulary(), 3, {{{0, 1}, {1, 0}}}));
  CHECK(one.edge_count() == 1);
  CHECK(one.adjacent(0, 1));
  CHECK(one.degree(2) == 0);
}

TEST_CASE("gaifman graph is symmetric and irreflexive on random structures") {
  Rng rng(12);
  Vocabulary v = vocab({{"E", 2}, {"R", 3}});
  for (int i = 0; i < 50; ++i) {
    Structure a = random_structure(v, 1 + draw(rng, 6), 0.3, rng);
    Graph g = gaifman(a);
    CHECK(is_symmetric_irreflexive(g.structure(), 0));
    for (const auto& t : a.relation(1))
      for (Element x : t)
        for (Element y : t)
          if (x != y) CHECK(g.adjacent(x, y));
  }
}

TEST_CASE("disjoint union") {
  Graph u = disjoint_union({complete_graph(2), complete_graph(2)});
  CHECK(u.n() == 4);
  CHECK(u.edge_count() == 2);
  CHECK(u.adjacent(0, 1));
  CHECK(u.adjacent(2, 3));
  CHECK_FALSE(u.adjacent(1, 2));
  CHECK(u.structure().label(2) == "g1:0");
  CHECK(code_of([] { disjoint_union({}); }) == ErrorCode::EmptyUniverse);
  CHECK(disjoint_union({complete_graph(3)}).structure().relations() == complete_graph(3).structure().relations());
}

TEST_CASE("color expansion") {
  Structure k2 = complete_graph(2).structure();
  Structure c = color_expand(k2, {1, 1}, 3);
  auto names = color_names(k2.vocab(), 3);
  CHECK(c.relation(names[0]).size() == 2);
  CHECK(c.relation(names[1]).empty());
  CHECK(c.relation(names[2]).empty());
  Structure s = color_expand(path_graph(3).structure(), {1, 2, 3}, 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(s.relation(names[i]) == std::vector<Tuple>{{Element(i)}});
  Rng rng(13);
  Vocabulary v = vocab({{"E", 2}, {"P", 1}});
  for (int i = 0; i < 30; ++i) {
    Structure a = random_structure(v, 1 + draw(rng, 5), 0.4, rng);
    std::vector<std::size_t> f(a.n());
    for (auto& x : f) x = 1 + draw(rng, 3);
    CHECK(color_expand(a, f, 3).reduct(a.vocab()) == a);
  }
}

TEST_CASE("structure text format round trip and symmetrize flag") {
  const std::string text = "# path\nvocab E 2\nuniverse 3\nE 0 1\nE 1 2\n";
  Structure half = parse_structure(text);
  CHECK(half.relation(0).size() == 2);
  StructureReadOptions o;
  o.symmetrize = true;
  Structure full = parse_structure(text, o);
  CHECK(full.relation(0).size() == 4);
  CHECK(parse_structure(write_structure(full)) == full);
  CHECK(code_of([] { parse_structure("vocab E 2\nuniverse 2\nE 0\n"); }) == ErrorCode::ArityMismatch);
  CHECK(code_of([] { parse_structure("vocab E 2\nuniverse 2\nF 0 1\n"); }) == ErrorCode::UnknownRelation);
  std::string dot = graph_to_dot(path_graph(3));
  CHECK(dot.find("0 -- 1") != std::string::npos);
  CHECK(dot.find("1 -- 0") == std::string::npos);
}

TEST_CASE("graph encoding of K2") {
  Structure k2 = complete_graph(2).structure();
  Formula phi = parse_formula("EX x. EX y. E(x,y)");
  EncodingSteps steps = encode_to_graph_steps(k2, phi);
  CHECK(steps.incidence.n() == 4);
  CHECK(eval_naive(steps.incidence, steps.incidence_formula));
  CHECK(eval_naive(steps.midpoint, steps.midpoint_formula));
  GraphEncoding enc = encode_to_graph(k2, phi);
  CHECK(in_sigma(classify(enc.formula), 2));
  CHECK(classify(enc.formula).t <= 2);
  CHECK(eval_naive(enc.graph.structure(), enc.formula));
  // negated unary atoms turn into negated existential detectors: one extra block
  Structure p(vocab({{"E", 2}, {"P", 1}}), 2, {{{0, 1}}, {{0}}});
  GraphEncoding neg = encode_to_graph(p, parse_formula("EX x. EX y. E(x,y) & !P(y)"));
  CHECK(in_sigma(classify(neg.formula), 2));
  CHECK(eval_naive(neg.graph.structure(), neg.formula));
  CHECK(code_of([&] { encode_to_graph(k2, parse_formula("!(EX x. EX y. E(x,y))")); }) == ErrorCode::NotPrenexNNF);
}

TEST_CASE("graph encoding gadgets use odd cycles of distinct lengths") {
  for (std::size_t i = 1; i <= 4; ++i) CHECK(gadget_cycle_length(i) % 2 == 1);
  Structure a = Structure(vocab({{"E", 2}, {"P", 1}}), 2, {{{0, 1}}, {{0}}});
  EncodingSteps steps = encode_to_graph_steps(a, parse_formula("EX x. EX y. E(x,y) & P(x)"));
  // the graph before the gadgets is bipartite
  CHECK(odd_cycle_free_check(Graph::from_structure(steps.midpoint.reduct(graph_vocabulary()))) == 0);
  CHECK(steps.cycle_lengths.size() == steps.predicates.size());
  for (std::size_t i = 1; i < steps.cycle_lengths.size(); ++i) CHECK(steps.cycle_lengths[i] != steps.cycle_lengths[i - 1]);
}

TEST_CASE("arity-preserving encoding of K2") {
  Structure k2 = complete_graph(2).structure();
  Formula phi = parse_formula("EX x. EX y. E(x,y) & !x=y");
  ComplementExpansion ce = complement_expansion(k2, phi, 2);
  CHECK(ce.structure.relation(1).size() == 2);
  CHECK(ce.structure.relation(1) == std::vector<Tuple>{{0, 0}, {1, 1}});
  GraphEncoding enc = encode_to_graph_arity_preserving(k2, phi, 2);
  CHECK(classify(enc.formula).cls == FragmentClass::Sigma);
  CHECK(classify(enc.formula).t == 1);
  CHECK(eval_naive(enc.graph.structure(), enc.formula));
  Structure r3(vocab({{"R", 3}}), 2, {{{0, 1, 0}}});
  CHECK(code_of([&] { encode_to_graph_arity_preserving(r3, parse_formula("EX x. R(x,x,x)"), 2); }) ==
        ErrorCode::ArityBoundExceeded);
}

TEST_CASE("both encodings preserve truth and fragment on random instances") {
  Rng rng(14);
  Vocabulary v = vocab({{"E", 2}, {"R", 1}});
  FormulaShape shape;
  shape.vocab = v;
  for (int i = 0; i < 60; ++i) {
    Structure a = random_structure(v, 1 + draw(rng, 3), 0.4, rng);
    shape.variables = 1 + draw(rng, 2);
    shape.t = 1 + draw(rng, shape.variables);
    shape.cls = coin(rng, 0.5) ? FragmentClass::Sigma : FragmentClass::Pi;
    shape.literals = 1 + draw(rng, 3);
    Formula phi = random_prenex_sentence(shape, rng);
    FragmentInfo in = classify(phi);
    GraphEncoding e1 = encode_to_graph(a, phi);
    GraphEncoding e2 = encode_to_graph_arity_preserving(a, phi, 2);
    bool truth = eval_naive(a, phi);
    CHECK(eval_naive(e1.graph.structure(), e1.formula) == truth);
    CHECK(eval_naive(e2.graph.structure(), e2.formula) == truth);
    if (in.cls == FragmentClass::Sigma) {
      CHECK(in_sigma(classify(e1.formula), in.t + 1));
      CHECK(in_sigma(classify(e2.formula), in.t));
    } else {
      CHECK(in_pi(classify(e1.formula), in.t + 1));
      CHECK(in_pi(classify(e2.formula), in.t));
    }
    CHECK(is_symmetric_irreflexive(e1.graph.structure(), 0));
  }
}

}  // TEST_SUITE
