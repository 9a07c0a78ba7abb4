#include <doctest.h>

#include "fptmc/atm.hpp"
#include "fptmc/brute.hpp"
#include "fptmc/clique_types.hpp"
#include "fptmc/error.hpp"
#include "fptmc/eval.hpp"
#include "fptmc/generate.hpp"
#include "fptmc/normal_forms.hpp"
#include "fptmc/parser.hpp"
#include "fptmc/prop.hpp"
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

ATMachine machine(const std::string& name) {
  return parse_atm(read_text_file(std::string(FPTMC_DATA_DIR) + "/machines/" + name + ".atm"));
}

const char* kSampleCnf =
    "vars X Y Z\n(BIGAND (OR X Y Z) (OR X (NOT Y) Z) (OR X (NOT Y) (NOT Z)) (OR (NOT X) Y (NOT Z)))\n";

std::string literal(Rng& rng, std::size_t nv) {
  std::string v = "V" + std::to_string(draw(rng, nv));
  return coin(rng, 0.4) ? "(NOT " + v + ")" : v;
}

// A big conjunction on top, then alternating big connectives over small clauses (t odd) or terms (t even).
std::string random_prop(Rng& rng, std::size_t nv, std::size_t t) {
  std::string out = "vars";
  for (std::size_t v = 0; v < nv; ++v) out += " V" + std::to_string(v);
  out += "\n";
  std::function<std::string(std::size_t)> level = [&](std::size_t depth) -> std::string {
    bool big_and = depth % 2 == 0;
    std::string s = big_and ? "(BIGAND" : "(BIGOR";
    std::size_t width = 1 + draw(rng, 3);
    for (std::size_t i = 0; i < width; ++i) {
      if (depth + 1 < t) {
        s += " " + level(depth + 1);
      } else {
        std::size_t lits = 1 + draw(rng, 3);
        if (lits == 1) {
          s += " " + literal(rng, nv);
          continue;
        }
        s += t % 2 == 1 ? " (OR" : " (AND";
        for (std::size_t j = 0; j < lits; ++j) s += " " + literal(rng, nv);
        s += ")";
      }
    }
    return s + ")";
  };
  return out + level(0) + "\n";
}

std::vector<bool> bits(std::size_t mask, std::size_t n) {
  std::vector<bool> out(n);
  for (std::size_t v = 0; v < n; ++v) out[v] = mask >> v & 1;
  return out;
}

}  // namespace

TEST_SUITE("reductions") {

TEST_CASE("clique questions as model checking") {
  McInstance a = clique_to_mc(complete_graph(2), 2);
  CHECK(eval_naive(a.graph.structure(), a.sentence));
  CHECK(in_sigma(classify(a.sentence), 1));
  McInstance b = clique_to_mc(cycle_graph(5), 3);
  CHECK_FALSE(eval_naive(b.graph.structure(), b.sentence));
  CHECK(to_string(clique_sentence(2)) == to_string(parse_formula("EX x1. EX x2. x1 != x2 & E(x1,x2)")));
  Rng rng(71);
  for (int i = 0; i < 100; ++i) {
    Graph g = random_graph(1 + draw(rng, 7), 0.5, rng);
    std::size_t k = 1 + draw(rng, 4);
    McInstance mc = clique_to_mc(g, k);
    CHECK(brute_clique(g, k).has_value() == eval_naive(mc.graph.structure(), mc.sentence));
  }
}

TEST_CASE("consistent atomic types") {
  std::vector<std::size_t> counts;
  for (std::size_t k = 0; k <= 5; ++k) counts.push_back(consistent_types(k).size());
  CHECK(counts == std::vector<std::size_t>{1, 1, 3, 15, 127, 1895});
  for (const auto& t : consistent_types(3)) CHECK(is_consistent(t));
  AtomicType bad{3, {PairRelation::Equal, PairRelation::Equal, PairRelation::Edge}};
  CHECK_FALSE(is_consistent(bad));
}

TEST_CASE("model checking as clique questions") {
  Graph k2 = complete_graph(2);
  CliqueInstance a = mc_to_clique(k2, parse_formula("EX x. EX y. E(x,y)"));
  CHECK(a.k == 2);
  CHECK(a.types.size() == 1);
  CHECK(brute_clique(a.graph, a.k));
  CliqueInstance b = mc_to_clique(k2, parse_formula("EX x. EX y. E(x,y) & x = y"));
  CHECK_FALSE(brute_clique(b.graph, b.k));
  CHECK(b.types.empty());
  CHECK(b.graph.n() == 2);
  CliqueInstance c = mc_to_clique(k2, parse_formula("EX x. x = x"));
  CHECK(brute_clique(c.graph, c.k));
  CHECK(code_of([&] {
          mc_to_clique(k2, parse_formula("EX a. EX b. EX c. EX d. EX e. EX f. E(a,b) & E(c,d) & E(e,f)"));
        }) == ErrorCode::TooManyVariables);
  Rng rng(72);
  FormulaShape shape;
  shape.vocab = graph_vocabulary();
  shape.cls = FragmentClass::Sigma;
  shape.t = 1;
  for (int i = 0; i < 150; ++i) {
    Graph g = random_graph(1 + draw(rng, 5), 0.5, rng);
    shape.variables = 1 + draw(rng, 3);
    shape.literals = 1 + draw(rng, 4);
    Formula phi = random_prenex_sentence(shape, rng);
    CliqueInstance inst = mc_to_clique(g, phi);
    CHECK(eval_naive(g.structure(), phi) == brute_clique(inst.graph, inst.k).has_value());
    CHECK(eval_naive(g.structure(), phi) == eval_naive(g.structure(), type_disjunction(inst)));
  }
}

TEST_CASE("type products") {
  AtomicType edge{2, {PairRelation::Edge}};
  Graph h = type_product(complete_graph(3), edge);
  CHECK(h.n() == 6);
  CHECK(count_cliques(h, 2) == 6);
  CHECK(type_entails(edge, parse_formula("E(x,y) & x != y"), {"x", "y"}));
  CHECK_FALSE(type_entails(edge, parse_formula("x = y"), {"x", "y"}));
}

TEST_CASE("machine files") {
  for (const char* name : {"acceptor", "rejector", "branch", "universal", "looping", "shuttle", "universal_reject"}) {
    ATMachine m = machine(name);
    validate_atm(m);
    CHECK(parse_atm(write_atm(m)) == m);
  }
  CHECK(code_of([] { parse_atm("state q0 exists initial\nsymbol _ blank\n"); }) == ErrorCode::InvalidMachine);
  CHECK(code_of([] { parse_atm("state q0 sideways\n"); }) == ErrorCode::SyntaxError);
}

TEST_CASE("simulating machines") {
  ATMachine acc = machine("acceptor");
  CHECK_FALSE(simulate_atm(acc, 0, 1));
  CHECK(simulate_atm(acc, 1, 1));
  ATMachine rej = machine("rejector");
  for (std::size_t s = 0; s < 6; ++s) CHECK_FALSE(simulate_atm(rej, s, 1));
  ATMachine br = machine("branch");
  CHECK_FALSE(simulate_atm(br, 1, 1));
  CHECK(simulate_atm(br, 2, 1));
  ATMachine sh = machine("shuttle");
  CHECK_FALSE(simulate_atm(sh, 2, 1));
  CHECK(simulate_atm(sh, 3, 1));
  ATMachine un = machine("universal");
  CHECK_FALSE(simulate_atm(un, 2, 2));
  CHECK(simulate_atm(un, 3, 2));
  CHECK_FALSE(simulate_atm(un, 3, 1));
  ATMachine ur = machine("universal_reject");
  for (std::size_t s = 0; s < 6; ++s) CHECK_FALSE(simulate_atm(ur, s, 2));
  CHECK_FALSE(simulate_atm(machine("looping"), 5, 1));
}

TEST_CASE("machine encodings") {
  ATMachine acc = machine("acceptor");
  AtmEncoding e2 = atm_encode(acc, 2, 1), e1 = atm_encode(acc, 1, 1);
  CHECK(eval_naive(e2.structure, e2.sentence));
  CHECK_FALSE(eval_naive(e1.structure, e1.sentence));
  CHECK(in_sigma(classify(to_prenex(e2.sentence)), 1));
  ATMachine rej = machine("rejector");
  for (std::size_t k = 1; k <= 4; ++k) {
    AtmEncoding e = atm_encode(rej, k, 1);
    CHECK_FALSE(eval_naive(e.structure, e.sentence));
  }
  ATMachine un = machine("universal");
  AtmEncoding u3 = atm_encode(un, 3, 2), u4 = atm_encode(un, 4, 2);
  CHECK_FALSE(eval_naive(u3.structure, u3.sentence));
  CHECK(eval_naive(u4.structure, u4.sentence));
  CHECK(in_sigma(classify(to_prenex(u4.sentence)), 2));
  CHECK(code_of([&] { atm_encode(un, 2, 1); }) == ErrorCode::UnsupportedAlternation);
  CHECK(code_of([&] { atm_encode(acc, 2, 3); }) == ErrorCode::UnsupportedAlternation);
  CHECK(atm_structure(acc, 1).relation("S").size() >= 1);
}

TEST_CASE("clique questions as weighted satisfiability") {
  PropFormula k3 = clique_to_wsat(complete_graph(3));
  CHECK(k3.variables().size() == 3);
  CHECK(brute_wsat(k3, 3));
  PropFormula c5 = clique_to_wsat(cycle_graph(5));
  CHECK(brute_wsat(c5, 2));
  CHECK_FALSE(brute_wsat(c5, 3));
  PropClass cls = classify_prop(c5);
  CHECK(cls.kind == PropClassKind::C);
  CHECK(cls.t == 1);
  CHECK(cls.d == 1);
  Rng rng(73);
  for (int i = 0; i < 60; ++i) {
    Graph g = random_graph(1 + draw(rng, 6), 0.5, rng);
    std::size_t k = draw(rng, 5);
    CHECK(brute_wsat(clique_to_wsat(g), k).has_value() == brute_clique(g, k).has_value());
  }
}

TEST_CASE("propositional classes") {
  PropFormula cnf = parse_prop(kSampleCnf);
  PropClass c = classify_prop(cnf);
  CHECK(c.kind == PropClassKind::C);
  CHECK(c.t == 1);
  CHECK(prop_class_name(c) == "C1,d=" + std::to_string(c.d));
  CHECK(in_c(cnf, 1, c.d));
  CHECK(in_c(lift(cnf), 2, c.d));
  CHECK(classify_prop(parse_prop("(AND X Y)")).kind == PropClassKind::Small);
  CHECK(classify_prop(parse_prop("(BIGAND (BIGOR (AND X Y) Z))")).t == 2);
  CHECK(classify_prop(parse_prop("(BIGOR (BIGAND X Y) (BIGAND Z))")).kind == PropClassKind::D);
  CHECK(code_of([] { parse_prop("(AND X"); }) == ErrorCode::SyntaxError);
  CHECK(parse_prop(to_string(cnf)) == cnf);
}

TEST_CASE("normalizing weighted satisfiability instances") {
  PropFormula cnf = parse_prop(kSampleCnf);
  CHECK(wsat_normalize(cnf) == cnf);
  NormalShape s = normalized_shape(cnf);
  CHECK(s.t == 1);
  CHECK(s.width == 3);
  PropFormula mixed = parse_prop("vars X Y Z\n(BIGAND (OR X Y) Z)\n");
  PropFormula norm = wsat_normalize(mixed);
  CHECK(normalized_shape(norm).width == 2);
  CHECK(wsat_normalize(norm) == norm);
  CHECK(code_of([&] { normalized_shape(mixed); }) == ErrorCode::NotNormalized);
  Rng rng(74);
  for (int i = 0; i < 80; ++i) {
    std::size_t nv = 1 + draw(rng, 5), t = 1 + draw(rng, 2);
    PropFormula f = parse_prop(random_prop(rng, nv, t));
    PropFormula g = wsat_normalize(f);
    normalized_shape(g);
    CHECK(wsat_normalize(g) == g);
    for (std::size_t mask = 0; mask < (std::size_t(1) << nv); ++mask)
      CHECK(f.eval(bits(mask, nv)) == g.eval(bits(mask, nv)));
  }
}

TEST_CASE("weighted satisfiability as a definable problem") {
  PropFormula cnf = parse_prop(kSampleCnf);
  WsatFaginInstance inst = wsat_to_fagin(cnf);
  CHECK(inst.structure.n() == 7);
  CHECK(inst.structure.relation("P").size() == 7);
  CHECK(inst.structure.relation("N").size() == 5);
  CHECK(brute_fagin(inst.structure, inst.psi, inst.x, 1).has_value());
  CHECK(brute_wsat(cnf, 1).has_value());
  CHECK(code_of([] { wsat_to_fagin(parse_prop("vars X Y Z\n(BIGAND (OR X Y) Z)\n")); }) == ErrorCode::NotNormalized);
  Rng rng(75);
  for (int i = 0; i < 60; ++i) {
    std::size_t nv = 1 + draw(rng, 5), t = 1 + draw(rng, 2);
    PropFormula f = wsat_normalize(parse_prop(random_prop(rng, nv, t)));
    WsatFaginInstance w = wsat_to_fagin(f);
    CHECK(in_pi(classify(to_prenex(w.psi)), t));
    for (std::size_t mask = 0; mask < (std::size_t(1) << nv); ++mask) {
      Assignment alpha;
      alpha.setvar = w.x;
      for (std::size_t v = 0; v < nv; ++v)
        if (mask >> v & 1) alpha.set.push_back({w.var_element[v]});
      std::sort(alpha.set.begin(), alpha.set.end());
      CHECK(eval_naive(w.structure, w.psi, alpha) == f.eval(bits(mask, nv)));
    }
    std::size_t k = draw(rng, 3);
    CHECK(brute_wsat(f, k).has_value() == brute_fagin(w.structure, w.psi, w.x, k).has_value());
  }
}

}  // TEST_SUITE
