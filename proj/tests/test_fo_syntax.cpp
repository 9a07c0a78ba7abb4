#include <doctest.h>

#include "fptmc/error.hpp"
#include "fptmc/eval.hpp"
#include "fptmc/generate.hpp"
#include "fptmc/normal_forms.hpp"
#include "fptmc/parser.hpp"
#include "support.hpp"

using namespace fptmc;
using namespace fptmc::testing;

namespace {

Formula path_formula(std::size_t k) {
  std::vector<std::string> xs;
  std::vector<Formula> parts;
  for (std::size_t i = 1; i <= k; ++i) xs.push_back("x" + std::to_string(i));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) parts.push_back(neq(xs[i], xs[j]));
  for (std::size_t i = 0; i + 1 < k; ++i) parts.push_back(atom("E", {xs[i], xs[i + 1]}));
  return exists(xs, conj(parts));
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

Formula random_formula(Rng& rng, const Vocabulary& v, std::size_t depth, std::vector<std::string> bound) {
  const std::vector<std::string> pool{"x", "y", "z"};
  auto var = [&] { return bound.empty() ? pool[draw(rng, pool.size())] : bound[draw(rng, bound.size())]; };
  std::size_t pick = depth == 0 ? draw(rng, 2) : draw(rng, 7);
  switch (pick) {
    case 0: {
      const Symbol& s = v[draw(rng, v.size())];
      std::vector<std::string> args;
      for (std::size_t i = 0; i < s.arity; ++i) args.push_back(var());
      return atom(s.name, args);
    }
    case 1: return equal(var(), var());
    case 2: return neg(random_formula(rng, v, depth - 1, bound));
    case 3: return conj({random_formula(rng, v, depth - 1, bound), random_formula(rng, v, depth - 1, bound)});
    case 4: return disj({random_formula(rng, v, depth - 1, bound), random_formula(rng, v, depth - 1, bound)});
    default: {
      std::string x = pool[draw(rng, pool.size())];
      bound.push_back(x);
      Formula body = random_formula(rng, v, depth - 1, bound);
      return pick == 5 ? exists(x, body) : forall(x, body);
    }
  }
}

Formula random_sentence(Rng& rng, const Vocabulary& v, std::size_t depth) {
  return exists(std::vector<std::string>{"x", "y", "z"}, random_formula(rng, v, depth, {"x", "y", "z"}));
}

}  // namespace

TEST_SUITE("fo-syntax") {

TEST_CASE("parse the inequality sentence") {
  Formula f = parse_formula("EX x. EX y. (E(x,y) & !x=y)");
  CHECK(is_sentence(f));
  CHECK(variables(f).size() == 2);
  FragmentInfo info = classify(f);
  CHECK(info.cls == FragmentClass::Sigma);
  CHECK(info.t == 1);
  CHECK(info.var_count == 2);
}

TEST_CASE("syntax errors and vocabulary checks") {
  CHECK(code_of([] { parse_formula("EX x."); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_formula("E(x,"); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_formula("E(x,y) &"); }) == ErrorCode::SyntaxError);
  CHECK(code_of([] { parse_formula("EX x. F(x)", graph_vocabulary()); }) == ErrorCode::UnknownRelation);
  CHECK(code_of([] { parse_formula("EX x. E(x)", graph_vocabulary()); }) == ErrorCode::UnknownRelation);
  try {
    parse_formula("EX x. E(x, %)");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("column") != std::string::npos);
  }
}

TEST_CASE("precedence and scope") {
  CHECK(parse_formula("P(x) | Q(x) & R(x)") == disj({atom("P", {"x"}), conj({atom("Q", {"x"}), atom("R", {"x"})})}));
  CHECK(parse_formula("!P(x) & Q(x)") == conj({neg(atom("P", {"x"})), atom("Q", {"x"})}));
  CHECK(parse_formula("EX x. P(x) & Q(x)") == exists("x", conj({atom("P", {"x"}), atom("Q", {"x"})})));
  CHECK(parse_formula("x != y") == neg(equal("x", "y")));
}

TEST_CASE("print and parse round trip on random formulas") {
  Rng rng(21);
  Vocabulary v = vocab({{"E", 2}, {"P", 1}, {"R", 3}});
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, v, 1 + draw(rng, 4), {});
    CHECK(parse_formula(to_string(f)) == f);
    CHECK(encoding_length(f) == to_string(f).size());
  }
}

TEST_CASE("formula files carry the set variable header") {
  FormulaFile ff = parse_formula_file("# setvar X 1\nALL y. ALL z. E(y,z) -> X(y) | X(z)\n", graph_vocabulary());
  REQUIRE(ff.setvar);
  CHECK(ff.setvar->name == "X");
  CHECK(ff.setvar->arity == 1);
  FormulaFile again = parse_formula_file(write_formula_file(ff.formula, ff.setvar), graph_vocabulary());
  CHECK(again.formula == ff.formula);
}

TEST_CASE("negation normal form") {
  CHECK(to_nnf(parse_formula("!(EX x. P(x))")) == forall("x", neg(atom("P", {"x"}))));
  CHECK(to_nnf(parse_formula("!(P(x) & Q(y))")) == disj({neg(atom("P", {"x"})), neg(atom("Q", {"y"}))}));
  CHECK(is_nnf(to_nnf(parse_formula("!(P(x) -> (Q(x) <-> !R(x)))"))));
}

TEST_CASE("normal forms are equivalent on all small structures") {
  Rng rng(22);
  Vocabulary v = graph_vocabulary();
  std::vector<Structure> all;
  for (std::size_t n = 1; n <= 2; ++n)
    for (auto& s : all_binary_structures(n)) all.push_back(s);
  Rng pick(5);
  auto three = all_binary_structures(3);
  for (int i = 0; i < 40; ++i) all.push_back(three[draw(pick, three.size())]);
  for (int i = 0; i < 100; ++i) {
    Formula f = random_sentence(rng, v, 3);
    Formula nnf = to_nnf(f), pre = to_prenex(f);
    CHECK(is_nnf(nnf));
    CHECK(is_prenex(pre));
    CHECK(classify(pre).cls != FragmentClass::Other);
    for (const auto& a : all) {
      bool truth = eval_naive(a, f);
      CHECK(eval_naive(a, nnf) == truth);
      CHECK(eval_naive(a, pre) == truth);
    }
  }
}

TEST_CASE("prenexing renames bound variables apart") {
  Formula f = to_prenex(parse_formula("(EX x. P(x)) & (EX x. Q(x))"));
  CHECK(split_prenex(f).prefix.size() == 2);
  CHECK(split_prenex(f).prefix[0].second != split_prenex(f).prefix[1].second);
}

TEST_CASE("classification") {
  FragmentInfo a = classify(parse_formula("EX x. ALL y. E(x,y)"));
  CHECK(a.cls == FragmentClass::Sigma);
  CHECK(a.t == 2);
  CHECK(a.rank == 2);
  CHECK(a.blocks == std::vector<std::size_t>{1, 1});
  FragmentInfo p = classify(path_formula(3));
  CHECK(p.cls == FragmentClass::Sigma);
  CHECK(p.t == 1);
  FragmentInfo q = classify(parse_formula("E(x,y) & !x=y"));
  CHECK(q.cls == FragmentClass::QuantifierFree);
  CHECK(q.rank == 0);
  CHECK(code_of([] { classify(parse_formula("(EX x. P(x)) & Q(y)")); }) == ErrorCode::NotPrenex);
  FragmentInfo tu = classify(parse_formula("EX x. EX y. ALL z. ALL w. EX u. E(x,y)"));
  CHECK(in_sigma_tu(tu, 3, 2));
  CHECK_FALSE(in_sigma_tu(tu, 3, 1));
  CHECK(in_sigma(classify(parse_formula("ALL x. P(x)")), 2));
  CHECK(in_pi(classify(parse_formula("EX x. P(x)")), 2));
  CHECK(fragment_name(a) == "Sigma2");
}

TEST_CASE("formula graphs of the path sentence") {
  Formula f = path_formula(4);
  Graph g = formula_graph(f), h = formula_graph_neq(f);
  CHECK(g.n() == 4);
  CHECK(g.edge_count() == 6);
  CHECK(h.edge_count() == 3);
  for (Element v = 0; v < 4; ++v) CHECK(h.degree(v) <= 2);
  CHECK(formula_graph(parse_formula("EX x. EX y. EX z. R(x,y,z)")).edge_count() == 3);
  CHECK(formula_graph(parse_formula("EX x. EX y. P(x) & P(y)")).edge_count() == 0);
}

TEST_CASE("formula graph without inequalities is a subgraph") {
  Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    Formula f = random_sentence(rng, vocab({{"E", 2}, {"P", 1}}), 3);
    Graph g = formula_graph(f), h = formula_graph_neq(f);
    REQUIRE(g.n() == h.n());
    for (auto [u, v] : h.edges()) CHECK(g.adjacent(u, v));
  }
}

TEST_CASE("canonical queries") {
  Structure k2 = complete_graph(2).structure();
  CanonicalQuery q = canonical_query(k2);
  CHECK(q.with_inequalities ==
        exists(std::vector<std::string>{"x0", "x1"},
               conj({neq("x0", "x1"), atom("E", {"x0", "x1"}), atom("E", {"x1", "x0"})})));
  CHECK(eval_naive(complete_graph(3).structure(), q.with_inequalities));
  CHECK_FALSE(eval_naive(complete_graph(2).structure(), canonical_query(cycle_graph(5).structure()).without_inequalities));
  Rng rng(24);
  Vocabulary v = vocab({{"E", 2}, {"R", 3}});
  for (int i = 0; i < 100; ++i) {
    Structure b = random_structure(v, 1 + draw(rng, 5), 0.2, rng);
    CanonicalQuery c = canonical_query(b);
    Graph g = gaifman(b), h = formula_graph_neq(c.without_inequalities);
    CHECK(g.edges() == h.edges());
    std::size_t neqs = 0, atoms = 0;
    for (const auto& lit : split_prenex(c.with_inequalities).matrix.children().empty()
                               ? std::vector<Formula>{split_prenex(c.with_inequalities).matrix}
                               : split_prenex(c.with_inequalities).matrix.children())
      (lit.kind() == FormulaKind::Not && lit.child().kind() == FormulaKind::Equal ? neqs : atoms) += 1;
    if (b.n() * (b.n() - 1) / 2 + b.tuple_count() > 1) {
      CHECK(neqs == b.n() * (b.n() - 1) / 2);
      CHECK(atoms == b.tuple_count());
    }
  }
}

TEST_CASE("dnf splitting respects the cap") {
  Formula m = to_nnf(parse_formula("(P(x) | Q(x)) & (P(y) | Q(y)) & (P(z) | Q(z))"));
  CHECK(dnf_terms(m, 100).size() == 8);
  CHECK(code_of([&] { dnf_terms(m, 7); }) == ErrorCode::DNFBlowup);
}

}  // TEST_SUITE
