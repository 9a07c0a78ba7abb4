#include <doctest.h>

#include "fptmc/brute.hpp"
#include "fptmc/error.hpp"
#include "fptmc/eval.hpp"
#include "fptmc/fagin.hpp"
#include "fptmc/generate.hpp"
#include "fptmc/normal_forms.hpp"
#include "fptmc/parser.hpp"
#include "fptmc/prop.hpp"
#include "fptmc/structure_io.hpp"
#include "support.hpp"

using namespace fptmc;
using namespace fptmc::testing;

namespace {

const char* kTriangle = "EX x. EX y. EX z. x!=y & y!=z & x!=z & E(x,y) & E(y,x) & E(y,z) & E(z,y) & E(x,z) & E(z,x)";

std::size_t count_cliques_by_subsets(const Graph& g, std::size_t k) {
  std::size_t count = 0;
  for (std::uint32_t mask = 0; mask < (1u << g.n()); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    bool ok = true;
    for (Element u = 0; u < g.n() && ok; ++u)
      for (Element v = u + 1; v < g.n() && ok; ++v)
        if ((mask >> u & 1) && (mask >> v & 1)) ok = g.adjacent(u, v);
    count += ok;
  }
  return count;
}

}  // namespace

TEST_SUITE("oracle-eval") {

TEST_CASE("naive evaluation") {
  Formula tri = parse_formula(kTriangle);
  CHECK(eval_naive(complete_graph(3).structure(), tri));
  CHECK_FALSE(eval_naive(path_graph(3).structure(), tri));
  Rng rng(31);
  for (int i = 0; i < 10; ++i)
    CHECK(eval_naive(random_structure(vocab({{"E", 2}}), 1 + draw(rng, 5), 0.5, rng), parse_formula("EX x. x=x")));
  try {
    eval_naive(complete_graph(2).structure(), parse_formula("E(x,y)"));
    FAIL("expected UnboundVariable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnboundVariable);
  }
  Assignment alpha;
  alpha.vars = {{"x", 0}, {"y", 1}};
  CHECK(eval_naive(complete_graph(2).structure(), parse_formula("E(x,y)"), alpha));
}

TEST_CASE("naive evaluation with a set variable") {
  Formula vc = phi_vc();
  Assignment alpha;
  alpha.setvar = fagin_set_variable();
  alpha.set = {{1}};
  CHECK(eval_naive(path_graph(3).structure(), vc, alpha));
  alpha.set = {{0}};
  CHECK_FALSE(eval_naive(path_graph(3).structure(), vc, alpha));
}

TEST_CASE("compiled evaluator matches naive evaluation") {
  Rng rng(32);
  Formula f = parse_formula("EX z. E(x,z) & E(z,y)");
  for (int i = 0; i < 20; ++i) {
    Structure a = random_graph(1 + draw(rng, 6), 0.4, rng).structure();
    Evaluator ev(a, f, {"x", "y"});
    for (Element x = 0; x < a.n(); ++x)
      for (Element y = 0; y < a.n(); ++y) {
        Assignment alpha;
        alpha.vars = {{"x", x}, {"y", y}};
        CHECK(ev.eval({x, y}) == eval_naive(a, f, alpha));
      }
  }
}

TEST_CASE("evaluation guard") {
  EvalOptions tight;
  tight.max_bindings = 10;
  try {
    eval_naive(complete_graph(8).structure(), parse_formula("ALL x. ALL y. ALL z. E(x,y) | E(y,z) | E(x,z) | x=y | y=z | x=z"), {}, tight);
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooLarge);
  }
}

TEST_CASE("brute-force homomorphisms") {
  Structure c5 = cycle_graph(5).structure();
  CHECK_FALSE(brute_hom(complete_graph(2).structure(), c5));
  auto h = brute_hom(complete_graph(3).structure(), c5);
  REQUIRE(h);
  CHECK(check_hom(complete_graph(3).structure(), c5, *h));
  Rng rng(33);
  for (int i = 0; i < 20; ++i) {
    Structure a = random_structure(vocab({{"E", 2}, {"P", 1}}), 1 + draw(rng, 5), 0.4, rng);
    auto id = brute_hom(a, a);
    REQUIRE(id);
    CHECK(check_hom(a, a, *id));
  }
  try {
    brute_hom(complete_graph(2).structure(), Structure(vocab({{"F", 2}}), 1, {{}}));
    FAIL("expected VocabularyMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::VocabularyMismatch);
  }
}

TEST_CASE("brute-force embeddings") {
  CHECK_FALSE(brute_emb(complete_graph(2).structure(), path_graph(3).structure()));
  auto id = brute_emb(path_graph(3).structure(), path_graph(3).structure());
  REQUIRE(id);
  CHECK(*id == Mapping{0, 1, 2});
  CHECK_FALSE(brute_emb(petersen_graph().structure(), complete_graph(3).structure()));
  CHECK(brute_emb(petersen_graph().structure(), cycle_graph(5).structure()));
}

TEST_CASE("brute-force search guard") {
  try {
    brute_hom(random_graph(100, 0.1, *std::make_unique<Rng>(1)).structure(), path_graph(6).structure());
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooLarge);
  }
}

TEST_CASE("cliques") {
  auto c = brute_clique(complete_graph(4), 4);
  REQUIRE(c);
  CHECK(*c == std::vector<Element>{0, 1, 2, 3});
  CHECK_FALSE(brute_clique(cycle_graph(5), 3));
  Rng rng(34);
  for (int i = 0; i < 20; ++i) {
    Graph g = random_graph(10, 0.5, rng);
    CHECK(count_cliques(g, 3) == count_cliques_by_subsets(g, 3));
    auto w = brute_clique(g, 3);
    CHECK(w.has_value() == (count_cliques_by_subsets(g, 3) > 0));
    if (w) CHECK(check_clique(g, *w, 3));
  }
}

TEST_CASE("weighted satisfiability") {
  PropFormula fig = parse_prop("vars X Y Z\n(BIGAND (OR X Y Z) (OR X (NOT Y) Z) (OR X (NOT Y) (NOT Z)) (OR (NOT X) Y (NOT Z)))");
  auto w = brute_wsat(fig, 1);
  REQUIRE(w);
  CHECK(*w == std::vector<bool>{true, false, false});
  CHECK(check_wsat(fig, *w, 1));
  PropFormula contra = parse_prop("(AND X1 (NOT X1))");
  for (std::size_t k = 0; k <= 1; ++k) CHECK_FALSE(brute_wsat(contra, k));
  CHECK_FALSE(brute_wsat(parse_prop("X1"), 0));
  CHECK(brute_wsat(parse_prop("X1"), 1));
}

TEST_CASE("brute-force Fagin questions") {
  const SetVar x = fagin_set_variable();
  auto b = brute_fagin(path_graph(3).structure(), phi_vc(), x, 1);
  REQUIRE(b);
  CHECK(*b == std::vector<Tuple>{{1}});
  CHECK_FALSE(brute_fagin(complete_graph(3).structure(), phi_vc(), x, 1));
  auto all = brute_fagin(complete_graph(3).structure(), phi_cli(), x, 3);
  REQUIRE(all);
  CHECK(all->size() == 3);
  CHECK(check_fagin(complete_graph(3).structure(), phi_cli(), x, *all, 3));
}

TEST_CASE("oracle consistency across problems") {
  Rng rng(35);
  Vocabulary v = vocab({{"E", 2}, {"P", 1}});
  for (int i = 0; i < 150; ++i) {
    Structure a = random_structure(v, 1 + draw(rng, 5), 0.4, rng);
    Structure b = random_structure(v, 1 + draw(rng, 4), 0.3, rng);
    auto h = brute_hom(a, b), e = brute_emb(a, b);
    if (e) CHECK(h.has_value());
    CanonicalQuery q = canonical_query(b);
    CHECK(h.has_value() == eval_naive(a, q.without_inequalities));
    CHECK(e.has_value() == eval_naive(a, q.with_inequalities));
    if (h) CHECK(check_hom(a, b, *h));
    if (e) CHECK(check_emb(a, b, *e));
  }
  for (int i = 0; i < 50; ++i) {
    Graph g = random_graph(1 + draw(rng, 7), 0.5, rng);
    std::size_t k = 1 + draw(rng, 4);
    CHECK(brute_clique(g, k).has_value() == brute_emb(g.structure(), complete_graph(k).structure()).has_value());
  }
}

TEST_CASE("witness checkers reject bad witnesses") {
  Structure k2 = complete_graph(2).structure(), p3 = path_graph(3).structure();
  CHECK_FALSE(check_hom(k2, p3, {0, 0, 1}));
  CHECK(check_hom(k2, p3, {0, 1, 0}));
  CHECK_FALSE(check_emb(k2, p3, {0, 1, 0}));
  CHECK_FALSE(check_clique(cycle_graph(4), {0, 1, 2}, 3));
  CHECK_FALSE(check_fagin(p3, phi_vc(), fagin_set_variable(), {{0}}, 1));
  CHECK_FALSE(check_fagin(p3, phi_vc(), fagin_set_variable(), {{1}}, 2));
}

}  // TEST_SUITE
