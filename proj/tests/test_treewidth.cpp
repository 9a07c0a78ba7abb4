#include <doctest.h>

#include "fptmc/error.hpp"
#include "fptmc/generate.hpp"
#include "fptmc/treewidth.hpp"
#include "support.hpp"

using namespace fptmc;
using namespace fptmc::testing;

namespace {

ErrorCode td_error(const Structure& a, const TreeDecomposition& t) {
  try {
    validate_td(a, t);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an invalid decomposition");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("treewidth") {

TEST_CASE("validation") {
  Structure p3 = path_graph(3).structure();
  CHECK(validate_td(p3, rooted({{0, 1, 2}}, {})) == 2);
  CHECK(validate_td(p3, rooted({{0, 1}, {1, 2}}, {{0, 1}})) == 1);
  CHECK(td_error(p3, rooted({{0, 1}, {0}, {1, 2}}, {{0, 1}, {1, 2}})) == ErrorCode::DisconnectedOccurrence);
  CHECK(td_error(p3, rooted({{0, 1}}, {})) == ErrorCode::ElementNotCovered);
  CHECK(td_error(p3, rooted({{0, 1}, {2}}, {{0, 1}})) == ErrorCode::TupleNotCovered);
  Structure r3(vocab({{"R", 3}}), 3, {{{0, 1, 2}}});
  CHECK(td_error(r3, rooted({{0, 1}, {1, 2}}, {{0, 1}})) == ErrorCode::TupleNotCovered);
}

TEST_CASE("validation against a structure equals validation against its Gaifman graph") {
  Rng rng(41);
  Vocabulary v = vocab({{"E", 2}, {"R", 3}});
  for (int i = 0; i < 60; ++i) {
    Structure a = random_structure(v, 1 + draw(rng, 7), 0.15, rng);
    TreeDecomposition t = heuristic_td(gaifman(a));
    CHECK(validate_td(a, t) == validate_td(gaifman(a), t));
  }
}

TEST_CASE("heuristic widths") {
  Rng rng(42);
  for (std::size_t n = 2; n <= 10; ++n) CHECK(heuristic_td(random_tree(n, rng)).width() == 1);
  CHECK(heuristic_td(cycle_graph(4)).width() == 2);
  CHECK(heuristic_td(complete_graph(5)).width() == 4);
  CHECK(heuristic_td(grid_graph(3, 3)).width() == 3);
}

TEST_CASE("heuristic is deterministic") {
  Rng rng(43);
  Graph g = random_graph(15, 0.3, rng);
  CHECK(write_td(heuristic_td(g)) == write_td(heuristic_td(g)));
  CHECK(min_fill_order(complete_graph(4)) == std::vector<Element>{0, 1, 2, 3});
}

TEST_CASE("exact widths") {
  CHECK(exact_td(complete_graph(4)).width() == 3);
  CHECK(treewidth_exact(path_graph(5)) == 1);
  CHECK(treewidth_exact(grid_graph(3, 3)) == 3);
  CHECK(treewidth_exact(petersen_graph()) == 4);
  CHECK(treewidth_exact(complete_bipartite_graph(3, 3)) == 3);
  try {
    exact_td(path_graph(kExactTdLimit + 1));
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooLarge);
  }
}

TEST_CASE("exact is never worse than the heuristic and both validate") {
  Rng rng(44);
  for (int i = 0; i < 100; ++i) {
    Graph g = random_graph(1 + draw(rng, 10), 0.1 + 0.1 * double(draw(rng, 7)), rng);
    TreeDecomposition h = heuristic_td(g), e = exact_td(g);
    CHECK(validate_td(g, h) == h.width());
    CHECK(validate_td(g, e) == e.width());
    CHECK(e.width() <= h.width());
  }
}

TEST_CASE("nice decompositions") {
  TreeDecomposition single = make_nice(rooted({{0, 1, 2}}, {}));
  CHECK(is_nice(single));
  CHECK(single.width() == 2);
  std::size_t introduces = 0, leaves = 0;
  for (auto k : single.kind) {
    introduces += k == NiceKind::Introduce;
    leaves += k == NiceKind::Leaf;
  }
  CHECK(introduces == 3);
  CHECK(leaves == 1);
  Rng rng(45);
  for (int i = 0; i < 100; ++i) {
    Graph g = random_graph(1 + draw(rng, 12), 0.3, rng);
    TreeDecomposition t = heuristic_td(g), nice = make_nice(t);
    CHECK(is_nice(nice));
    CHECK(nice.width() == t.width());
    CHECK(validate_td(g, nice) == t.width());
  }
}

TEST_CASE("text format round trip") {
  TreeDecomposition t = heuristic_td(grid_graph(2, 3));
  TreeDecomposition back = parse_td(write_td(t));
  CHECK(back.bags == t.bags);
  CHECK(validate_td(grid_graph(2, 3), back) == t.width());
  try {
    parse_td("node a : 0 1\nedge a b\n");
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SyntaxError);
  }
}

}  // TEST_SUITE
