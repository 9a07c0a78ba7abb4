#include "fptmc/suites.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>

#include "fptmc/atm.hpp"
#include "fptmc/brute.hpp"
#include "fptmc/clique_types.hpp"
#include "fptmc/encodings.hpp"
#include "fptmc/error.hpp"
#include "fptmc/eval.hpp"
#include "fptmc/fagin.hpp"
#include "fptmc/generate.hpp"
#include "fptmc/hash_family.hpp"
#include "fptmc/hom.hpp"
#include "fptmc/normal_forms.hpp"
#include "fptmc/prop.hpp"
#include "fptmc/sigma1.hpp"
#include "fptmc/treewidth.hpp"

namespace fptmc {

namespace {

using Clock = std::chrono::steady_clock;

class Tally {
 public:
  Tally(SuiteResult& r, const SuiteOptions& o) : r_(r), o_(o), start_(Clock::now()) {}

  void check(bool ok, const std::string& what) {
    ++r_.instances;
    if (ok) return;
    ++r_.mismatches;
    if (r_.failures.size() < 5) r_.failures.push_back(what);
    if (o_.log) o_.log("mismatch: " + what);
  }
  void fail(const std::string& what) {
    ++r_.mismatches;
    if (r_.failures.size() < 5) r_.failures.push_back(what);
    if (o_.log) o_.log("failed: " + what);
  }
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }
  void finish(const std::string& summary) {
    r_.seconds = elapsed();
    r_.summary = summary;
    r_.pass = r_.mismatches == 0 && (r_.limit_seconds == 0 || r_.seconds < r_.limit_seconds);
  }

 private:
  SuiteResult& r_;
  const SuiteOptions& o_;
  Clock::time_point start_;
};

std::string describe(const Structure& a) { return "n=" + std::to_string(a.n()) + " tuples=" + std::to_string(a.tuple_count()); }

Vocabulary small_vocab() { return Vocabulary({{"E", 2}, {"P", 1}}); }

SuiteResult sigma1_suite(const SuiteOptions& o) {
  SuiteResult r;
  r.limit_seconds = 60;
  Tally tally(r, o);
  Rng rng(o.seed);
  const std::size_t count = o.quick ? 60 : 300;
  FormulaShape shape;
  shape.vocab = small_vocab();
  shape.cls = FragmentClass::Sigma;
  shape.t = 1;
  std::size_t yes = 0;
  for (std::size_t i = 0; i < count; ++i) {
    Structure a = random_structure(shape.vocab, 1 + draw(rng, 6), 0.2 + 0.4 * double(draw(rng, 3)) / 2, rng);
    shape.variables = 1 + draw(rng, 4);
    shape.literals = 1 + draw(rng, 5);
    shape.conjunctive = coin(rng, 0.5);
    Formula phi = random_prenex_sentence(shape, rng);
    bool naive = eval_naive(a, phi);
    bool hom = mc_sigma1_via_hom(a, phi).holds;
    bool cc = mc_sigma1_neq_color_coding(a, phi).holds;
    yes += naive;
    tally.check(naive == hom && hom == cc, describe(a) + " " + to_string(phi));
  }
  tally.finish(std::to_string(r.instances) + " sentences, " + std::to_string(yes) +
               " true; naive, homomorphism and color-coding answers compared");
  return r;
}

Structure random_pattern(const Vocabulary& v, std::size_t n, double p, Rng& rng) { return random_structure(v, n, p, rng); }

SuiteResult hom_emb_suite(const SuiteOptions& o) {
  SuiteResult r;
  r.limit_seconds = 60;
  Tally tally(r, o);
  Rng rng(o.seed + 1);
  const std::size_t count = o.quick ? 100 : 500;
  Vocabulary v = small_vocab();
  std::size_t homs = 0, embs = 0;
  for (std::size_t i = 0; i < count; ++i) {
    Structure a = random_structure(v, 1 + draw(rng, 6), 0.45, rng);
    Structure b = random_pattern(v, 1 + draw(rng, 4), 0.3, rng);
    bool h1 = solve_hom(a, b).has_value(), h2 = brute_hom(a, b).has_value();
    bool e1 = solve_emb(a, b).has_value(), e2 = brute_emb(a, b).has_value();
    homs += h2;
    embs += e2;
    tally.check(h1 == h2 && e1 == e2, "A " + describe(a) + " B " + describe(b));
  }
  // a long path into a large graph: the brute-force search is refused by its guard
  Graph big = random_graph(300, 0.02, rng);
  Structure path = path_graph(11).structure();
  bool guarded = false;
  try {
    brute_hom(big.structure(), path);
  } catch (const Error& e) {
    guarded = e.code() == ErrorCode::TooLarge;
  }
  auto t0 = Clock::now();
  HomStats stats;
  auto h = solve_hom(big.structure(), path, &stats);
  double dp = std::chrono::duration<double>(Clock::now() - t0).count();
  bool expected = big.edge_count() > 0;
  if (!guarded) tally.fail("brute force was not guarded off for the 300-vertex instance");
  if (h.has_value() != expected || dp >= 5) tally.fail("path pattern on 300 vertices: " + std::to_string(dp) + " s");
  tally.finish(std::to_string(count) + " pairs (" + std::to_string(homs) + " with homomorphism, " +
               std::to_string(embs) + " with embedding); 10-edge path into 300 vertices in " + std::to_string(dp) +
               " s, width " + std::to_string(stats.width));
  return r;
}

// Smallest edge mask over all relabelings.
std::uint64_t canonical_mask(std::size_t n, std::uint64_t mask, const std::vector<std::vector<std::size_t>>& perms) {
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  std::size_t bit = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j, ++bit)
      if (mask >> bit & 1) adj[i][j] = adj[j][i] = 1;
  std::uint64_t best = mask;
  for (const auto& p : perms) {
    std::uint64_t m = 0;
    bit = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j, ++bit)
        if (adj[p[i]][p[j]]) m |= std::uint64_t(1) << bit;
    best = std::min(best, m);
  }
  return best;
}

SuiteResult fagin_suite(const SuiteOptions& o) {
  SuiteResult r;
  r.limit_seconds = 120;
  Tally tally(r, o);
  const SetVar x = fagin_set_variable();
  struct Case {
    std::string name;
    Formula phi;
    FaginProblem problem;
  };
  std::vector<Case> cases;
  cases.push_back({"vc", phi_vc(), fagin_normalize(phi_vc(), x)});
  cases.push_back({"vc_2", phi_vc_l(2), fagin_normalize(phi_vc_l(2), x)});

  // analytic vertex-cover facts
  {
    const auto& p = cases[0].problem;
    auto w = check_phi(path_graph(3).structure(), p, 1);
    tally.check(w && *w == std::vector<Tuple>{{1}}, "P3 with k=1 accepts with the middle vertex");
    tally.check(!check_phi(complete_graph(3).structure(), p, 1), "K3 with k=1 rejects");
    tally.check(check_phi(complete_graph(3).structure(), p, 2).has_value(), "K3 with k=2 accepts");
  }

  const std::size_t max_n = o.quick ? 5 : 6, max_k = 3;
  std::size_t graphs = 0;
  // brute-force answers per isomorphism class, case and k
  std::map<std::pair<std::size_t, std::uint64_t>, std::vector<char>> oracle;
  for (std::size_t n = 1; n <= max_n; ++n) {
    std::vector<std::vector<std::size_t>> perms;
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    const std::size_t pairs = n * (n - 1) / 2;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << pairs); ++mask) {
      ++graphs;
      Structure g = graph_from_mask(n, mask).structure();
      std::uint64_t canon = canonical_mask(n, mask, perms);
      auto it = oracle.find({n, canon});
      if (it == oracle.end()) {
        Structure rep = graph_from_mask(n, canon).structure();
        std::vector<char> answers;
        for (const auto& c : cases)
          for (std::size_t k = 0; k <= max_k; ++k) answers.push_back(brute_fagin(rep, c.phi, x, k).has_value());
        it = oracle.emplace(std::make_pair(n, canon), std::move(answers)).first;
      }
      for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        FaginStar star = fagin_precompute(g, cases[ci].problem);
        for (std::size_t k = 0; k <= max_k; ++k) {
          bool alg = false;
          if (k <= n) alg = check_phi(g, cases[ci].problem, star, k).has_value();
          bool brute = it->second[ci * (max_k + 1) + k];
          if (alg != brute)
            tally.check(false, cases[ci].name + " n=" + std::to_string(n) + " mask=" + std::to_string(mask) +
                                   " k=" + std::to_string(k));
          else
            ++r.instances;
        }
      }
    }
  }
  tally.finish(std::to_string(graphs) + " labeled graphs up to " + std::to_string(max_n) + " vertices (" +
               std::to_string(oracle.size()) + " isomorphism classes for the brute-force oracle), " +
               "vc and vc_2 with k <= 3");
  return r;
}

SuiteResult encodings_suite(const SuiteOptions& o) {
  SuiteResult r;
  r.limit_seconds = 120;
  Tally tally(r, o);
  Rng rng(o.seed + 3);
  const std::size_t count = o.quick ? 40 : 200;
  Vocabulary v({{"E", 2}, {"R", 1}});
  FormulaShape shape;
  shape.vocab = v;
  for (int arity_preserving = 0; arity_preserving <= 1; ++arity_preserving)
    for (std::size_t i = 0; i < count; ++i) {
      Structure a = random_structure(v, 1 + draw(rng, 3), 0.35, rng);
      shape.variables = 1 + draw(rng, 3);
      shape.t = 1 + draw(rng, std::min<std::size_t>(2, shape.variables));
      shape.cls = coin(rng, 0.5) ? FragmentClass::Sigma : FragmentClass::Pi;
      shape.literals = 1 + draw(rng, 3);
      Formula phi = random_prenex_sentence(shape, rng);
      GraphEncoding enc = arity_preserving ? encode_to_graph_arity_preserving(a, phi, 2) : encode_to_graph(a, phi);
      bool same = eval_naive(a, phi) == eval_naive(enc.graph.structure(), enc.formula);
      FragmentInfo in = classify(phi), out = classify(enc.formula);
      std::size_t t = arity_preserving ? in.t : in.t + 1;
      bool frag = in.cls == FragmentClass::Sigma ? in_sigma(out, t) : in_pi(out, t);
      tally.check(same && frag, std::string(arity_preserving ? "arity-preserving " : "general ") + describe(a) + " " + to_string(phi) +
                                    (same ? "" : " truth differs") + (frag ? "" : " fragment " + fragment_name(out)));
    }
  tally.finish(std::to_string(count) + " structure/sentence pairs per encoding; truth and fragment checked");
  return r;
}

SuiteResult clique_types_suite(const SuiteOptions& o) {
  SuiteResult r;
  r.limit_seconds = 60;
  Tally tally(r, o);
  Rng rng(o.seed + 4);
  const std::size_t count = o.quick ? 40 : 150;
  FormulaShape shape;
  shape.vocab = graph_vocabulary();
  shape.cls = FragmentClass::Sigma;
  shape.t = 1;
  for (std::size_t i = 0; i < count; ++i) {
    Graph g = random_graph(1 + draw(rng, 6), 0.5, rng);
    shape.variables = 1 + draw(rng, 3);
    shape.literals = 1 + draw(rng, 4);
    Formula phi = random_prenex_sentence(shape, rng);
    CliqueInstance inst = mc_to_clique(g, phi);
    tally.check(eval_naive(g.structure(), phi) == brute_clique(inst.graph, inst.k).has_value(),
                "mc2clique " + describe(g.structure()) + " " + to_string(phi));
  }
  for (std::size_t i = 0; i < count; ++i) {
    Graph g = random_graph(1 + draw(rng, 7), 0.5, rng);
    std::size_t k = 1 + draw(rng, 4);
    McInstance mc = clique_to_mc(g, k);
    tally.check(brute_clique(g, k).has_value() == eval_naive(mc.graph.structure(), mc.sentence),
                "clique2mc " + describe(g.structure()) + " k=" + std::to_string(k));
  }
  tally.finish(std::to_string(count) + " instances in each direction");
  return r;
}

SuiteResult atm_suite(const SuiteOptions& o) {
  SuiteResult r;
  r.limit_seconds = 60;
  Tally tally(r, o);
  const std::size_t max_k = o.quick ? 3 : 4;
  std::size_t accepted = 0;
  for (const auto& [name, text] : atm_corpus()) {
    ATMachine m = parse_atm(text);
    bool has_universal = false;
    for (std::size_t q = 0; q < m.states.size(); ++q) has_universal = has_universal || (m.universal[q] && q != m.accepting);
    for (std::size_t t = has_universal ? 2 : 1; t <= 2; ++t)
      for (std::size_t k = 1; k <= max_k; ++k) {
        AtmEncoding enc = atm_encode(m, k, t);
        bool sim = simulate_atm(m, k - 1, t);
        bool ev = eval_naive(enc.structure, enc.sentence);
        accepted += sim;
        bool frag = in_sigma(classify(to_prenex(enc.sentence)), t);
        tally.check(sim == ev && frag, name + " t=" + std::to_string(t) + " k=" + std::to_string(k));
      }
  }
  tally.finish(std::to_string(atm_corpus().size()) + " machines, " + std::to_string(r.instances) +
               " (machine, t, k) cases, " + std::to_string(accepted) + " accepting");
  return r;
}

SuiteResult wsat_fagin_suite(const SuiteOptions& o) {
  SuiteResult r;
  Tally tally(r, o);
  PropFormula phi = parse_prop(sample_cnf_text());
  WsatFaginInstance inst = wsat_to_fagin(phi);
  const Structure& c = inst.structure;
  std::size_t p = c.relation("P").size(), n = c.relation("N").size();
  tally.check(c.n() == 7, "C has " + std::to_string(c.n()) + " elements, expected 7");
  tally.check(p == 7, std::to_string(p) + " P-tuples, expected 7");
  tally.check(n == 5, std::to_string(n) + " N-tuples, expected 5");
  const std::size_t nv = phi.variables().size();
  for (std::size_t mask = 0; mask < (std::size_t(1) << nv); ++mask) {
    std::vector<bool> assignment(nv);
    Assignment alpha;
    alpha.setvar = inst.x;
    for (std::size_t v = 0; v < nv; ++v) {
      assignment[v] = mask >> v & 1;
      if (assignment[v]) alpha.set.push_back({inst.var_element[v]});
    }
    tally.check(eval_naive(c, inst.psi, alpha) == phi.eval(assignment), "subset " + std::to_string(mask));
  }
  bool wsat = brute_wsat(phi, 1).has_value(), fagin = brute_fagin(c, inst.psi, inst.x, 1).has_value();
  tally.check(wsat == fagin && wsat, "weight-1 satisfiability");
  tally.finish("|C| = " + std::to_string(c.n()) + ", " + std::to_string(p) + " P-tuples, " + std::to_string(n) +
               " N-tuples; all " + std::to_string(std::size_t(1) << nv) + " subsets agree; weight 1 " +
               (wsat ? "satisfiable" : "unsatisfiable"));
  return r;
}

SuiteResult hash_suite(const SuiteOptions& o) {
  SuiteResult r;
  Tally tally(r, o);
  std::size_t largest = 0;
  for (std::size_t n = 1; n <= 12; ++n)
    for (std::size_t l = 1; l <= 3; ++l) {
      HashFamily f = build_hash_family(n, l);
      largest = std::max(largest, f.functions.size());
      tally.check(!uncovered_subset(f), "deterministic n=" + std::to_string(n) + " l=" + std::to_string(l));
    }
  Rng rng(o.seed + 8);
  const std::size_t planted = o.quick ? 100 : 1000, negatives = o.quick ? 50 : 200;
  Sigma1Options opts;
  opts.hash.mode = HashMode::Randomized;
  opts.hash.epsilon = 1e-3;
  std::size_t false_negatives = 0, false_positives = 0;
  for (std::size_t i = 0; i < planted; ++i) {
    const std::size_t n = 6 + draw(rng, 5), m = 2 + draw(rng, 3);
    Graph b = random_tree(m, rng);
    Graph noise = random_graph(n, 0.15, rng);
    std::vector<Element> image(n);
    std::iota(image.begin(), image.end(), 0);
    for (std::size_t j = 0; j + 1 < n; ++j) std::swap(image[j], image[j + draw(rng, n - j)]);
    auto edges = noise.edges();
    for (auto [u, w] : b.edges()) edges.emplace_back(image[u], image[w]);
    Graph a = Graph::from_edges(n, edges);
    opts.hash.seed = rng();
    if (!solve_emb(a.structure(), b.structure(), opts)) ++false_negatives;
  }
  for (std::size_t i = 0; i < negatives; ++i) {
    Graph a = random_graph(6 + draw(rng, 4), 0.2, rng);
    Graph b = coin(rng, 0.5) ? complete_graph(3) : random_tree(4, rng);
    if (brute_emb(a.structure(), b.structure())) continue;
    opts.hash.seed = rng();
    ++r.instances;
    if (solve_emb(a.structure(), b.structure(), opts)) ++false_positives;
  }
  r.instances += planted;
  double rate = double(false_negatives) / double(planted);
  if (false_positives) tally.fail(std::to_string(false_positives) + " false positives");
  if (rate > 5e-3) tally.fail("false-negative rate " + std::to_string(rate));
  tally.finish("deterministic families for n <= 12, l <= 3 cover every subset (largest " + std::to_string(largest) +
               " functions); randomized with eps = 1e-3: " + std::to_string(false_negatives) + " false negatives in " +
               std::to_string(planted) + " planted instances, " + std::to_string(false_positives) + " false positives");
  return r;
}

SuiteResult treewidth_suite(const SuiteOptions& o) {
  SuiteResult r;
  Tally tally(r, o);
  auto exact = [&](const Graph& g, std::size_t expected, const std::string& name) {
    TreeDecomposition td = exact_td(g);
    bool valid = validate_td(g, td) == td.width();
    tally.check(valid && td.width() == long(expected), name + " has width " + std::to_string(td.width()));
  };
  for (std::size_t n = 1; n <= 8; ++n) exact(complete_graph(n), n - 1, "K" + std::to_string(n));
  Rng rng(o.seed + 9);
  for (std::size_t n = 2; n <= 12; ++n) exact(random_tree(n, rng), 1, "tree on " + std::to_string(n));
  for (std::size_t n = 3; n <= 12; ++n) exact(cycle_graph(n), 2, "C" + std::to_string(n));
  exact(grid_graph(3, 3), 3, "3x3 grid");
  const std::size_t count = o.quick ? 50 : 200;
  for (std::size_t i = 0; i < count; ++i) {
    Graph g = random_graph(1 + draw(rng, 10), 0.15 + 0.1 * double(draw(rng, 6)), rng);
    TreeDecomposition h = heuristic_td(g), e = exact_td(g);
    bool ok = true;
    try {
      validate_td(g, h);
      validate_td(g, e);
      validate_td(g, make_nice(h));
    } catch (const Error&) {
      ok = false;
    }
    tally.check(ok && h.width() >= e.width(), "random graph n=" + std::to_string(g.n()));
  }
  tally.finish("exact widths of K_n, trees, C_n and the 3x3 grid; " + std::to_string(count) +
               " random graphs with heuristic >= exact and valid decompositions");
  return r;
}

const std::map<std::string, std::pair<std::string, SuiteResult (*)(const SuiteOptions&)>>& registry() {
  static const std::map<std::string, std::pair<std::string, SuiteResult (*)(const SuiteOptions&)>> reg{
      {"sigma1", {"existential model checking: naive = via homomorphisms = color coding", sigma1_suite}},
      {"hom-emb", {"homomorphism DP and embeddings against brute force", hom_emb_suite}},
      {"fagin", {"Check-phi against brute force for vertex cover and bounded-valence domination", fagin_suite}},
      {"encodings", {"structure-to-graph encodings preserve truth and fragment", encodings_suite}},
      {"clique-types", {"clique and existential graph sentences reduce into each other", clique_types_suite}},
      {"atm", {"alternating machine encoding against the simulator", atm_suite}},
      {"wsat-fagin", {"weighted satisfiability as a Fagin question on the 3-CNF example", wsat_fagin_suite}},
      {"hash", {"perfect hash families: deterministic coverage, randomized error rate", hash_suite}},
      {"treewidth", {"exact and heuristic tree decompositions", treewidth_suite}},
  };
  return reg;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"sigma1", "hom-emb", "fagin", "encodings", "clique-types",
                                              "atm",    "wsat-fagin", "hash", "treewidth"};
  return names;
}

bool is_suite(const std::string& name) { return registry().count(name) > 0; }

SuiteResult run_suite(const std::string& name, const SuiteOptions& opts) {
  auto it = registry().find(name);
  if (it == registry().end()) throw Error(ErrorCode::InvalidArgument, "unknown suite '" + name + "'");
  SuiteResult r;
  try {
    r = it->second.second(opts);
  } catch (const Error& e) {
    r.mismatches = std::max<std::size_t>(r.mismatches, 1);
    r.failures.push_back(std::string("error: ") + e.what());
    r.pass = false;
  }
  r.name = name;
  r.description = it->second.first;
  return r;
}

const std::vector<std::pair<std::string, std::string>>& atm_corpus() {
  static const std::vector<std::pair<std::string, std::string>> corpus{
      {"acceptor",
       "state q0 exists initial\nstate qa accepting\nsymbol _ blank\ntrans q0 _ 0 _ qa\n"},
      {"rejector",
       "state q0 exists initial\nstate q1 exists\nstate qa accepting\nsymbol _ blank\nsymbol a\ntrans q0 _ 1 a q1\n"},
      {"branch",
       "state q0 exists initial\nstate q1 exists\nstate q2 exists\nstate qa accepting\nsymbol _ blank\nsymbol a\n"
       "symbol b\ntrans q0 _ 1 a q1\ntrans q0 _ 1 b q2\ntrans q1 _ 0 _ q1\ntrans q2 _ -1 _ qa\n"},
      {"universal",
       "state q0 exists initial\nstate u forall\nstate v forall\nstate qa accepting\nsymbol _ blank\nsymbol a\n"
       "symbol b\ntrans q0 _ 1 a u\ntrans u _ 0 a qa\ntrans u _ 0 b v\ntrans v b -1 b qa\n"},
      {"looping", "state q0 exists initial\nstate qa accepting\nsymbol _ blank\nsymbol a\ntrans q0 _ 1 a q0\n"},
      {"shuttle",
       "state q0 exists initial\nstate q1 exists\nstate q2 exists\nstate qa accepting\nsymbol _ blank\nsymbol a\n"
       "trans q0 _ 1 a q1\ntrans q1 _ -1 _ q2\ntrans q2 a 0 a qa\n"},
      {"universal_reject",
       "state q0 exists initial\nstate u forall\nstate v forall\nstate qa accepting\nsymbol _ blank\nsymbol a\n"
       "trans q0 _ 0 a u\ntrans u a 0 a qa\ntrans u a 1 a v\ntrans v _ 0 _ v\n"},
  };
  return corpus;
}

const std::string& sample_cnf_text() {
  static const std::string text =
      "vars X Y Z\n(BIGAND (OR X Y Z) (OR X (NOT Y) Z) (OR X (NOT Y) (NOT Z)) (OR (NOT X) Y (NOT Z)))\n";
  return text;
}

}  // namespace fptmc
