#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fptmc/atm.hpp"
#include "fptmc/brute.hpp"
#include "fptmc/clique_types.hpp"
#include "fptmc/encodings.hpp"
#include "fptmc/error.hpp"
#include "fptmc/eval.hpp"
#include "fptmc/fagin.hpp"
#include "fptmc/generate.hpp"
#include "fptmc/hom.hpp"
#include "fptmc/normal_forms.hpp"
#include "fptmc/parser.hpp"
#include "fptmc/prop.hpp"
#include "fptmc/sigma1.hpp"
#include "fptmc/structure_io.hpp"
#include "fptmc/suites.hpp"
#include "fptmc/treewidth.hpp"

using namespace fptmc;
using json = nlohmann::ordered_json;

namespace {

constexpr int kYes = 0, kNo = 1, kUsage = 2, kResource = 3;

struct Globals {
  std::string format = "text";
  std::uint64_t seed = 1;
  bool timings = false;
  double max_candidates = 1e8;
  std::size_t max_disjuncts = 10'000;
  bool force = false;
  std::string output;
  std::vector<std::string> argv;

  BruteOptions brute() const { return {force ? std::numeric_limits<double>::infinity() : max_candidates}; }
  std::size_t disjuncts() const { return force ? std::numeric_limits<std::size_t>::max() : max_disjuncts; }
  EvalOptions eval() const {
    EvalOptions o;
    o.max_bindings = force ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(max_candidates);
    return o;
  }
};

class Report {
 public:
  Report(const Globals& g, std::string algorithm) : g_(g) {
    j_["command"] = g.argv;
    j_["algorithm"] = std::move(algorithm);
    j_["result"] = json::object();
  }

  json& result() { return j_["result"]; }
  json& root() { return j_; }

  template <class F>
  auto timed(const std::string& phase, F&& f) {
    auto start = std::chrono::steady_clock::now();
    auto done = [&] { times_.emplace_back(phase, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()); };
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      done();
    } else {
      auto r = f();
      done();
      return r;
    }
  }

  void randomized(double error_bound) {
    j_["seed"] = g_.seed;
    j_["error_bound"] = error_bound;
  }

  int emit(int code) {
    if (g_.timings) {
      json t = json::object();
      for (const auto& [phase, s] : times_) t[phase] = s;
      j_["timings"] = t;
    }
    if (g_.format == "json") {
      std::cout << j_.dump(2) << "\n";
    } else {
      for (const auto& [key, value] : j_["result"].items())
        std::cout << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
      if (j_.contains("error_bound")) std::cout << "seed: " << g_.seed << "\nerror_bound: " << j_["error_bound"].dump() << "\n";
      if (g_.timings)
        for (const auto& [phase, s] : times_) std::cout << "time " << phase << ": " << s << " s\n";
    }
    return code;
  }

 private:
  const Globals& g_;
  json j_;
  std::vector<std::pair<std::string, double>> times_;
};

Structure load_structure(const std::string& path, bool symmetrize = false) {
  StructureReadOptions o;
  o.symmetrize = symmetrize;
  return parse_structure(read_text_file(path), o);
}

Graph load_graph(const std::string& path, bool symmetrize) { return Graph::from_structure(load_structure(path, symmetrize)); }

FormulaFile load_formula(const std::string& path, const std::optional<Vocabulary>& vocab = std::nullopt) {
  return parse_formula_file(read_text_file(path), vocab);
}

json mapping_json(const Structure& from, const Structure& to, const Mapping& h) {
  json m = json::object();
  for (Element e = 0; e < from.n(); ++e) m[from.label(e)] = to.label(h[e]);
  return m;
}

json tuples_json(const Structure& a, const std::vector<Tuple>& ts) {
  json out = json::array();
  for (const auto& t : ts) {
    json row = json::array();
    for (Element e : t) row.push_back(a.label(e));
    out.push_back(row);
  }
  return out;
}

void verified(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, "internal: " + what + " failed re-verification");
}

std::string render_structure(const Structure& s, const std::string& format, const std::string& name) {
  return format == "dot" ? structure_to_dot(s, name) : write_structure(s);
}

// Writes `text` to prefix+suffix when an output prefix is set, records the path in the
// report, and otherwise stores the text itself.
void emit_object(const Globals& g, Report& rep, const std::string& key, const std::string& suffix,
                 const std::string& text) {
  if (g.output.empty()) {
    rep.result()[key] = text;
  } else {
    write_text_file(g.output + suffix, text);
    rep.result()[key] = g.output + suffix;
  }
}

// Oracle comparison that degrades to "skipped" when a brute-force guard trips.
template <class F>
json oracle_value(F&& f) {
  try {
    return json(f());
  } catch (const Error& e) {
    if (!is_resource_error(e.code())) throw;
    return json("skipped (" + std::string(error_name(e.code())) + ")");
  }
}

json verification(const json& lhs, const json& rhs) {
  json v;
  v["source"] = lhs;
  v["target"] = rhs;
  v["agree"] = lhs.is_boolean() && rhs.is_boolean() ? json(lhs == rhs) : json("unknown");
  return v;
}

int verification_code(const json& v) {
  if (v["agree"].is_boolean() && !v["agree"].get<bool>())
    throw Error(ErrorCode::InvalidArgument, "internal: reduction changed the answer");
  return kYes;
}

HashOptions hash_options(const Globals& g, const std::optional<double>& epsilon) {
  HashOptions h;
  h.seed = g.seed;
  if (epsilon) {
    h.mode = HashMode::Randomized;
    h.epsilon = *epsilon;
  }
  return h;
}

Vocabulary parse_vocab(const std::string& text) {
  std::vector<Symbol> syms;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto slash = item.find('/');
    if (slash == std::string::npos) throw Error(ErrorCode::SyntaxError, "vocabulary entry '" + item + "' is not NAME/ARITY");
    try {
      syms.push_back({item.substr(0, slash), std::stoul(item.substr(slash + 1))});
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::SyntaxError, "bad arity in '" + item + "'");
    }
  }
  return Vocabulary(std::move(syms));
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  for (int i = 0; i < argc; ++i) g.argv.emplace_back(argv[i]);
  if (const char* env = std::getenv("FPTMC_SEED")) {
    try {
      g.seed = std::stoull(env);
    } catch (const std::logic_error&) {
      std::cerr << "error: FPTMC_SEED is not a number\n";
      return kUsage;
    }
  }

  CLI::App app{"fptmc: model checking, homomorphisms, Fagin definability and reductions on finite structures"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "json", "dot"}));
  app.add_option("--seed", g.seed, "seed for randomized algorithms (default: FPTMC_SEED or 1)");
  app.add_flag("--timings", g.timings, "report per-phase timings");
  app.add_option("--max-candidates", g.max_candidates, "guard on brute-force and evaluation search spaces");
  app.add_option("--max-disjuncts", g.max_disjuncts, "guard on DNF sizes");
  app.add_flag("--force", g.force, "lift all resource guards");
  app.add_option("-o,--output", g.output, "prefix for emitted files");
  bool symmetrize = false;
  app.add_flag("--symmetrize", symmetrize, "add reverse tuples of binary relations when loading structures");

  std::string file_a, file_b, file_f, file_td, mode;
  std::size_t k = 0, t = 1;
  bool heuristic = false, brute = false, quick = false, exact = false, nice = false;
  std::optional<double> epsilon;

  auto* eval = app.add_subcommand("eval", "decide A |= phi by naive evaluation");
  eval->add_option("structure", file_a)->required()->check(CLI::ExistingFile);
  eval->add_option("formula", file_f)->required()->check(CLI::ExistingFile);

  auto* hom = app.add_subcommand("hom", "is there a homomorphism from B to A");
  auto* emb = app.add_subcommand("emb", "is there an embedding of B into A");
  for (auto* sub : {hom, emb}) {
    sub->add_option("A", file_a, "target structure")->required()->check(CLI::ExistingFile);
    sub->add_option("B", file_b, "pattern structure")->required()->check(CLI::ExistingFile);
    sub->add_flag("--brute", brute, "exhaustive search");
  }
  auto* td_opt = hom->add_option("--td", file_td, "tree decomposition of B")->check(CLI::ExistingFile);
  hom->add_flag("--heuristic", heuristic, "min-fill decomposition of B (default)")->excludes(td_opt);
  emb->add_option("--epsilon", epsilon, "randomized color coding with this failure bound");

  auto* mcs = app.add_subcommand("mc-sigma1", "existential model checking");
  mcs->add_option("structure", file_a)->required()->check(CLI::ExistingFile);
  mcs->add_option("formula", file_f)->required()->check(CLI::ExistingFile);
  mode = "hom";
  mcs->add_option("--mode", mode)->check(CLI::IsMember({"naive", "hom", "colorcoding"}));
  mcs->add_option("--epsilon", epsilon, "randomized color coding with this failure bound");

  auto* fag = app.add_subcommand("fagin", "is there a k-element X with (A, X) |= phi");
  fag->add_option("formula", file_f)->required()->check(CLI::ExistingFile);
  fag->add_option("structure", file_a)->required()->check(CLI::ExistingFile);
  fag->add_option("k", k)->required();
  std::string fagin_mode = "alg1";
  fag->add_option("--mode", fagin_mode)->check(CLI::IsMember({"alg1", "brute"}));
  std::string setvar_spec;
  fag->add_option("--setvar", setvar_spec, "relation variable as NAME/ARITY (overrides the file header)");

  auto* red = app.add_subcommand("reduce", "run a reduction and compare both sides");
  red->require_subcommand(1);
  red->fallthrough();
  auto* r_c2m = red->add_subcommand("clique2mc", "k-clique to existential model checking");
  r_c2m->add_option("graph", file_a)->required()->check(CLI::ExistingFile);
  r_c2m->add_option("k", k)->required();
  auto* r_m2c = red->add_subcommand("mc2clique", "existential graph sentence to k-clique");
  r_m2c->add_option("graph", file_a)->required()->check(CLI::ExistingFile);
  r_m2c->add_option("formula", file_f)->required()->check(CLI::ExistingFile);
  auto* r_h2e = red->add_subcommand("hom2emb", "homomorphism to embedding");
  r_h2e->add_option("A", file_a)->required()->check(CLI::ExistingFile);
  r_h2e->add_option("B", file_b)->required()->check(CLI::ExistingFile);
  auto* r_s2g = red->add_subcommand("struct2graph", "structure and sentence to a graph and sentence");
  r_s2g->add_option("structure", file_a)->required()->check(CLI::ExistingFile);
  r_s2g->add_option("formula", file_f)->required()->check(CLI::ExistingFile);
  std::size_t preserve = 0;
  r_s2g->add_option("--arity-preserving", preserve, "keep the fragment; argument is the arity bound");
  auto* r_atm = red->add_subcommand("atm", "alternating machine to structure and sentence");
  r_atm->add_option("machine", file_a)->required()->check(CLI::ExistingFile);
  r_atm->add_option("k", k)->required();
  r_atm->add_option("t", t, "alternation bound (1 or 2)");
  auto* r_w2f = red->add_subcommand("wsat2fagin", "weighted satisfiability to a Fagin question");
  r_w2f->add_option("formula", file_f)->required()->check(CLI::ExistingFile);
  k = 1;
  r_w2f->add_option("--k", k, "weight compared by the oracles");
  auto* r_c2w = red->add_subcommand("clique2wsat", "k-clique to weighted satisfiability");
  r_c2w->add_option("graph", file_a)->required()->check(CLI::ExistingFile);
  r_c2w->add_option("k", k)->required();

  auto* gen = app.add_subcommand("gen", "generate structures and formulas");
  std::string kind;
  std::vector<double> params;
  std::string vocab_spec = "E/2", fragment = "sigma";
  std::size_t variables = 3, literals = 4;
  gen->add_option("kind", kind, "K, C, P, grid, random-graph, random-tree, random-structure, random-formula")
      ->required();
  gen->add_option("params", params, "sizes: n | rows cols | n p");
  gen->add_option("--vocab", vocab_spec, "symbols as NAME/ARITY,...");
  gen->add_option("--fragment", fragment)->check(CLI::IsMember({"sigma", "pi", "qf"}));
  gen->add_option("--t", t, "quantifier blocks");
  gen->add_option("--variables", variables);
  gen->add_option("--literals", literals);

  auto* ver = app.add_subcommand("verify", "run an oracle-equivalence suite");
  std::string suite;
  ver->add_option("suite", suite, "suite name or all")->required();
  ver->add_flag("--quick", quick, "small sizes");

  auto* td = app.add_subcommand("td", "tree decompositions of the Gaifman graph");
  td->add_option("structure", file_a)->required()->check(CLI::ExistingFile);
  td->add_flag("--exact", exact, "exact decomposition (small graphs)");
  td->add_flag("--nice", nice, "convert to a nice decomposition");
  std::string check_file;
  td->add_option("--check", check_file, "validate this decomposition instead")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (eval->parsed()) {
      Report rep(g, "naive evaluation");
      Structure a = rep.timed("parse", [&] { return load_structure(file_a, symmetrize); });
      FormulaFile f = rep.timed("parse", [&] { return load_formula(file_f, a.vocab()); });
      if (f.setvar) throw Error(ErrorCode::InvalidArgument, "formula has a set variable; use the fagin command");
      bool holds = rep.timed("eval", [&] { return eval_naive(a, f.formula, {}, g.eval()); });
      rep.result()["holds"] = holds;
      return rep.emit(holds ? kYes : kNo);
    }

    if (hom->parsed() || emb->parsed()) {
      const bool is_hom = hom->parsed();
      std::string algorithm = brute ? "brute force"
                              : is_hom ? (file_td.empty() ? "tree-decomposition DP (min-fill)" : "tree-decomposition DP (given)")
                                       : (epsilon ? "color coding (randomized)" : "color coding (deterministic)");
      Report rep(g, algorithm);
      Structure a = rep.timed("parse", [&] { return load_structure(file_a); });
      Structure b = rep.timed("parse", [&] { return load_structure(file_b); });
      std::optional<Mapping> h;
      if (brute) {
        h = rep.timed("solve", [&] { return is_hom ? brute_hom(a, b, g.brute()) : brute_emb(a, b, g.brute()); });
      } else if (is_hom) {
        HomStats st;
        TreeDecomposition dec = file_td.empty() ? heuristic_td(gaifman(b)) : parse_td(read_text_file(file_td));
        h = rep.timed("solve", [&] { return solve_hom(a, b, dec, &st); });
        rep.result()["width"] = st.width;
        rep.result()["max_table"] = st.max_table;
      } else {
        Sigma1Options o;
        o.max_disjuncts = g.disjuncts();
        o.hash = hash_options(g, epsilon);
        Sigma1Result info;
        h = rep.timed("solve", [&] { return solve_emb(a, b, o, &info); });
        rep.result()["hash_functions"] = info.hash_functions;
        rep.result()["colorings"] = info.colorings;
        if (epsilon) rep.randomized(info.error_bound);
      }
      rep.result()["exists"] = h.has_value();
      if (h) {
        verified(is_hom ? check_hom(a, b, *h) : check_emb(a, b, *h), "witness");
        rep.result()["witness"] = mapping_json(b, a, *h);
      }
      return rep.emit(h ? kYes : kNo);
    }

    if (mcs->parsed()) {
      Report rep(g, mode == "naive" ? "naive evaluation" : mode == "hom" ? "homomorphism queries" : "color coding");
      Structure a = rep.timed("parse", [&] { return load_structure(file_a); });
      Formula phi = rep.timed("parse", [&] { return load_formula(file_f, a.vocab()).formula; });
      FragmentInfo info = classify(to_prenex(phi));
      if (!in_sigma(info, 1)) throw Error(ErrorCode::InvalidArgument, "expected an existential sentence, got " + fragment_name(info));
      if (mode == "naive") {
        bool holds = rep.timed("eval", [&] { return eval_naive(a, phi, {}, g.eval()); });
        rep.result()["holds"] = holds;
        return rep.emit(holds ? kYes : kNo);
      }
      Sigma1Options o;
      o.max_disjuncts = g.disjuncts();
      o.hash = hash_options(g, epsilon);
      Sigma1Result r = rep.timed("solve", [&] {
        return mode == "hom" ? mc_sigma1_via_hom(a, phi, o) : mc_sigma1_neq_color_coding(a, phi, o);
      });
      rep.result()["holds"] = r.holds;
      rep.result()["disjuncts"] = r.disjuncts;
      rep.result()["max_width"] = r.max_width;
      if (mode == "colorcoding") {
        rep.result()["colorings"] = r.colorings;
        rep.result()["hash_functions"] = r.hash_functions;
        if (epsilon) rep.randomized(r.error_bound);
      }
      if (r.holds && !r.witness.empty()) {
        Assignment alpha;
        alpha.vars = r.witness;
        verified(eval_naive(a, split_prenex(to_prenex(phi)).matrix, alpha), "witness");
        json w = json::object();
        for (const auto& [v, e] : r.witness) w[v] = a.label(e);
        rep.result()["witness"] = w;
      }
      return rep.emit(r.holds ? kYes : kNo);
    }

    if (fag->parsed()) {
      Report rep(g, fagin_mode == "alg1" ? "bounded search over tuple families" : "brute force");
      Structure a = rep.timed("parse", [&] { return load_structure(file_a); });
      FormulaFile f;
      if (setvar_spec.empty()) {
        f = rep.timed("parse", [&] { return load_formula(file_f, a.vocab()); });
      } else {
        Symbol sym = parse_vocab(setvar_spec).symbols().at(0);
        f.setvar = SetVar{sym.name, sym.arity};
        f.formula = rep.timed("parse", [&] { return parse_formula(read_text_file(file_f), a.vocab(), f.setvar); });
      }
      SetVar x = f.setvar.value_or(fagin_set_variable());
      std::optional<std::vector<Tuple>> w;
      if (fagin_mode == "alg1") {
        FaginProblem p = rep.timed("normalize", [&] { return fagin_normalize(f.formula, x, g.disjuncts()); });
        FaginStats st;
        w = rep.timed("solve", [&] { return check_phi(a, p, k, &st); });
        rep.result()["universal_variables"] = p.universal.size();
        rep.result()["disjuncts"] = p.disjuncts.size();
        rep.result()["peak_family"] = st.peak_family;
      } else {
        w = rep.timed("solve", [&] { return brute_fagin(a, f.formula, x, k, g.brute()); });
      }
      rep.result()["accept"] = w.has_value();
      if (w) {
        verified(check_fagin(a, f.formula, x, *w, k), "witness");
        rep.result()["witness"] = tuples_json(a, *w);
      }
      return rep.emit(w ? kYes : kNo);
    }

    if (red->parsed()) {
      const bool dot = g.format == "dot";
      if (r_c2m->parsed()) {
        Report rep(g, "clique to model checking");
        Graph gr = load_graph(file_a, symmetrize);
        McInstance mc = clique_to_mc(gr, k);
        emit_object(g, rep, "structure", dot ? ".dot" : ".struct", render_structure(mc.graph.structure(), g.format, "G"));
        emit_object(g, rep, "formula", ".fo", write_formula_file(mc.sentence));
        json v = verification(oracle_value([&] { return brute_clique(gr, k, g.brute()).has_value(); }),
                              oracle_value([&] { return eval_naive(mc.graph.structure(), mc.sentence, {}, g.eval()); }));
        rep.result()["verification"] = v;
        return rep.emit(verification_code(v));
      }
      if (r_m2c->parsed()) {
        Report rep(g, "model checking to clique via atomic types");
        Graph gr = load_graph(file_a, symmetrize);
        Formula phi = load_formula(file_f, gr.structure().vocab()).formula;
        CliqueInstance inst = rep.timed("reduce", [&] { return mc_to_clique(gr, phi); });
        emit_object(g, rep, "graph", dot ? ".dot" : ".struct",
                    dot ? graph_to_dot(inst.graph) : write_structure(inst.graph.structure()));
        rep.result()["k"] = inst.k;
        rep.result()["types"] = inst.types.size();
        json v = verification(oracle_value([&] { return eval_naive(gr.structure(), phi, {}, g.eval()); }),
                              oracle_value([&] { return brute_clique(inst.graph, inst.k, g.brute()).has_value(); }));
        rep.result()["verification"] = v;
        return rep.emit(verification_code(v));
      }
      if (r_h2e->parsed()) {
        Report rep(g, "homomorphism to embedding");
        Structure a = load_structure(file_a), b = load_structure(file_b);
        Structure ab = hom_to_emb(a, b);
        emit_object(g, rep, "structure", dot ? ".dot" : ".struct", render_structure(ab, g.format, "A_B"));
        json v = verification(oracle_value([&] { return brute_hom(a, b, g.brute()).has_value(); }),
                              oracle_value([&] { return brute_emb(ab, b, g.brute()).has_value(); }));
        rep.result()["verification"] = v;
        return rep.emit(verification_code(v));
      }
      if (r_s2g->parsed()) {
        Report rep(g, preserve ? "arity-preserving graph encoding" : "graph encoding");
        Structure a = load_structure(file_a);
        Formula phi = load_formula(file_f, a.vocab()).formula;
        GraphEncoding enc = rep.timed("reduce", [&] {
          return preserve ? encode_to_graph_arity_preserving(a, phi, preserve) : encode_to_graph(a, phi);
        });
        emit_object(g, rep, "graph", dot ? ".dot" : ".struct",
                    dot ? graph_to_dot(enc.graph) : write_structure(enc.graph.structure()));
        emit_object(g, rep, "formula", ".fo", write_formula_file(enc.formula));
        rep.result()["source_fragment"] = fragment_name(classify(to_prenex(phi)));
        rep.result()["target_fragment"] = fragment_name(classify(enc.formula));
        json v = verification(oracle_value([&] { return eval_naive(a, phi, {}, g.eval()); }),
                              oracle_value([&] { return eval_naive(enc.graph.structure(), enc.formula, {}, g.eval()); }));
        rep.result()["verification"] = v;
        return rep.emit(verification_code(v));
      }
      if (r_atm->parsed()) {
        Report rep(g, "alternating machine encoding");
        ATMachine m = parse_atm(read_text_file(file_a));
        AtmEncoding enc = rep.timed("reduce", [&] { return atm_encode(m, k, t); });
        emit_object(g, rep, "structure", dot ? ".dot" : ".struct", render_structure(enc.structure, g.format, "A_M"));
        emit_object(g, rep, "formula", ".fo", write_formula_file(enc.sentence));
        rep.result()["fragment"] = fragment_name(classify(to_prenex(enc.sentence)));
        json v = verification(json(simulate_atm(m, k - 1, t)),
                              oracle_value([&] { return eval_naive(enc.structure, enc.sentence, {}, g.eval()); }));
        rep.result()["verification"] = v;
        return rep.emit(verification_code(v));
      }
      if (r_w2f->parsed()) {
        Report rep(g, "weighted satisfiability to Fagin definability");
        PropFormula phi = parse_prop(read_text_file(file_f));
        PropFormula norm = wsat_normalize(phi);
        WsatFaginInstance inst = wsat_to_fagin(norm);
        emit_object(g, rep, "structure", dot ? ".dot" : ".struct", render_structure(inst.structure, g.format, "C"));
        emit_object(g, rep, "formula", ".fo", write_formula_file(inst.psi, inst.x));
        rep.result()["elements"] = inst.structure.n();
        json v = verification(oracle_value([&] { return brute_wsat(phi, k, g.brute()).has_value(); }),
                              oracle_value([&] {
                                return brute_fagin(inst.structure, inst.psi, inst.x, k, g.brute()).has_value();
                              }));
        rep.result()["verification"] = v;
        return rep.emit(verification_code(v));
      }
      if (r_c2w->parsed()) {
        Report rep(g, "clique to weighted satisfiability");
        Graph gr = load_graph(file_a, symmetrize);
        PropFormula phi = clique_to_wsat(gr);
        emit_object(g, rep, "formula", ".prop", to_string(phi) + "\n");
        rep.result()["class"] = prop_class_name(classify_prop(phi));
        json v = verification(oracle_value([&] { return brute_clique(gr, k, g.brute()).has_value(); }),
                              oracle_value([&] { return brute_wsat(phi, k, g.brute()).has_value(); }));
        rep.result()["verification"] = v;
        return rep.emit(verification_code(v));
      }
    }

    if (gen->parsed()) {
      Rng rng(g.seed);
      auto need = [&](std::size_t count) {
        if (params.size() != count)
          throw Error(ErrorCode::InvalidArgument, kind + " takes " + std::to_string(count) + " size parameter(s)");
      };
      auto size = [&](std::size_t i) {
        if (params[i] < 0 || params[i] != static_cast<double>(static_cast<std::size_t>(params[i])))
          throw Error(ErrorCode::InvalidArgument, "size parameters must be non-negative integers");
        return static_cast<std::size_t>(params[i]);
      };
      std::string text;
      if (kind == "random-formula") {
        if (!params.empty()) throw Error(ErrorCode::InvalidArgument, "random-formula takes no size parameters");
        FormulaShape shape;
        shape.vocab = parse_vocab(vocab_spec);
        shape.cls = fragment == "sigma" ? FragmentClass::Sigma : fragment == "pi" ? FragmentClass::Pi : FragmentClass::QuantifierFree;
        shape.t = t;
        shape.variables = variables;
        shape.literals = literals;
        text = write_formula_file(random_prenex_sentence(shape, rng));
      } else {
        std::optional<Graph> gr;
        std::optional<Structure> s;
        if (kind == "K" || kind == "complete") need(1), gr = complete_graph(size(0));
        else if (kind == "C" || kind == "cycle") need(1), gr = cycle_graph(size(0));
        else if (kind == "P" || kind == "path") need(1), gr = path_graph(size(0));
        else if (kind == "grid") need(2), gr = grid_graph(size(0), size(1));
        else if (kind == "random-tree") need(1), gr = random_tree(size(0), rng);
        else if (kind == "random-graph") need(2), gr = random_graph(size(0), params[1], rng);
        else if (kind == "random-structure") need(2), s = random_structure(parse_vocab(vocab_spec), size(0), params[1], rng);
        else throw Error(ErrorCode::InvalidArgument, "unknown generator '" + kind + "'");
        if (gr) text = g.format == "dot" ? graph_to_dot(*gr) : write_structure(gr->structure());
        else text = render_structure(*s, g.format, "A");
      }
      if (g.output.empty()) std::cout << text;
      else write_text_file(g.output, text);
      return kYes;
    }

    if (ver->parsed()) {
      if (suite != "all" && !is_suite(suite)) {
        std::cerr << "error: unknown suite '" << suite << "'; known suites: all";
        for (const auto& n : suite_names()) std::cerr << " " << n;
        std::cerr << "\n";
        return kUsage;
      }
      SuiteOptions o;
      o.quick = quick;
      o.seed = g.seed;
      std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
      json suites = json::array();
      bool all_pass = true;
      for (const auto& n : names) {
        SuiteResult r = run_suite(n, o);
        all_pass = all_pass && r.pass;
        if (g.format != "json") {
          std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.summary << " [" << r.mismatches
                    << " mismatches, " << r.seconds << " s]\n";
          for (const auto& f : r.failures) std::cout << "  " << f << "\n";
          std::cout.flush();
        }
        json j;
        j["name"] = r.name;
        j["pass"] = r.pass;
        j["instances"] = r.instances;
        j["mismatches"] = r.mismatches;
        j["summary"] = r.summary;
        j["failures"] = r.failures;
        if (g.timings) j["seconds"] = r.seconds;
        suites.push_back(j);
      }
      if (g.format == "json") {
        json out;
        out["command"] = g.argv;
        out["seed"] = g.seed;
        out["quick"] = quick;
        out["suites"] = suites;
        out["pass"] = all_pass;
        std::cout << out.dump(2) << "\n";
      }
      return all_pass ? kYes : kNo;
    }

    if (td->parsed()) {
      Report rep(g, check_file.empty() ? (exact ? "exact decomposition" : "min-fill heuristic") : "validation");
      Structure a = load_structure(file_a);
      if (!check_file.empty()) {
        TreeDecomposition dec = parse_td(read_text_file(check_file));
        rep.result()["valid"] = true;
        rep.result()["width"] = validate_td(a, dec);
        return rep.emit(kYes);
      }
      Graph gg = gaifman(a);
      TreeDecomposition dec = rep.timed("decompose", [&] { return exact ? exact_td(gg) : heuristic_td(gg); });
      if (nice) dec = make_nice(dec);
      rep.result()["width"] = validate_td(a, dec);
      rep.result()["nodes"] = dec.size();
      if (g.output.empty() && g.format == "text") {
        std::cout << write_td(dec);
        return kYes;
      }
      emit_object(g, rep, "decomposition", ".td", write_td(dec));
      return rep.emit(kYes);
    }
  } catch (const Error& e) {
    if (g.format == "json") {
      json err;
      err["command"] = g.argv;
      err["error"] = {{"code", error_name(e.code())}, {"message", e.what()}};
      std::cout << err.dump(2) << "\n";
    }
    std::cerr << "error: " << e.what() << "\n";
    return is_resource_error(e.code()) ? kResource : kUsage;
  }
  return kUsage;
}
