#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <json.hpp>
#include <string>

#include "fptmc/normal_forms.hpp"
#include "fptmc/parser.hpp"
#include "fptmc/structure_io.hpp"

using namespace fptmc;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string data(const std::string& rel) { return std::string(FPTMC_DATA_DIR) + "/" + rel; }

// stderr is merged into out when `merge` is set.
Run run(const std::string& args, bool merge = false) {
  std::string cmd = std::string(FPTMC_CLI) + " " + args + (merge ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::ordered_json json_of(const Run& r) { return nlohmann::ordered_json::parse(r.out); }

const std::string k2 = data("structures/k2.struct"), k3 = data("structures/k3.struct"), p3 = data("structures/p3.struct"),
                  c5 = data("structures/c5.struct");

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("eval") {
  Run yes = run("eval " + k3 + " " + data("formulas/triangle.fo"));
  CHECK(yes.code == 0);
  CHECK(yes.out.find("holds: true") != std::string::npos);
  CHECK(run("eval " + p3 + " " + data("formulas/triangle.fo")).code == 1);
  Run bad = run("eval " + k3 + " " + data("formulas/bad.fo"), true);
  CHECK(bad.code == 2);
  CHECK(bad.out.find("SyntaxError") != std::string::npos);
  CHECK(run("eval " + k3 + " /nonexistent.fo").code == 2);
  CHECK(run("frobnicate").code == 2);
}

TEST_CASE("hom and emb") {
  Run h = run("--format json hom " + k3 + " " + c5);
  CHECK(h.code == 0);
  auto j = json_of(h);
  CHECK(j["result"]["exists"] == true);
  CHECK(j["result"]["witness"].size() == 5);
  CHECK(run("hom " + k2 + " " + c5).code == 1);
  CHECK(run("hom " + k2 + " " + c5 + " --brute").code == 1);
  CHECK(run("hom " + k3 + " " + c5 + " --brute").code == 0);
  CHECK(run("hom " + k3 + " " + c5 + " --heuristic").code == 0);
  CHECK(run("emb " + c5 + " " + p3).code == 0);
  CHECK(run("emb " + c5 + " " + k3).code == 1);
  CHECK(run("emb " + p3 + " " + k2).code == 0);
  auto r = json_of(run("--format json emb " + c5 + " " + p3 + " --epsilon 0.01"));
  CHECK(r.contains("seed"));
  CHECK(r.contains("error_bound"));
  CHECK(r["error_bound"].get<double>() <= 0.01);
}

TEST_CASE("existential model checking") {
  for (const char* mode : {"naive", "hom", "colorcoding"}) {
    CHECK(run("mc-sigma1 " + p3 + " " + data("formulas/path3.fo") + " --mode " + mode).code == 0);
    CHECK(run("mc-sigma1 " + k2 + " " + data("formulas/path3.fo") + " --mode " + mode).code == 1);
  }
  CHECK(run("mc-sigma1 " + p3 + " " + data("formulas/path3.fo") + " --mode hom --max-disjuncts 0").code == 3);
  CHECK(run("mc-sigma1 " + p3 + " " + data("formulas/vc.fo") + " --mode hom").code == 2);
}

TEST_CASE("bounded definable problems") {
  Run vc = run("--format json fagin " + data("formulas/vc.fo") + " " + p3 + " 1");
  CHECK(vc.code == 0);
  CHECK(json_of(vc)["result"]["witness"] == nlohmann::json::parse(R"([["1"]])"));
  CHECK(run("fagin " + data("formulas/vc.fo") + " " + k3 + " 1").code == 1);
  CHECK(run("fagin " + data("formulas/vc.fo") + " " + k3 + " 1 --mode brute").code == 1);
  Run ds = run("fagin " + data("formulas/ds.fo") + " " + p3 + " 1", true);
  CHECK(ds.code == 2);
  CHECK(ds.out.find("NotPositive") != std::string::npos);
  CHECK(run("fagin " + data("formulas/ds.fo") + " " + p3 + " 1 --mode brute").code == 0);
  CHECK(run("fagin " + data("formulas/vc.fo") + " " + k3 + " 2").code == 0);
}

TEST_CASE("reductions") {
  Run a = run("--format json reduce mc2clique " + k2 + " " + data("formulas/triangle.fo"));
  CHECK(a.code == 0);
  CHECK(json_of(a)["result"]["verification"]["agree"] == true);
  Run b = run("--format json reduce struct2graph " + k2 + " " + data("formulas/path3.fo"));
  CHECK(json_of(b)["result"]["verification"]["agree"] == true);
  Run c = run("--format json reduce atm " + data("machines/acceptor.atm") + " 2");
  auto cj = json_of(c);
  CHECK(cj["result"]["verification"]["agree"] == true);
  CHECK(cj["result"]["verification"]["target"] == true);
  CHECK(json_of(run("--format json reduce clique2mc " + c5 + " 3"))["result"]["verification"]["source"] == false);
  CHECK(json_of(run("--format json reduce wsat2fagin " + data("formulas/sample_cnf.prop")))["result"]["verification"]["agree"] == true);
  auto dir = std::filesystem::temp_directory_path() / "fptmc_cli_test";
  std::filesystem::create_directories(dir);
  std::string prefix = (dir / "c5").string();
  CHECK(run("reduce clique2mc " + c5 + " 2 -o " + prefix).code == 0);
  CHECK(std::filesystem::exists(prefix + ".struct"));
  CHECK(std::filesystem::exists(prefix + ".fo"));
  parse_structure(read_text_file(prefix + ".struct"));
  parse_formula_file(read_text_file(prefix + ".fo"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("generators") {
  Run k4 = run("gen K 4");
  CHECK(k4.code == 0);
  CHECK(parse_structure(k4.out).relation("E").size() == 12);
  CHECK(run("--seed 5 gen random-graph 8 0.4").out == run("--seed 5 gen random-graph 8 0.4").out);
  CHECK(run("--seed 5 gen random-graph 8 0.4").out != run("--seed 6 gen random-graph 8 0.4").out);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Run f = run("--seed " + std::to_string(seed) + " gen random-formula --fragment sigma --t 2 --variables 3 --literals 3");
    REQUIRE(f.code == 0);
    CHECK(in_sigma(classify(parse_formula_file(f.out).formula), 2));
  }
  CHECK(run("gen K 3 --format dot").out.find("graph") != std::string::npos);
}

TEST_CASE("verification suites and decompositions") {
  Run s = run("verify sigma1 --quick");
  CHECK(s.code == 0);
  CHECK(s.out.rfind("PASS sigma1", 0) == 0);
  CHECK(run("verify nope").code == 2);
  Run td = run("--format json td " + c5 + " --exact");
  CHECK(td.code == 0);
  CHECK(json_of(td)["result"]["width"] == 2);
  CHECK(run("td " + c5 + " --nice").code == 0);
}

TEST_CASE("stable json key order") {
  auto j = json_of(run("--format json eval " + k3 + " " + data("formulas/triangle.fo")));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"command", "algorithm", "result"});
  Run t = run("--format json --timings eval " + k3 + " " + data("formulas/triangle.fo"));
  CHECK(json_of(t).contains("timings"));
  Run e = run("--format json eval " + k3 + " " + data("formulas/bad.fo"));
  CHECK(e.code == 2);
  CHECK(json_of(e).contains("error"));
}

}  // TEST_SUITE
