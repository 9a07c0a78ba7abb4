#include <cstdio>
#include <string>
#include <vector>

#include "fptmc/error.hpp"
#include "fptmc/suites.hpp"

using namespace fptmc;

int main() {
  const std::vector<std::pair<std::string, std::string>> criteria{
      {"sigma1", "existential pipeline equivalence"},
      {"hom-emb", "homomorphism and embedding oracles"},
      {"fagin", "bounded vertex-cover search"},
      {"encodings", "arity-reducing encodings"},
      {"clique-types", "clique and existential model checking"},
      {"atm", "alternating machine encoding"},
      {"wsat-fagin", "weighted satisfiability instance"},
      {"hash", "perfect hash families"},
      {"treewidth", "tree decompositions"},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& [suite, title] = criteria[i];
    SuiteResult r = run_suite(suite);
    std::string timing = std::to_string(r.seconds).substr(0, std::to_string(r.seconds).find('.') + 3) + " s";
    if (r.limit_seconds > 0) timing += " (limit " + std::to_string(int(r.limit_seconds)) + " s)";
    std::printf("criterion %zu (%s): %s: %s; %zu checks, %zu mismatches, %s\n", i + 1, title.c_str(),
                r.pass ? "PASS" : "FAIL", r.summary.c_str(), r.instances, r.mismatches, timing.c_str());
    for (const auto& f : r.failures) std::printf("  mismatch: %s\n", f.c_str());
    std::fflush(stdout);
    failed += !r.pass;
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
