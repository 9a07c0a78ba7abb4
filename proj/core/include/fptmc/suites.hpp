#ifndef FPTMC_SUITES_HPP
#define FPTMC_SUITES_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fptmc {

struct SuiteOptions {
  // Fewer random instances and smaller exhaustive ranges.
  bool quick = false;
  std::uint64_t seed = 1;
  // Called with one line per finished check when set.
  std::function<void(const std::string&)> log;
};

struct SuiteResult {
  std::string name;
  std::string description;
  bool pass = false;
  std::size_t instances = 0;
  std::size_t mismatches = 0;
  double seconds = 0;
  double limit_seconds = 0;  // 0: no time limit
  std::vector<std::string> failures;  // first few
  std::string summary;
};

// sigma1, hom-emb, fagin, encodings, clique-types, atm, wsat-fagin, hash, treewidth.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);
SuiteResult run_suite(const std::string& name, const SuiteOptions& opts = {});

// Machines of the ATM suite: (name, text in the ATM file format).
const std::vector<std::pair<std::string, std::string>>& atm_corpus();
// The four-clause 3-CNF over X, Y, Z of the weighted-satisfiability suite.
const std::string& sample_cnf_text();

}  // namespace fptmc

#endif
