#ifndef FPTMC_HASH_FAMILY_HPP
#define FPTMC_HASH_FAMILY_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace fptmc {

enum class HashMode { Deterministic, Randomized };

struct HashOptions {
  HashMode mode = HashMode::Deterministic;
  std::uint64_t seed = 0;
  double epsilon = 1e-6;
  // Deterministic families are only built when all l-subsets can be checked.
  double max_subsets = 1e6;
};

// Functions {0..n-1} -> {1..l}. A deterministic family is bijective on every l-subset
// (checked exhaustively); a randomized one fails on a fixed l-subset with probability
// at most error_bound.
struct HashFamily {
  std::size_t n = 0;
  std::size_t l = 0;
  std::vector<std::vector<std::size_t>> functions;
  HashMode mode = HashMode::Deterministic;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  double epsilon = 0;
  double error_bound = 0;
};

HashFamily build_hash_family(std::size_t n, std::size_t l, const HashOptions& opts = {});

// Trial count ⌈e^l · ln(1/ε)⌉ of the randomized construction.
std::size_t randomized_trials(std::size_t l, double epsilon);
// (1 − l!/l^l)^trials.
double randomized_error_bound(std::size_t l, std::size_t trials);
// The coloring used in trial i; depends only on (seed, i).
std::vector<std::size_t> random_coloring(std::size_t n, std::size_t l, std::uint64_t seed, std::size_t trial);

// First l-subset of {0..n-1} (lexicographic) on which no function is bijective.
std::optional<std::vector<std::size_t>> uncovered_subset(const HashFamily& f);

std::size_t smallest_prime_above(std::size_t n);

}  // namespace fptmc

#endif
