#include "fptmc/hash_family.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fptmc/brute.hpp"
#include "fptmc/error.hpp"

namespace fptmc {

namespace {

bool is_prime(std::size_t p) {
  if (p < 2) return false;
  for (std::size_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& visit) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (visit(idx)) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

template <class It, class F>
bool injective_on(It begin, It end, F&& value) {
  std::vector<std::size_t> seen;
  for (It it = begin; it != end; ++it) seen.push_back(value(*it));
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

}  // namespace

std::size_t smallest_prime_above(std::size_t n) {
  std::size_t p = n + 1;
  while (!is_prime(p)) ++p;
  return p;
}

std::size_t randomized_trials(std::size_t l, double epsilon) {
  if (!(epsilon > 0 && epsilon < 1)) throw Error(ErrorCode::InvalidArgument, "epsilon must lie strictly between 0 and 1");
  return static_cast<std::size_t>(std::ceil(std::exp(double(l)) * std::log(1 / epsilon)));
}

double randomized_error_bound(std::size_t l, std::size_t trials) {
  double fact = 1, pow = 1;
  for (std::size_t i = 1; i <= l; ++i) {
    fact *= double(i);
    pow *= double(l);
  }
  return std::pow(1 - fact / pow, double(trials));
}

std::vector<std::size_t> random_coloring(std::size_t n, std::size_t l, std::uint64_t seed, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(std::uint64_t(trial) >> 32)};
  std::mt19937_64 rng(seq);
  std::vector<std::size_t> f(n);
  for (auto& c : f) c = 1 + static_cast<std::size_t>(rng() % l);
  return f;
}

std::optional<std::vector<std::size_t>> uncovered_subset(const HashFamily& fam) {
  std::optional<std::vector<std::size_t>> missing;
  for_each_subset(fam.n, fam.l, [&](const std::vector<std::size_t>& y) {
    for (const auto& f : fam.functions)
      if (injective_on(y.begin(), y.end(), [&](std::size_t x) { return f[x]; })) return false;
    missing = y;
    return true;
  });
  return missing;
}

HashFamily build_hash_family(std::size_t n, std::size_t l, const HashOptions& opts) {
  if (l == 0) throw Error(ErrorCode::InvalidArgument, "hash range must have at least one color");
  HashFamily fam;
  fam.n = n;
  fam.l = l;
  fam.mode = opts.mode;
  fam.seed = opts.seed;

  if (opts.mode == HashMode::Randomized) {
    fam.epsilon = opts.epsilon;
    fam.trials = randomized_trials(l, opts.epsilon);
    fam.error_bound = randomized_error_bound(l, fam.trials);
    for (std::size_t i = 0; i < fam.trials; ++i) fam.functions.push_back(random_coloring(n, l, opts.seed, i));
    return fam;
  }

  if (n == 0) {
    fam.functions.push_back({});
    return fam;
  }
  if (l > n) {
    // no l-subsets; one injective function still separates every smaller set
    std::vector<std::size_t> f(n);
    for (std::size_t x = 0; x < n; ++x) f[x] = x + 1;
    fam.functions.push_back(std::move(f));
    return fam;
  }
  if (l == 1) {
    fam.functions.push_back(std::vector<std::size_t>(n, 1));
    return fam;
  }
  double subsets = binomial(double(n), double(l));
  if (subsets > opts.max_subsets)
    throw Error(ErrorCode::InfeasibleDeterministic,
                std::to_string(static_cast<unsigned long long>(subsets)) +
                    " subsets are too many to verify a deterministic family; use the randomized mode");

  std::vector<std::vector<std::size_t>> all;
  for_each_subset(n, l, [&](const std::vector<std::size_t>& y) {
    all.push_back(y);
    return false;
  });
  const std::size_t p = smallest_prime_above(n), m = l * l;
  std::vector<std::size_t> open(all.size());
  for (std::size_t i = 0; i < open.size(); ++i) open[i] = i;

  std::set<std::vector<std::size_t>> chosen;
  auto emit = [&](std::vector<std::size_t> f) {
    if (chosen.insert(f).second) fam.functions.push_back(std::move(f));
  };
  for (std::size_t a = 1; a < p && !open.empty(); ++a)
    for (std::size_t b = 0; b < p && !open.empty(); ++b) {
      auto h = [&](std::size_t x) { return ((a * x + b) % p) % m; };
      std::vector<std::size_t> taken, rest;
      for (std::size_t i : open)
        (injective_on(all[i].begin(), all[i].end(), h) ? taken : rest).push_back(i);
      if (taken.empty()) continue;
      open = std::move(rest);
      // second stage: maps {0..m-1} -> {1..l} numbering one image set, the rest sent to 1
      std::vector<std::vector<std::size_t>> images;
      for (std::size_t i : taken) {
        std::vector<std::size_t> img;
        for (std::size_t x : all[i]) img.push_back(h(x));
        std::sort(img.begin(), img.end());
        images.push_back(std::move(img));
      }
      std::sort(images.begin(), images.end());
      images.erase(std::unique(images.begin(), images.end()), images.end());
      std::vector<char> done(images.size(), 0);
      for (std::size_t s = 0; s < images.size(); ++s) {
        if (done[s]) continue;
        std::vector<std::size_t> g(m, 1);
        for (std::size_t j = 0; j < l; ++j) g[images[s][j]] = j + 1;
        for (std::size_t t = s; t < images.size(); ++t)
          if (!done[t] && injective_on(images[t].begin(), images[t].end(), [&](std::size_t v) { return g[v]; }))
            done[t] = 1;
        std::vector<std::size_t> f(n);
        for (std::size_t x = 0; x < n; ++x) f[x] = g[h(x)];
        emit(std::move(f));
      }
    }
  for (std::size_t i : open) {
    std::vector<std::size_t> f(n, 1);
    for (std::size_t j = 0; j < l; ++j) f[all[i][j]] = j + 1;
    emit(std::move(f));
  }
  if (uncovered_subset(fam)) throw Error(ErrorCode::InvalidArgument, "internal: hash family misses a subset");
  return fam;
}

}  // namespace fptmc
