#ifndef FPTMC_EVAL_HPP
#define FPTMC_EVAL_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fptmc/formula.hpp"
#include "fptmc/structure.hpp"

namespace fptmc {

struct Assignment {
  std::map<std::string, Element> vars;
  // Interpretation B ⊆ A^r of the set variable, if the formula has one.
  std::optional<SetVar> setvar;
  std::vector<Tuple> set;
};

struct EvalOptions {
  // Guard on the number of quantifier bindings tried before TooLarge is raised.
  std::uint64_t max_bindings = 100'000'000;
};

// Tarski semantics. Quantifiers are first pushed inwards as far as they go; each
// quantifier block then enumerates its variables most-constrained-first, using atoms
// the body needs and a three-valued check of the body after every binding.
bool eval_naive(const Structure& a, const Formula& f, const Assignment& alpha = {},
                const EvalOptions& opts = {});

// Equivalent formula with every quantifier moved as far inwards as possible.
// Expects NNF with bound variables renamed apart.
Formula miniscope(const Formula& nnf);

// Compiled evaluator for repeated evaluation of one formula on one structure.
class Evaluator {
 public:
  Evaluator(const Structure& a, const Formula& f, std::vector<std::string> free_order = {},
            std::optional<SetVar> setvar = std::nullopt, EvalOptions opts = {});
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  // Values for the free variables in the order given at construction.
  bool eval(const std::vector<Element>& free_values);
  void set_relation(std::vector<Tuple> tuples);
  std::uint64_t bindings() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fptmc

#endif
