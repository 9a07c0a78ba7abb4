#ifndef FPTMC_FORMULA_HPP
#define FPTMC_FORMULA_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fptmc/structure.hpp"

namespace fptmc {

enum class FormulaKind { True, False, Atom, Equal, Not, And, Or, Implies, Iff, Exists, Forall };

// Immutable first-order formula. And/Or are n-ary and kept flat by the builders.
class Formula {
 public:
  struct Node {
    FormulaKind kind = FormulaKind::True;
    std::string name;               // relation of an atom, or the bound variable
    std::vector<std::string> args;  // atom arguments; the two sides of an equality
    std::vector<Formula> children;
  };

  Formula();
  explicit Formula(Node n);

  FormulaKind kind() const { return node_->kind; }
  const std::string& relation() const { return node_->name; }
  const std::string& var() const { return node_->name; }
  const std::vector<std::string>& args() const { return node_->args; }
  const std::vector<Formula>& children() const { return node_->children; }
  const Formula& child(std::size_t i = 0) const { return node_->children[i]; }
  const Node* id() const { return node_.get(); }

  bool is_quantifier() const { return kind() == FormulaKind::Exists || kind() == FormulaKind::Forall; }
  bool is_literal() const;

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

 private:
  std::shared_ptr<const Node> node_;
};

// The relation variable of a Fagin-definability question.
struct SetVar {
  std::string name;
  std::size_t arity = 1;
};

Formula f_true();
Formula f_false();
Formula atom(const std::string& rel, std::vector<std::string> args);
Formula equal(const std::string& x, const std::string& y);
Formula neq(const std::string& x, const std::string& y);
Formula neg(const Formula& f);
Formula conj(std::vector<Formula> fs);
Formula disj(std::vector<Formula> fs);
Formula implies(const Formula& a, const Formula& b);
Formula iff(const Formula& a, const Formula& b);
Formula exists(const std::string& v, const Formula& body);
Formula forall(const std::string& v, const Formula& body);
Formula exists(const std::vector<std::string>& vs, const Formula& body);
Formula forall(const std::vector<std::string>& vs, const Formula& body);
Formula quantify(FormulaKind q, const std::string& v, const Formula& body);
Formula rebuild(const Formula& f, std::vector<Formula> children);

std::string to_string(const Formula& f);
// ‖φ‖: character count of the canonical print.
std::size_t encoding_length(const Formula& f);
std::size_t node_count(const Formula& f);

std::set<std::string> free_variables(const Formula& f);
// All variable names, free or bound, in order of first occurrence.
std::vector<std::string> variables(const Formula& f);
bool is_sentence(const Formula& f);
bool is_quantifier_free(const Formula& f);
bool is_nnf(const Formula& f);
bool is_prenex(const Formula& f);
std::size_t quantifier_rank(const Formula& f);
// Relation symbols used in atoms with their arities, in first occurrence order.
std::vector<Symbol> relations_used(const Formula& f);
bool mentions_relation(const Formula& f, const std::string& rel);

// Replaces free occurrences of variables; the caller guarantees no capture.
Formula substitute(const Formula& f, const std::map<std::string, std::string>& sub);
// Replaces every atom on relation rel by make(args).
Formula replace_atoms(const Formula& f, const std::string& rel,
                      const std::function<Formula(const std::vector<std::string>&)>& make);

}  // namespace fptmc

#endif
