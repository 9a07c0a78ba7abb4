#ifndef FPTMC_PROP_HPP
#define FPTMC_PROP_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fptmc/formula.hpp"
#include "fptmc/structure.hpp"

namespace fptmc {

enum class PropKind { Var, Not, And, Or, BigAnd, BigOr };

struct PropNode;
using PropPtr = std::shared_ptr<const PropNode>;

struct PropNode {
  PropKind kind = PropKind::Var;
  std::size_t var = 0;  // index into the variable table
  std::vector<PropPtr> children;
};

PropPtr p_var(std::size_t v);
PropPtr p_not(PropPtr a);
PropPtr p_and(PropPtr a, PropPtr b);
PropPtr p_or(PropPtr a, PropPtr b);
PropPtr p_bigand(std::vector<PropPtr> cs);
PropPtr p_bigor(std::vector<PropPtr> cs);

bool prop_equal(const PropPtr& a, const PropPtr& b);

// Propositional formula together with its variable table. The table may list
// variables that do not occur; assignments range over the whole table.
class PropFormula {
 public:
  PropFormula(std::vector<std::string> vars, PropPtr root);

  const std::vector<std::string>& variables() const { return vars_; }
  const PropPtr& root() const { return root_; }
  std::optional<std::size_t> find(const std::string& name) const;

  bool eval(const std::vector<bool>& assignment) const;
  std::size_t size() const;
  std::size_t depth() const;

  bool operator==(const PropFormula& o) const;

 private:
  std::vector<std::string> vars_;
  PropPtr root_;
};

// Prefix syntax: (AND a b), (OR a b), (BIGAND ...), (BIGOR ...), (NOT a), variables
// are identifiers. AND/OR with more than two operands nest to the right. An optional
// leading line `vars A B C` fixes the variable table.
PropFormula parse_prop(const std::string& text);
std::string to_string(const PropFormula& f);

enum class PropClassKind { Small, C, D, Other };

struct PropClass {
  PropClassKind kind = PropClassKind::Other;
  // Level t; when `exact` is false (empty big connectives at the bottom) the formula
  // belongs to every level ≥ t.
  std::size_t t = 0;
  bool exact = true;
  // Maximal depth of a small subformula.
  std::size_t d = 0;
};

PropClass classify_prop(const PropFormula& f);
bool in_c(const PropFormula& f, std::size_t t, std::size_t d);
std::string prop_class_name(const PropClass& c);

// Wraps every bottom small formula into a singleton big connective, moving a C_t
// formula into C_{t+1} without changing its meaning.
PropFormula lift(const PropFormula& f);

// Rewrites a C_t formula so every bottom small formula is a clause (t odd) or term
// (t even) of one common width d′, using the existing variable table for padding.
PropFormula wsat_normalize(const PropFormula& f);

struct NormalShape {
  std::size_t t = 0;
  std::size_t width = 0;
};
// Shape of a normalized formula; throws NotNormalized otherwise.
NormalShape normalized_shape(const PropFormula& f);

// The graph formula φ(G): a weight-k model exists iff G has a k-clique.
PropFormula clique_to_wsat(const Graph& g);

struct WsatFaginInstance {
  Structure structure;
  Formula psi;
  SetVar x;
  // Element of C standing for each variable of the table.
  std::vector<Element> var_element;
};

WsatFaginInstance wsat_to_fagin(const PropFormula& normalized);

}  // namespace fptmc

#endif
