#ifndef FPTMC_PARSER_HPP
#define FPTMC_PARSER_HPP

#include <optional>
#include <string>

#include "fptmc/formula.hpp"

namespace fptmc {

// Grammar (loosest first): `<->`, `->` (both right associative), `|`, `&`, `!`.
// `EX v.` / `ALL v.` extend as far right as possible. Atoms `R(x,y)`, `x=y`, `x!=y`,
// `TRUE`, `FALSE`. '#' starts a comment.
//
// With a vocabulary, atoms must match a symbol and its arity (or the set variable).
Formula parse_formula(const std::string& text, const std::optional<Vocabulary>& vocab = std::nullopt,
                      const std::optional<SetVar>& setvar = std::nullopt);

struct FormulaFile {
  Formula formula;
  std::optional<SetVar> setvar;
};

// One sentence per file, optionally preceded by a `# setvar X <arity>` header.
FormulaFile parse_formula_file(const std::string& text, const std::optional<Vocabulary>& vocab = std::nullopt);
std::string write_formula_file(const Formula& f, const std::optional<SetVar>& setvar = std::nullopt);

}  // namespace fptmc

#endif
