#include "fptmc/formula.hpp"

#include <algorithm>

#include "fptmc/error.hpp"

namespace fptmc {

namespace {

Formula make(FormulaKind k, std::string name = {}, std::vector<std::string> args = {},
             std::vector<Formula> children = {}) {
  Formula::Node n;
  n.kind = k;
  n.name = std::move(name);
  n.args = std::move(args);
  n.children = std::move(children);
  return Formula(std::move(n));
}

Formula flat(FormulaKind k, std::vector<Formula> fs) {
  std::vector<Formula> out;
  for (auto& f : fs) {
    if (f.kind() == k) {
      for (const auto& c : f.children()) out.push_back(c);
    } else {
      out.push_back(std::move(f));
    }
  }
  if (out.empty()) return k == FormulaKind::And ? f_true() : f_false();
  if (out.size() == 1) return out[0];
  return make(k, {}, {}, std::move(out));
}

int precedence(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Exists:
    case FormulaKind::Forall: return 0;
    case FormulaKind::Iff: return 1;
    case FormulaKind::Implies: return 2;
    case FormulaKind::Or: return 3;
    case FormulaKind::And: return 4;
    default: return 5;
  }
}

void print(const Formula& f, int ctx, std::string& out) {
  bool paren = precedence(f) < ctx;
  if (paren) out += '(';
  switch (f.kind()) {
    case FormulaKind::True: out += "TRUE"; break;
    case FormulaKind::False: out += "FALSE"; break;
    case FormulaKind::Atom:
      out += f.relation();
      out += '(';
      for (std::size_t i = 0; i < f.args().size(); ++i) {
        if (i) out += ',';
        out += f.args()[i];
      }
      out += ')';
      break;
    case FormulaKind::Equal: out += f.args()[0] + "=" + f.args()[1]; break;
    case FormulaKind::Not:
      out += '!';
      print(f.child(), 5, out);
      break;
    case FormulaKind::And:
    case FormulaKind::Or: {
      const char* op = f.kind() == FormulaKind::And ? " & " : " | ";
      int sub = f.kind() == FormulaKind::And ? 5 : 4;
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) out += op;
        print(f.child(i), sub, out);
      }
      break;
    }
    case FormulaKind::Implies:
      print(f.child(0), 3, out);
      out += " -> ";
      print(f.child(1), 2, out);
      break;
    case FormulaKind::Iff:
      print(f.child(0), 2, out);
      out += " <-> ";
      print(f.child(1), 1, out);
      break;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      out += f.kind() == FormulaKind::Exists ? "EX " : "ALL ";
      out += f.var();
      out += ". ";
      print(f.child(), 0, out);
      break;
  }
  if (paren) out += ')';
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.kind()) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      for (const auto& a : f.args())
        if (!bound.count(a)) out.insert(a);
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      bool fresh = bound.insert(f.var()).second;
      collect_free(f.child(), bound, out);
      if (fresh) bound.erase(f.var());
      return;
    }
    default:
      for (const auto& c : f.children()) collect_free(c, bound, out);
  }
}

}  // namespace

Formula::Formula() : node_(std::make_shared<const Node>()) {}
Formula::Formula(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

bool Formula::is_literal() const {
  if (kind() == FormulaKind::Atom || kind() == FormulaKind::Equal) return true;
  if (kind() == FormulaKind::Not)
    return child().kind() == FormulaKind::Atom || child().kind() == FormulaKind::Equal;
  return false;
}

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  return kind() == o.kind() && node_->name == o.node_->name && node_->args == o.node_->args &&
         node_->children == o.node_->children;
}

Formula f_true() { return make(FormulaKind::True); }
Formula f_false() { return make(FormulaKind::False); }

Formula atom(const std::string& rel, std::vector<std::string> args) {
  if (args.empty()) throw Error(ErrorCode::ArityMismatch, "atom " + rel + " without arguments");
  return make(FormulaKind::Atom, rel, std::move(args));
}

Formula equal(const std::string& x, const std::string& y) { return make(FormulaKind::Equal, {}, {x, y}); }
Formula neq(const std::string& x, const std::string& y) { return neg(equal(x, y)); }
Formula neg(const Formula& f) { return make(FormulaKind::Not, {}, {}, {f}); }
Formula conj(std::vector<Formula> fs) { return flat(FormulaKind::And, std::move(fs)); }
Formula disj(std::vector<Formula> fs) { return flat(FormulaKind::Or, std::move(fs)); }
Formula implies(const Formula& a, const Formula& b) { return make(FormulaKind::Implies, {}, {}, {a, b}); }
Formula iff(const Formula& a, const Formula& b) { return make(FormulaKind::Iff, {}, {}, {a, b}); }
Formula exists(const std::string& v, const Formula& body) { return make(FormulaKind::Exists, v, {}, {body}); }
Formula forall(const std::string& v, const Formula& body) { return make(FormulaKind::Forall, v, {}, {body}); }

Formula exists(const std::vector<std::string>& vs, const Formula& body) {
  Formula f = body;
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) f = exists(*it, f);
  return f;
}

Formula forall(const std::vector<std::string>& vs, const Formula& body) {
  Formula f = body;
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) f = forall(*it, f);
  return f;
}

Formula quantify(FormulaKind q, const std::string& v, const Formula& body) {
  return q == FormulaKind::Exists ? exists(v, body) : forall(v, body);
}

Formula rebuild(const Formula& f, std::vector<Formula> children) {
  switch (f.kind()) {
    case FormulaKind::And: return conj(std::move(children));
    case FormulaKind::Or: return disj(std::move(children));
    case FormulaKind::Not: return neg(children.at(0));
    case FormulaKind::Implies: return implies(children.at(0), children.at(1));
    case FormulaKind::Iff: return iff(children.at(0), children.at(1));
    case FormulaKind::Exists: return exists(f.var(), children.at(0));
    case FormulaKind::Forall: return forall(f.var(), children.at(0));
    default: return f;
  }
}

std::string to_string(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

std::size_t encoding_length(const Formula& f) { return to_string(f).size(); }

std::size_t node_count(const Formula& f) {
  std::size_t c = 1;
  for (const auto& ch : f.children()) c += node_count(ch);
  return c;
}

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::vector<std::string> variables(const Formula& f) {
  std::vector<std::string> out;
  auto add = [&](const std::string& v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.is_quantifier()) add(g.var());
    for (const auto& a : g.args()) add(a);
    for (const auto& c : g.children()) walk(c);
  };
  walk(f);
  return out;
}

bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

bool is_quantifier_free(const Formula& f) {
  if (f.is_quantifier()) return false;
  for (const auto& c : f.children())
    if (!is_quantifier_free(c)) return false;
  return true;
}

bool is_nnf(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Not: return f.is_literal();
    case FormulaKind::Implies:
    case FormulaKind::Iff: return false;
    default:
      for (const auto& c : f.children())
        if (!is_nnf(c)) return false;
      return true;
  }
}

bool is_prenex(const Formula& f) {
  const Formula* g = &f;
  while (g->is_quantifier()) g = &g->child();
  return is_quantifier_free(*g);
}

std::size_t quantifier_rank(const Formula& f) {
  std::size_t r = 0;
  for (const auto& c : f.children()) r = std::max(r, quantifier_rank(c));
  return f.is_quantifier() ? r + 1 : r;
}

std::vector<Symbol> relations_used(const Formula& f) {
  std::vector<Symbol> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.kind() == FormulaKind::Atom) {
      Symbol s{g.relation(), g.args().size()};
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    for (const auto& c : g.children()) walk(c);
  };
  walk(f);
  return out;
}

bool mentions_relation(const Formula& f, const std::string& rel) {
  if (f.kind() == FormulaKind::Atom) return f.relation() == rel;
  for (const auto& c : f.children())
    if (mentions_relation(c, rel)) return true;
  return false;
}

Formula substitute(const Formula& f, const std::map<std::string, std::string>& sub) {
  if (sub.empty()) return f;
  auto map_var = [&](const std::string& v) {
    auto it = sub.find(v);
    return it == sub.end() ? v : it->second;
  };
  switch (f.kind()) {
    case FormulaKind::Atom: {
      std::vector<std::string> a;
      for (const auto& v : f.args()) a.push_back(map_var(v));
      return atom(f.relation(), std::move(a));
    }
    case FormulaKind::Equal: return equal(map_var(f.args()[0]), map_var(f.args()[1]));
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      if (sub.count(f.var())) {
        auto inner = sub;
        inner.erase(f.var());
        return quantify(f.kind(), f.var(), substitute(f.child(), inner));
      }
      return quantify(f.kind(), f.var(), substitute(f.child(), sub));
    }
    case FormulaKind::True:
    case FormulaKind::False: return f;
    default: {
      std::vector<Formula> ch;
      for (const auto& c : f.children()) ch.push_back(substitute(c, sub));
      return rebuild(f, std::move(ch));
    }
  }
}

Formula replace_atoms(const Formula& f, const std::string& rel,
                      const std::function<Formula(const std::vector<std::string>&)>& make_atom) {
  if (f.kind() == FormulaKind::Atom) return f.relation() == rel ? make_atom(f.args()) : f;
  if (f.children().empty()) return f;
  std::vector<Formula> ch;
  for (const auto& c : f.children()) ch.push_back(replace_atoms(c, rel, make_atom));
  return rebuild(f, std::move(ch));
}

}  // namespace fptmc
