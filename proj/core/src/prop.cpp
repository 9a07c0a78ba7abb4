#include "fptmc/prop.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "fptmc/error.hpp"

namespace fptmc {

PropPtr p_var(std::size_t v) {
  auto n = std::make_shared<PropNode>();
  n->kind = PropKind::Var;
  n->var = v;
  return n;
}

namespace {

PropPtr make(PropKind k, std::vector<PropPtr> cs) {
  auto n = std::make_shared<PropNode>();
  n->kind = k;
  n->children = std::move(cs);
  return n;
}

}  // namespace

PropPtr p_not(PropPtr a) { return make(PropKind::Not, {std::move(a)}); }
PropPtr p_and(PropPtr a, PropPtr b) { return make(PropKind::And, {std::move(a), std::move(b)}); }
PropPtr p_or(PropPtr a, PropPtr b) { return make(PropKind::Or, {std::move(a), std::move(b)}); }
PropPtr p_bigand(std::vector<PropPtr> cs) { return make(PropKind::BigAnd, std::move(cs)); }
PropPtr p_bigor(std::vector<PropPtr> cs) { return make(PropKind::BigOr, std::move(cs)); }

bool prop_equal(const PropPtr& a, const PropPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->children.size() != b->children.size()) return false;
  if (a->kind == PropKind::Var) return a->var == b->var;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (!prop_equal(a->children[i], b->children[i])) return false;
  return true;
}

namespace {

void check_vars(const PropPtr& n, std::size_t nv) {
  if (n->kind == PropKind::Var) {
    if (n->var >= nv) throw Error(ErrorCode::InvalidArgument, "variable index outside the table");
    return;
  }
  if ((n->kind == PropKind::Not && n->children.size() != 1) ||
      ((n->kind == PropKind::And || n->kind == PropKind::Or) && n->children.size() != 2))
    throw Error(ErrorCode::InvalidArgument, "wrong number of operands for a small connective");
  for (const auto& c : n->children) check_vars(c, nv);
}

bool eval_node(const PropNode& n, const std::vector<bool>& a) {
  switch (n.kind) {
    case PropKind::Var:
      return a[n.var];
    case PropKind::Not:
      return !eval_node(*n.children[0], a);
    case PropKind::And:
    case PropKind::BigAnd:
      for (const auto& c : n.children)
        if (!eval_node(*c, a)) return false;
      return true;
    case PropKind::Or:
    case PropKind::BigOr:
      for (const auto& c : n.children)
        if (eval_node(*c, a)) return true;
      return false;
  }
  return false;
}

std::size_t size_of(const PropNode& n) {
  std::size_t s = 1;
  for (const auto& c : n.children) s += size_of(*c);
  return s;
}

std::size_t depth_of(const PropNode& n) {
  std::size_t d = 0;
  for (const auto& c : n.children) d = std::max(d, depth_of(*c));
  return n.kind == PropKind::Var || n.kind == PropKind::Not ? d : d + 1;
}

}  // namespace

PropFormula::PropFormula(std::vector<std::string> vars, PropPtr root) : vars_(std::move(vars)), root_(std::move(root)) {
  std::set<std::string> seen;
  for (const auto& v : vars_)
    if (!seen.insert(v).second) throw Error(ErrorCode::InvalidArgument, "duplicate variable " + v);
  check_vars(root_, vars_.size());
}

std::optional<std::size_t> PropFormula::find(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return i;
  return std::nullopt;
}

bool PropFormula::eval(const std::vector<bool>& assignment) const {
  if (assignment.size() != vars_.size()) throw Error(ErrorCode::InvalidArgument, "assignment length differs from the variable table");
  return eval_node(*root_, assignment);
}

std::size_t PropFormula::size() const { return size_of(*root_); }
std::size_t PropFormula::depth() const { return depth_of(*root_); }

bool PropFormula::operator==(const PropFormula& o) const { return vars_ == o.vars_ && prop_equal(root_, o.root_); }

// ---------------------------------------------------------------- text format

namespace {

struct PropLexer {
  const std::string& s;
  std::size_t i = 0;
  std::size_t line = 1;

  void skip() {
    while (i < s.size()) {
      if (s[i] == '#') {
        while (i < s.size() && s[i] != '\n') ++i;
      } else if (std::isspace(static_cast<unsigned char>(s[i]))) {
        if (s[i] == '\n') ++line;
        ++i;
      } else {
        break;
      }
    }
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::SyntaxError, "line " + std::to_string(line) + ": " + msg);
  }
  std::string next() {
    skip();
    if (i >= s.size()) return "";
    if (s[i] == '(' || s[i] == ')') return std::string(1, s[i++]);
    std::size_t j = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    if (j == i) fail(std::string("unexpected character '") + s[i] + "'");
    return s.substr(j, i - j);
  }
  std::string peek() {
    std::size_t si = i, sl = line;
    std::string t = next();
    i = si;
    line = sl;
    return t;
  }
};

bool is_keyword(const std::string& t) {
  return t == "AND" || t == "OR" || t == "NOT" || t == "BIGAND" || t == "BIGOR" || t == "vars";
}

struct PropParser {
  PropLexer lex;
  std::vector<std::string> vars;
  std::map<std::string, std::size_t> index;
  bool fixed_table = false;

  std::size_t var(const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    if (fixed_table) lex.fail("variable " + name + " is not in the vars table");
    index[name] = vars.size();
    vars.push_back(name);
    return vars.size() - 1;
  }

  PropPtr parse() {
    std::string t = lex.next();
    if (t.empty()) lex.fail("unexpected end of input");
    if (t == ")") lex.fail("unexpected ')'");
    if (t != "(") {
      if (is_keyword(t) || !is_identifier(t)) lex.fail("expected a variable, got " + t);
      return p_var(var(t));
    }
    std::string op = lex.next();
    std::vector<PropPtr> args;
    while (lex.peek() != ")") {
      if (lex.peek().empty()) lex.fail("missing ')'");
      args.push_back(parse());
    }
    lex.next();
    if (op == "NOT") {
      if (args.size() != 1) lex.fail("NOT takes one operand");
      return p_not(args[0]);
    }
    if (op == "AND" || op == "OR") {
      if (args.size() < 2) lex.fail(op + " takes at least two operands");
      PropPtr acc = args.back();
      for (std::size_t i = args.size() - 1; i-- > 0;) acc = op == "AND" ? p_and(args[i], acc) : p_or(args[i], acc);
      return acc;
    }
    if (op == "BIGAND") return p_bigand(std::move(args));
    if (op == "BIGOR") return p_bigor(std::move(args));
    lex.fail("unknown connective " + op);
  }
};

void print(const PropFormula& f, const PropNode& n, std::string& out) {
  switch (n.kind) {
    case PropKind::Var:
      out += f.variables()[n.var];
      return;
    case PropKind::Not:
      out += "(NOT ";
      break;
    case PropKind::And:
      out += "(AND ";
      break;
    case PropKind::Or:
      out += "(OR ";
      break;
    case PropKind::BigAnd:
      out += "(BIGAND";
      break;
    case PropKind::BigOr:
      out += "(BIGOR";
      break;
  }
  bool big = n.kind == PropKind::BigAnd || n.kind == PropKind::BigOr;
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    if (big || i > 0) out += ' ';
    print(f, *n.children[i], out);
  }
  out += ')';
}

}  // namespace

PropFormula parse_prop(const std::string& text) {
  PropParser p{PropLexer{text}, {}, {}, false};
  if (p.lex.peek() == "vars") {
    p.lex.next();
    // the table runs to the end of the line
    while (true) {
      std::size_t si = p.lex.i;
      while (si < text.size() && (text[si] == ' ' || text[si] == '\t')) ++si;
      if (si >= text.size() || text[si] == '\n' || text[si] == '#' || text[si] == '(') break;
      std::string name = p.lex.next();
      if (is_keyword(name) || !is_identifier(name)) p.lex.fail("bad variable name " + name);
      if (p.index.count(name)) p.lex.fail("duplicate variable " + name);
      p.var(name);
      std::size_t k = p.lex.i;
      while (k < text.size() && (text[k] == ' ' || text[k] == '\t')) ++k;
      p.lex.i = k;
    }
    p.fixed_table = true;
  }
  PropPtr root = p.parse();
  if (!p.lex.next().empty()) p.lex.fail("trailing input");
  return PropFormula(p.vars, root);
}

std::string to_string(const PropFormula& f) {
  std::string out = "vars";
  for (const auto& v : f.variables()) out += " " + v;
  out += "\n";
  print(f, *f.root(), out);
  out += "\n";
  return out;
}

// ---------------------------------------------------------------- classes

namespace {

bool is_small(const PropNode& n) {
  if (n.kind == PropKind::BigAnd || n.kind == PropKind::BigOr) return false;
  for (const auto& c : n.children)
    if (!is_small(*c)) return false;
  return true;
}

PropClass classify_node(const PropNode& n) {
  PropClass r;
  if (is_small(n)) {
    r.kind = PropClassKind::Small;
    r.t = 0;
    r.d = depth_of(n);
    return r;
  }
  if (n.kind != PropKind::BigAnd && n.kind != PropKind::BigOr) return r;  // Other
  PropClassKind need = n.kind == PropKind::BigAnd ? PropClassKind::D : PropClassKind::C;
  std::size_t lo = 1;
  std::optional<std::size_t> exact;
  std::size_t d = 0;
  for (const auto& c : n.children) {
    PropClass cc = classify_node(*c);
    d = std::max(d, cc.d);
    if (cc.kind == PropClassKind::Small) {
      if (exact && *exact != 1) return PropClass{};
      exact = 1;
    } else if (cc.kind == need) {
      if (cc.exact) {
        if (exact && *exact != cc.t + 1) return PropClass{};
        exact = cc.t + 1;
      } else {
        lo = std::max(lo, cc.t + 1);
      }
    } else {
      return PropClass{};
    }
  }
  if (exact && *exact < lo) return PropClass{};
  r.kind = n.kind == PropKind::BigAnd ? PropClassKind::C : PropClassKind::D;
  r.t = exact ? *exact : lo;
  r.exact = exact.has_value();
  r.d = d;
  return r;
}

}  // namespace

PropClass classify_prop(const PropFormula& f) { return classify_node(*f.root()); }

bool in_c(const PropFormula& f, std::size_t t, std::size_t d) {
  PropClass c = classify_prop(f);
  if (c.d > d) return false;
  if (c.kind == PropClassKind::Small) return t == 0;
  if (c.kind != PropClassKind::C) return false;
  return c.exact ? c.t == t : t >= c.t;
}

std::string prop_class_name(const PropClass& c) {
  std::string base;
  switch (c.kind) {
    case PropClassKind::Small:
      return "C0,d=" + std::to_string(c.d);
    case PropClassKind::C:
      base = "C";
      break;
    case PropClassKind::D:
      base = "D";
      break;
    case PropClassKind::Other:
      return "other";
  }
  return base + std::to_string(c.t) + (c.exact ? "" : "+") + ",d=" + std::to_string(c.d);
}

namespace {

PropPtr lift_node(const PropPtr& n) {
  if (n->kind != PropKind::BigAnd && n->kind != PropKind::BigOr) return n;
  std::vector<PropPtr> cs;
  for (const auto& c : n->children) {
    if (is_small(*c))
      cs.push_back(n->kind == PropKind::BigAnd ? p_bigor({c}) : p_bigand({c}));
    else
      cs.push_back(lift_node(c));
  }
  return make(n->kind, std::move(cs));
}

}  // namespace

PropFormula lift(const PropFormula& f) {
  if (is_small(*f.root())) return PropFormula(f.variables(), p_bigand({p_bigor({f.root()})}));
  return PropFormula(f.variables(), lift_node(f.root()));
}

// ---------------------------------------------------------------- normalization

namespace {

// literal = 2*var + (negated ? 1 : 0)
using Clause = std::vector<std::size_t>;

bool tidy(Clause& c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    if (c[i] / 2 == c[i + 1] / 2) return false;  // complementary pair
  return true;
}

// CNF clauses of a small formula, with the given polarity.
std::vector<Clause> cnf(const PropNode& n, bool positive) {
  switch (n.kind) {
    case PropKind::Var:
      return {Clause{2 * n.var + (positive ? 0 : 1)}};
    case PropKind::Not:
      return cnf(*n.children[0], !positive);
    default:
      break;
  }
  bool conj = (n.kind == PropKind::And) == positive;
  std::vector<Clause> a = cnf(*n.children[0], positive);
  std::vector<Clause> b = cnf(*n.children[1], positive);
  std::vector<Clause> out;
  if (conj) {
    out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
  }
  for (const auto& x : a)
    for (const auto& y : b) {
      Clause c = x;
      c.insert(c.end(), y.begin(), y.end());
      if (tidy(c)) out.push_back(c);
    }
  return out;
}

std::vector<Clause> clauses_of(const PropNode& small, bool want_cnf) {
  if (want_cnf) {
    std::vector<Clause> cs = cnf(small, true);
    std::vector<Clause> out;
    for (auto c : cs)
      if (tidy(c)) out.push_back(c);
    return out;
  }
  // terms of the DNF are the complemented clauses of the CNF of the negation
  std::vector<Clause> cs = cnf(small, false);
  std::vector<Clause> out;
  for (auto c : cs) {
    if (!tidy(c)) continue;
    for (auto& l : c) l ^= 1;
    tidy(c);
    out.push_back(c);
  }
  return out;
}

struct NTree {
  PropKind kind;
  std::vector<NTree> kids;
  bool innermost = false;
  std::vector<Clause> clauses;
};

NTree collect(const PropNode& n, std::size_t remaining, bool want_cnf, std::size_t& width) {
  NTree t{n.kind, {}, remaining == 1, {}};
  for (const auto& c : n.children) {
    if (remaining == 1) {
      for (auto& cl : clauses_of(*c, want_cnf)) {
        width = std::max(width, cl.size());
        t.clauses.push_back(std::move(cl));
      }
    } else {
      t.kids.push_back(collect(*c, remaining - 1, want_cnf, width));
    }
  }
  return t;
}

PropPtr literal(std::size_t l) {
  PropPtr v = p_var(l / 2);
  return l % 2 ? p_not(v) : v;
}

PropPtr clause_node(const Clause& c, bool is_or) {
  PropPtr acc = literal(c.back());
  for (std::size_t i = c.size() - 1; i-- > 0;) acc = is_or ? p_or(literal(c[i]), acc) : p_and(literal(c[i]), acc);
  return acc;
}

void pad(const Clause& c, std::size_t width, std::size_t nv, std::vector<Clause>& out) {
  if (c.size() >= width) {
    out.push_back(c);
    return;
  }
  std::size_t v = 0;
  while (std::find_if(c.begin(), c.end(), [&](std::size_t l) { return l / 2 == v; }) != c.end()) ++v;
  if (v >= nv) throw Error(ErrorCode::InvalidArgument, "internal: no padding variable available");
  for (std::size_t pol = 0; pol < 2; ++pol) {
    Clause d = c;
    d.push_back(2 * v + pol);
    tidy(d);
    pad(d, width, nv, out);
  }
}

PropPtr rebuild_tree(const NTree& t, std::size_t width, std::size_t nv, bool want_cnf) {
  std::vector<PropPtr> cs;
  if (t.innermost) {
    for (const auto& c : t.clauses) {
      std::vector<Clause> padded;
      pad(c, width, nv, padded);
      for (const auto& p : padded) cs.push_back(clause_node(p, want_cnf));
    }
  } else {
    for (const auto& k : t.kids) cs.push_back(rebuild_tree(k, width, nv, want_cnf));
  }
  return make(t.kind, std::move(cs));
}

std::size_t level_of(const PropClass& c) {
  if (c.kind != PropClassKind::C || c.t == 0)
    throw Error(ErrorCode::NotNormalized, "formula is not a big conjunction of class C_t, t >= 1 (" + prop_class_name(c) + ")");
  return c.t;
}

}  // namespace

PropFormula wsat_normalize(const PropFormula& f) {
  PropClass c = classify_prop(f);
  std::size_t t = level_of(c);
  bool want_cnf = t % 2 == 1;
  std::size_t width = 0;
  NTree tree = collect(*f.root(), t, want_cnf, width);
  return PropFormula(f.variables(), rebuild_tree(tree, width, f.variables().size(), want_cnf));
}

namespace {

// Literal list of a clause (t odd: nested OR) or a term (t even: nested AND).
bool clause_literals(const PropNode& n, PropKind conn, Clause& out) {
  if (n.kind == PropKind::Var) {
    out.push_back(2 * n.var);
    return true;
  }
  if (n.kind == PropKind::Not) {
    if (n.children[0]->kind != PropKind::Var) return false;
    out.push_back(2 * n.children[0]->var + 1);
    return true;
  }
  if (n.kind != conn) return false;
  return clause_literals(*n.children[0], conn, out) && clause_literals(*n.children[1], conn, out);
}

void check_shape(const PropNode& n, std::size_t remaining, PropKind conn, std::optional<std::size_t>& width) {
  for (const auto& c : n.children) {
    if (remaining > 1) {
      check_shape(*c, remaining - 1, conn, width);
      continue;
    }
    Clause lits;
    if (!clause_literals(*c, conn, lits))
      throw Error(ErrorCode::NotNormalized, "bottom formula is not a clause of literals of the expected kind");
    std::set<std::size_t> vs;
    for (std::size_t l : lits) vs.insert(l / 2);
    if (vs.size() != lits.size()) throw Error(ErrorCode::NotNormalized, "a variable occurs twice in one clause");
    if (width && *width != lits.size()) throw Error(ErrorCode::NotNormalized, "clauses of different widths");
    width = lits.size();
  }
}

}  // namespace

NormalShape normalized_shape(const PropFormula& f) {
  PropClass c = classify_prop(f);
  std::size_t t = level_of(c);
  PropKind conn = t % 2 == 1 ? PropKind::Or : PropKind::And;
  std::optional<std::size_t> width;
  check_shape(*f.root(), t, conn, width);
  return NormalShape{t, width.value_or(1)};
}

PropFormula clique_to_wsat(const Graph& g) {
  std::vector<std::string> vars;
  for (std::size_t v = 0; v < g.n(); ++v) vars.push_back("X" + std::to_string(v));
  std::vector<PropPtr> cs;
  for (Element a = 0; a < g.n(); ++a)
    for (Element b = a + 1; b < g.n(); ++b)
      if (!g.adjacent(a, b)) cs.push_back(p_or(p_not(p_var(a)), p_not(p_var(b))));
  return PropFormula(vars, p_bigand(std::move(cs)));
}

// ---------------------------------------------------------------- structure C

namespace {

struct CBuilder {
  std::size_t t;
  PropKind conn;
  std::vector<std::string> labels;
  std::vector<Tuple> e, p, n, tt;

  Element add_node(const std::string& label) {
    labels.push_back(label);
    return static_cast<Element>(labels.size() - 1);
  }
  void edge(Element a, Element b) {
    e.push_back({a, b});
    e.push_back({b, a});
  }
  void visit(const PropNode& node, std::size_t level, std::optional<Element> parent, const std::string& path) {
    Element me = add_node(path);
    if (level == 1) tt.push_back({me});
    if (parent) edge(*parent, me);
    if (level == t) {
      Clause lits;
      clause_literals(node, conn, lits);
      for (std::size_t l : lits) {
        Element leaf = static_cast<Element>(l / 2);
        edge(me, leaf);
        (l % 2 ? n : p).push_back({me, leaf});
      }
      return;
    }
    for (std::size_t i = 0; i < node.children.size(); ++i)
      visit(*node.children[i], level + 1, me, path + "." + std::to_string(i + 1));
  }
};

Formula literal_check(const std::string& c, const std::string& y, const std::string& x) {
  return disj({conj({atom("P", {c, y}), atom(x, {y})}), conj({atom("N", {c, y}), neg(atom(x, {y}))})});
}

}  // namespace

WsatFaginInstance wsat_to_fagin(const PropFormula& normalized) {
  NormalShape shape = normalized_shape(normalized);
  std::size_t t = shape.t, d = shape.width;
  std::size_t nv = normalized.variables().size();

  CBuilder b{t, t % 2 == 1 ? PropKind::Or : PropKind::And, {}, {}, {}, {}, {}};
  for (const auto& v : normalized.variables()) b.add_node(v);
  const auto& top = normalized.root()->children;
  for (std::size_t i = 0; i < top.size(); ++i) b.visit(*top[i], 1, std::nullopt, "node" + std::to_string(i + 1));
  if (b.labels.empty()) b.add_node("pad");

  std::vector<Tuple> l;
  for (std::size_t v = 0; v < nv; ++v) l.push_back({static_cast<Element>(v)});
  Vocabulary vocab({{"E", 2}, {"P", 2}, {"N", 2}, {"T", 1}, {"L", 1}});
  std::size_t size = b.labels.size();
  Structure c(vocab, size, {b.e, b.p, b.n, b.tt, l}, b.labels);

  const std::string X = "X";
  auto xv = [](std::size_t j) { return "x" + std::to_string(j); };
  std::vector<std::string> ys;
  for (std::size_t i = 1; i <= d; ++i) ys.push_back("y" + std::to_string(i));

  // bottom check on the clause node x_t
  Formula bottom;
  {
    std::string ct = xv(t);
    std::vector<Formula> guard;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) guard.push_back(neq(ys[i], ys[j]));
    if (t % 2 == 1) {
      for (const auto& y : ys) {
        guard.push_back(atom("E", {ct, y}));
        if (t >= 2) guard.push_back(atom("L", {y}));
      }
      std::vector<Formula> lits;
      for (const auto& y : ys) lits.push_back(literal_check(ct, y, X));
      bottom = forall(ys, implies(conj(guard), disj(lits)));
    } else {
      for (const auto& y : ys) {
        guard.push_back(atom("E", {ct, y}));
        guard.push_back(atom("L", {y}));
        guard.push_back(literal_check(ct, y, X));
      }
      bottom = exists(ys, conj(guard));
    }
  }
  // descend from x_j to x_{j+1}: level j nodes are big disjunctions for odd j
  Formula body = bottom;
  for (std::size_t j = t - 1; j >= 1; --j) {
    std::vector<Formula> step{atom("E", {xv(j), xv(j + 1)})};
    if (j >= 2) step.push_back(neq(xv(j + 1), xv(j - 1)));
    if (j % 2 == 1)
      body = exists(xv(j + 1), conj({conj(step), body}));
    else
      body = forall(xv(j + 1), implies(conj(step), body));
  }
  Formula top_level = forall(xv(1), implies(atom("T", {xv(1)}), body));
  Formula only_leaves = forall("x", implies(atom(X, {"x"}), atom("L", {"x"})));
  std::vector<Element> var_element(nv);
  for (std::size_t v = 0; v < nv; ++v) var_element[v] = static_cast<Element>(v);
  return WsatFaginInstance{c, conj({only_leaves, top_level}), SetVar{X, 1}, var_element};
}

}  // namespace fptmc
