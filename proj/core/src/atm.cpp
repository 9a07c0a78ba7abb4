#include "fptmc/atm.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "fptmc/error.hpp"

namespace fptmc {

namespace {

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> w;
  std::string s;
  while (in >> s) w.push_back(s);
  return w;
}

[[noreturn]] void syntax(std::size_t lineno, const std::string& msg) {
  throw Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno) + ": " + msg);
}

std::size_t index_of(const std::vector<std::string>& names, const std::string& s, std::size_t lineno,
                     const char* what) {
  auto it = std::find(names.begin(), names.end(), s);
  if (it == names.end()) syntax(lineno, std::string("unknown ") + what + " '" + s + "'");
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

ATMachine parse_atm(const std::string& text) {
  ATMachine m;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> initial, accepting, blank;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto w = split_words(line);
    if (w.empty()) continue;
    if (w[0] == "state") {
      if (w.size() < 2) syntax(lineno, "state <name> [exists|forall] [initial] [accepting]");
      if (std::find(m.states.begin(), m.states.end(), w[1]) != m.states.end()) syntax(lineno, "duplicate state " + w[1]);
      bool uni = false;
      for (std::size_t i = 2; i < w.size(); ++i) {
        if (w[i] == "exists") uni = false;
        else if (w[i] == "forall") uni = true;
        else if (w[i] == "initial") {
          if (initial) syntax(lineno, "second initial state");
          initial = m.states.size();
        } else if (w[i] == "accepting") {
          if (accepting) syntax(lineno, "second accepting state");
          accepting = m.states.size();
        } else {
          syntax(lineno, "unknown state flag '" + w[i] + "'");
        }
      }
      m.states.push_back(w[1]);
      m.universal.push_back(uni);
    } else if (w[0] == "symbol") {
      if (w.size() < 2 || w.size() > 3 || (w.size() == 3 && w[2] != "blank")) syntax(lineno, "symbol <s> [blank]");
      if (std::find(m.symbols.begin(), m.symbols.end(), w[1]) != m.symbols.end()) syntax(lineno, "duplicate symbol " + w[1]);
      if (w.size() == 3) {
        if (blank) syntax(lineno, "second blank symbol");
        blank = m.symbols.size();
      }
      m.symbols.push_back(w[1]);
    } else if (w[0] == "trans") {
      if (w.size() != 6) syntax(lineno, "trans <q> <a> <move> <b> <q'>");
      AtmTransition t;
      t.from = index_of(m.states, w[1], lineno, "state");
      t.read = index_of(m.symbols, w[2], lineno, "symbol");
      if (w[3] == "-1") t.move = -1;
      else if (w[3] == "0") t.move = 0;
      else if (w[3] == "1" || w[3] == "+1") t.move = 1;
      else syntax(lineno, "move must be -1, 0 or 1");
      t.write = index_of(m.symbols, w[4], lineno, "symbol");
      t.to = index_of(m.states, w[5], lineno, "state");
      m.delta.push_back(t);
    } else {
      syntax(lineno, "unknown directive '" + w[0] + "'");
    }
  }
  if (!initial) throw Error(ErrorCode::InvalidMachine, "no initial state");
  if (!accepting) throw Error(ErrorCode::InvalidMachine, "no accepting state");
  if (!blank) throw Error(ErrorCode::InvalidMachine, "no blank symbol");
  m.initial = *initial;
  m.accepting = *accepting;
  m.blank = *blank;
  validate_atm(m);
  return m;
}

std::string write_atm(const ATMachine& m) {
  std::string out;
  for (std::size_t q = 0; q < m.states.size(); ++q) {
    out += "state " + m.states[q] + (m.universal[q] ? " forall" : " exists");
    if (q == m.initial) out += " initial";
    if (q == m.accepting) out += " accepting";
    out += "\n";
  }
  for (std::size_t a = 0; a < m.symbols.size(); ++a)
    out += "symbol " + m.symbols[a] + (a == m.blank ? " blank\n" : "\n");
  for (const auto& t : m.delta)
    out += "trans " + m.states[t.from] + " " + m.symbols[t.read] + " " + std::to_string(t.move) + " " +
           m.symbols[t.write] + " " + m.states[t.to] + "\n";
  return out;
}

void validate_atm(const ATMachine& m) {
  const std::size_t nq = m.states.size(), ns = m.symbols.size();
  if (m.universal.size() != nq) throw Error(ErrorCode::InvalidMachine, "state kinds do not match the states");
  if (m.initial >= nq || m.accepting >= nq) throw Error(ErrorCode::InvalidMachine, "initial or accepting state missing");
  if (m.blank >= ns) throw Error(ErrorCode::InvalidMachine, "blank symbol missing");
  if (m.universal[m.initial] && m.initial != m.accepting)
    throw Error(ErrorCode::InvalidMachine, "initial state must be existential");
  for (const auto& t : m.delta) {
    if (t.from >= nq || t.to >= nq || t.read >= ns || t.write >= ns || t.move < -1 || t.move > 1)
      throw Error(ErrorCode::InvalidMachine, "transition out of range");
    if (t.from == m.accepting) throw Error(ErrorCode::InvalidMachine, "accepting state has an outgoing transition");
  }
}

bool simulate_atm(const ATMachine& m, std::size_t steps, std::size_t t, AtmRunStats* stats) {
  validate_atm(m);
  const std::size_t window = steps + 1;
  struct Key {
    std::size_t state, head, left, block;
    std::vector<std::size_t> tape;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, bool> memo;
  AtmRunStats st;
  std::function<bool(const Key&)> run = [&](const Key& c) -> bool {
    if (c.state == m.accepting) return true;
    std::size_t block = c.block;
    bool uni = m.universal[c.state];
    if (uni != (block % 2 == 0)) ++block;
    if (block > t || c.left == 0) return false;
    Key key = c;
    key.block = block;
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    ++st.configurations;
    bool any = false, all = true, applicable = false;
    for (const auto& tr : m.delta) {
      if (tr.from != c.state || tr.read != c.tape[c.head]) continue;
      applicable = true;
      if ((tr.move < 0 && c.head == 0) || (tr.move > 0 && c.head + 1 >= window)) continue;
      Key next = key;
      next.tape[c.head] = tr.write;
      next.head = static_cast<std::size_t>(static_cast<long>(c.head) + tr.move);
      next.state = tr.to;
      next.left = c.left - 1;
      bool r = run(next);
      any = any || r;
      all = all && r;
      if (uni ? !all : any) break;
    }
    if (uni && !applicable)
      throw Error(ErrorCode::InvalidMachine, "universal state " + m.states[c.state] + " has no applicable transition");
    bool r = uni ? all : any;
    memo.emplace(std::move(key), r);
    return r;
  };
  Key start{m.initial, 0, steps, 1, std::vector<std::size_t>(window, m.blank)};
  bool r = run(start);
  if (stats) *stats = st;
  return r;
}

std::string atm_state_var(std::size_t i) { return "x" + std::to_string(i); }
std::string atm_cell_var(std::size_t i, std::size_t j) { return "y" + std::to_string(i) + "_" + std::to_string(j); }

Formula atm_config(std::size_t i, std::size_t k) {
  std::vector<Formula> heads;
  for (std::size_t h = 1; h <= k; ++h) {
    std::vector<Formula> cs{atom("H", {atm_cell_var(i, h)})};
    for (std::size_t j = 1; j <= k; ++j)
      if (j != h) cs.push_back(atom("AL", {atm_cell_var(i, j)}));
    heads.push_back(conj(std::move(cs)));
  }
  return conj({atom("ST", {atm_state_var(i)}), disj(std::move(heads))});
}

Formula atm_start(std::size_t i, std::size_t k) {
  std::vector<Formula> cs{atom("IN", {atm_state_var(i)}), atom("BH", {atm_cell_var(i, 1)})};
  for (std::size_t j = 2; j <= k; ++j) cs.push_back(atom("BL", {atm_cell_var(i, j)}));
  cs.push_back(atm_config(i, k));
  return conj(std::move(cs));
}

Formula atm_step(std::size_t i, std::size_t j, std::size_t k) {
  auto y = [&](std::size_t c) { return atm_cell_var(i, c); };
  auto z = [&](std::size_t c) { return atm_cell_var(j, c); };
  const std::string x = atm_state_var(i), xn = atm_state_var(j);
  auto same = [&](std::size_t c) { return equal(z(c), y(c)); };
  std::vector<Formula> cases;
  for (std::size_t h = 1; h <= k; ++h) {
    std::vector<Formula> frame;
    for (std::size_t c = 1; c <= k; ++c)
      if (c + 1 < h || c > h + 1) frame.push_back(same(c));
    std::vector<Formula> moves;
    {
      std::vector<Formula> s{atom("S", {x, y(h), z(h), xn})};
      if (h > 1) s.push_back(same(h - 1));
      if (h < k) s.push_back(same(h + 1));
      moves.push_back(conj(std::move(s)));
    }
    if (h < k) {
      std::vector<Formula> r{atom("R", {x, y(h), z(h), xn}), atom("HC", {y(h + 1), z(h + 1)})};
      if (h > 1) r.push_back(same(h - 1));
      moves.push_back(conj(std::move(r)));
    }
    if (h > 1) {
      std::vector<Formula> l{atom("L", {x, y(h), z(h), xn}), atom("HC", {y(h - 1), z(h - 1)})};
      if (h < k) l.push_back(same(h + 1));
      moves.push_back(conj(std::move(l)));
    }
    frame.insert(frame.begin(), atom("H", {y(h)}));
    frame.push_back(disj(std::move(moves)));
    cases.push_back(conj(std::move(frame)));
  }
  return disj(std::move(cases));
}

namespace {

std::vector<std::string> config_vars(std::size_t i, std::size_t k) {
  std::vector<std::string> vs{atm_state_var(i)};
  for (std::size_t j = 1; j <= k; ++j) vs.push_back(atm_cell_var(i, j));
  return vs;
}

std::vector<std::string> config_range(std::size_t from, std::size_t to, std::size_t k) {
  std::vector<std::string> vs;
  for (std::size_t i = from; i <= to; ++i) {
    auto c = config_vars(i, k);
    vs.insert(vs.end(), c.begin(), c.end());
  }
  return vs;
}

}  // namespace

Formula atm_sentence(std::size_t k, std::size_t t) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "at least one configuration block is needed");
  if (t == 0 || t > 2) throw Error(ErrorCode::UnsupportedAlternation, "only t = 1 and t = 2 are encoded");
  if (t == 1) {
    std::vector<Formula> cs{atm_start(1, k)};
    for (std::size_t i = 1; i < k; ++i) cs.push_back(atm_step(i, i + 1, k));
    cs.push_back(atom("ACC", {atm_state_var(k)}));
    return exists(config_range(1, k, k), conj(std::move(cs)));
  }
  std::vector<Formula> alternatives;
  for (std::size_t l = 1; l <= k; ++l) {
    std::vector<Formula> cs{atm_start(1, k)};
    for (std::size_t i = 1; i < l; ++i) cs.push_back(atm_step(i, i + 1, k));
    for (std::size_t i = 1; i < l; ++i) cs.push_back(atom("F", {atm_state_var(i)}));
    cs.push_back(atom("U", {atm_state_var(l)}));
    std::vector<Formula> path;
    for (std::size_t i = l + 1; i < k; ++i) path.push_back(atom("U", {atm_state_var(i)}));
    for (std::size_t i = l; i < k; ++i) path.push_back(atm_step(i, i + 1, k));
    Formula acc = atom("ACC", {atm_state_var(k)});
    cs.push_back(l == k ? acc : forall(config_range(l + 1, k, k), implies(conj(std::move(path)), acc)));
    alternatives.push_back(exists(config_range(1, l, k), conj(std::move(cs))));
  }
  return disj(std::move(alternatives));
}

Structure atm_structure(const ATMachine& m, std::size_t t) {
  validate_atm(m);
  if (t == 0 || t > 2) throw Error(ErrorCode::UnsupportedAlternation, "only t = 1 and t = 2 are encoded");
  for (std::size_t q = 0; q < m.states.size(); ++q) {
    if (q == m.accepting || !m.universal[q]) continue;
    if (t == 1) throw Error(ErrorCode::UnsupportedAlternation, "t = 1 needs a machine without universal states");
  }
  if (t == 2)
    for (const auto& tr : m.delta)
      if (m.universal[tr.from] && tr.to != m.accepting && !m.universal[tr.to])
        throw Error(ErrorCode::UnsupportedAlternation, "a universal state leads back to an existential one");

  const std::size_t nq = m.states.size(), ns = m.symbols.size();
  auto sym = [&](std::size_t a) { return static_cast<Element>(nq + a); };
  auto head = [&](std::size_t a) { return static_cast<Element>(nq + ns + a); };
  std::vector<std::string> labels = m.states;
  for (const auto& s : m.symbols) labels.push_back(s);
  for (const auto& s : m.symbols) labels.push_back(s + "^H");

  std::vector<Symbol> vocab{{"ST", 1}, {"AL", 1}, {"H", 1}, {"IN", 1}, {"ACC", 1}, {"R", 4},
                            {"L", 4},  {"S", 4},  {"HC", 2}, {"BL", 1}, {"BH", 1}};
  if (t == 2) {
    vocab.push_back({"F", 1});
    vocab.push_back({"U", 1});
  }
  std::vector<std::vector<Tuple>> rels(vocab.size());
  for (std::size_t q = 0; q < nq; ++q) rels[0].push_back({static_cast<Element>(q)});
  for (std::size_t a = 0; a < ns; ++a) {
    rels[1].push_back({sym(a)});
    rels[2].push_back({head(a)});
    rels[8].push_back({sym(a), head(a)});
  }
  rels[3].push_back({static_cast<Element>(m.initial)});
  rels[4].push_back({static_cast<Element>(m.accepting)});
  for (const auto& tr : m.delta) {
    auto q = static_cast<Element>(tr.from), q2 = static_cast<Element>(tr.to);
    if (tr.move > 0) rels[5].push_back({q, head(tr.read), sym(tr.write), q2});
    if (tr.move < 0) rels[6].push_back({q, head(tr.read), sym(tr.write), q2});
    if (tr.move == 0) rels[7].push_back({q, head(tr.read), head(tr.write), q2});
  }
  auto acc = static_cast<Element>(m.accepting);
  for (std::size_t a = 0; a < ns; ++a) rels[7].push_back({acc, head(a), head(a), acc});
  rels[9].push_back({sym(m.blank)});
  rels[10].push_back({head(m.blank)});
  if (t == 2)
    for (std::size_t q = 0; q < nq; ++q) {
      if (q == m.accepting || !m.universal[q]) rels[11].push_back({static_cast<Element>(q)});
      if (q == m.accepting || m.universal[q]) rels[12].push_back({static_cast<Element>(q)});
    }
  return Structure(Vocabulary(vocab), nq + 2 * ns, std::move(rels), std::move(labels));
}

AtmEncoding atm_encode(const ATMachine& m, std::size_t k, std::size_t t) {
  Structure s = atm_structure(m, t);
  return {std::move(s), atm_sentence(k, t)};
}

}  // namespace fptmc
