#include "fptmc/structure_io.hpp"

#include <fstream>
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

std::size_t parse_count(const std::string& word, std::size_t lineno) {
  if (word.empty() || word.find_first_not_of("0123456789") != std::string::npos)
    throw Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno) + ": expected a number, got '" + word + "'");
  try {
    return std::stoull(word);
  } catch (const std::exception&) {
    throw Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno) + ": number out of range");
  }
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

Structure parse_structure(const std::string& text, const StructureReadOptions& opts) {
  std::istringstream in(text);
  std::string line;
  std::vector<Symbol> symbols;
  std::vector<std::vector<Tuple>> rels;
  std::optional<std::size_t> n;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto w = split_words(line);
    if (w.empty()) continue;
    if (w[0] == "vocab") {
      if (w.size() != 3) throw Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno) + ": vocab <name> <arity>");
      if (n) throw Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno) + ": vocab after universe");
      symbols.push_back({w[1], parse_count(w[2], lineno)});
      rels.emplace_back();
      continue;
    }
    if (w[0] == "universe") {
      if (w.size() != 2 || n) throw Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno) + ": universe <n> (once)");
      n = parse_count(w[1], lineno);
      continue;
    }
    if (!n) throw Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno) + ": tuple before universe");
    std::size_t idx = symbols.size();
    for (std::size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i].name == w[0]) idx = i;
    if (idx == symbols.size())
      throw Error(ErrorCode::UnknownRelation, "line " + std::to_string(lineno) + ": undeclared relation " + w[0]);
    Tuple t;
    for (std::size_t i = 1; i < w.size(); ++i) {
      auto v = parse_count(w[i], lineno);
      if (v >= *n) throw Error(ErrorCode::ElementOutOfRange, "line " + std::to_string(lineno) + ": element " + w[i]);
      t.push_back(static_cast<Element>(v));
    }
    if (t.size() != symbols[idx].arity)
      throw Error(ErrorCode::ArityMismatch, "line " + std::to_string(lineno) + ": " + w[0] + " expects " +
                                                std::to_string(symbols[idx].arity) + " elements");
    if (opts.symmetrize && t.size() == 2) rels[idx].push_back({t[1], t[0]});
    rels[idx].push_back(std::move(t));
  }
  if (!n) throw Error(ErrorCode::SyntaxError, "missing universe line");
  return Structure(Vocabulary(std::move(symbols)), *n, std::move(rels));
}

std::string write_structure(const Structure& s) {
  std::ostringstream out;
  for (const auto& sym : s.vocab().symbols()) out << "vocab " << sym.name << ' ' << sym.arity << '\n';
  out << "universe " << s.n() << '\n';
  if (!s.provenance().empty()) {
    for (Element e = 0; e < s.n(); ++e) out << "# " << e << " = " << s.provenance()[e] << '\n';
  }
  for (std::size_t i = 0; i < s.vocab().size(); ++i)
    for (const auto& t : s.relation(i)) {
      out << s.vocab()[i].name;
      for (Element e : t) out << ' ' << e;
      out << '\n';
    }
  return out.str();
}

std::string graph_to_dot(const Graph& g, const std::string& name) {
  std::ostringstream out;
  out << "graph " << name << " {\n";
  for (Element v = 0; v < g.n(); ++v)
    out << "  " << v << " [label=\"" << dot_escape(g.structure().label(v)) << "\"];\n";
  for (auto [u, v] : g.edges()) out << "  " << u << " -- " << v << ";\n";
  out << "}\n";
  return out.str();
}

std::string structure_to_dot(const Structure& s, const std::string& name) {
  std::ostringstream out;
  out << "digraph " << name << " {\n";
  for (Element v = 0; v < s.n(); ++v) {
    std::string label = s.label(v);
    for (std::size_t i = 0; i < s.vocab().size(); ++i)
      if (s.vocab()[i].arity == 1 && s.contains(i, Tuple{v})) label += " " + s.vocab()[i].name;
    out << "  " << v << " [label=\"" << dot_escape(label) << "\"];\n";
  }
  for (std::size_t i = 0; i < s.vocab().size(); ++i) {
    if (s.vocab()[i].arity < 2) continue;
    for (const auto& t : s.relation(i))
      for (std::size_t j = 0; j + 1 < t.size(); ++j)
        out << "  " << t[j] << " -> " << t[j + 1] << " [label=\"" << s.vocab()[i].name << ' ' << j + 1 << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  out << text;
}

}  // namespace fptmc
