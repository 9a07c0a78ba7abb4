#include "fptmc/parser.hpp"

#include <cctype>
#include <sstream>

#include "fptmc/error.hpp"

namespace fptmc {

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Dot, And, Or, Not, Eq, Neq, Implies, Iff, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip();
      if (i_ >= s_.size()) {
        out.push_back({Tok::End, "", i_});
        return out;
      }
      std::size_t start = i_;
      char c = s_[i_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        out.push_back({Tok::Ident, s_.substr(start, i_ - start), start});
        continue;
      }
      auto two = s_.substr(i_, 2);
      auto three = s_.substr(i_, 3);
      if (three == "<->") {
        i_ += 3;
        out.push_back({Tok::Iff, three, start});
      } else if (two == "->") {
        i_ += 2;
        out.push_back({Tok::Implies, two, start});
      } else if (two == "!=") {
        i_ += 2;
        out.push_back({Tok::Neq, two, start});
      } else {
        Tok k;
        switch (c) {
          case '(': k = Tok::LParen; break;
          case ')': k = Tok::RParen; break;
          case ',': k = Tok::Comma; break;
          case '.': k = Tok::Dot; break;
          case '&': k = Tok::And; break;
          case '|': k = Tok::Or; break;
          case '!': k = Tok::Not; break;
          case '=': k = Tok::Eq; break;
          default: throw Error(ErrorCode::SyntaxError, "unexpected character '" + std::string(1, c) + "' at " + where(start));
        }
        ++i_;
        out.push_back({k, std::string(1, c), start});
      }
    }
  }

  std::string where(std::size_t pos) const {
    std::size_t line = 1, col = 1;
    for (std::size_t j = 0; j < pos && j < s_.size(); ++j) {
      if (s_[j] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
  }

 private:
  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

bool is_keyword(const std::string& s) { return s == "EX" || s == "ALL" || s == "TRUE" || s == "FALSE"; }

class Parser {
 public:
  Parser(const std::string& text, const std::optional<Vocabulary>& vocab, const std::optional<SetVar>& setvar)
      : lex_(text), toks_(lex_.run()), vocab_(vocab), setvar_(setvar) {}

  Formula run() {
    Formula f = formula();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[p_]; }
  Token next() { return toks_[p_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++p_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::SyntaxError, msg + " at " + lex_.where(peek().pos));
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) fail(std::string("expected ") + what);
  }
  std::string variable() {
    if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail("expected a variable");
    return next().text;
  }

  Formula formula() {
    Formula left = implication();
    if (accept(Tok::Iff)) return iff(left, formula());
    return left;
  }

  Formula implication() {
    Formula left = disjunction();
    if (accept(Tok::Implies)) return implies(left, implication());
    return left;
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (accept(Tok::Or)) parts.push_back(conjunction());
    return parts.size() == 1 ? parts[0] : disj(std::move(parts));
  }

  Formula conjunction() {
    std::vector<Formula> parts{unary()};
    while (accept(Tok::And)) parts.push_back(unary());
    return parts.size() == 1 ? parts[0] : conj(std::move(parts));
  }

  Formula unary() {
    if (accept(Tok::Not)) return neg(unary());
    if (peek().kind == Tok::Ident && (peek().text == "EX" || peek().text == "ALL")) {
      bool ex = next().text == "EX";
      std::string v = variable();
      expect(Tok::Dot, "'.' after quantified variable");
      if (peek().kind == Tok::End) fail("missing quantifier body");
      Formula body = formula();
      return ex ? exists(v, body) : forall(v, body);
    }
    return primary();
  }

  Formula primary() {
    if (accept(Tok::LParen)) {
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (peek().kind != Tok::Ident) fail(peek().kind == Tok::End ? "unexpected end of input" : "unexpected '" + peek().text + "'");
    Token id = next();
    if (id.text == "TRUE") return f_true();
    if (id.text == "FALSE") return f_false();
    if (is_keyword(id.text)) fail("misplaced keyword " + id.text);
    if (accept(Tok::LParen)) {
      std::vector<std::string> args{variable()};
      while (accept(Tok::Comma)) args.push_back(variable());
      expect(Tok::RParen, "')' closing the atom");
      check_symbol(id, args.size());
      return atom(id.text, std::move(args));
    }
    if (accept(Tok::Eq)) return equal(id.text, variable());
    if (accept(Tok::Neq)) return neq(id.text, variable());
    --p_;
    fail("expected an atom");
  }

  void check_symbol(const Token& id, std::size_t arity) {
    if (setvar_ && setvar_->name == id.text) {
      if (setvar_->arity != arity)
        throw Error(ErrorCode::UnknownRelation, "set variable " + id.text + " used with arity " + std::to_string(arity));
      return;
    }
    if (!vocab_) return;
    auto i = vocab_->find(id.text);
    if (!i || (*vocab_)[*i].arity != arity)
      throw Error(ErrorCode::UnknownRelation, id.text + "/" + std::to_string(arity) + " at " + lex_.where(id.pos));
  }

  Lexer lex_;
  std::vector<Token> toks_;
  std::size_t p_ = 0;
  const std::optional<Vocabulary>& vocab_;
  const std::optional<SetVar>& setvar_;
};

}  // namespace

Formula parse_formula(const std::string& text, const std::optional<Vocabulary>& vocab,
                      const std::optional<SetVar>& setvar) {
  return Parser(text, vocab, setvar).run();
}

FormulaFile parse_formula_file(const std::string& text, const std::optional<Vocabulary>& vocab) {
  FormulaFile out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::string hash, kw, name;
    std::size_t arity = 0;
    if (words >> hash >> kw && hash == "#" && kw == "setvar") {
      if (!(words >> name >> arity) || !is_identifier(name) || arity == 0)
        throw Error(ErrorCode::SyntaxError, "malformed setvar header: " + line);
      out.setvar = SetVar{name, arity};
    }
  }
  out.formula = parse_formula(text, vocab, out.setvar);
  return out;
}

std::string write_formula_file(const Formula& f, const std::optional<SetVar>& setvar) {
  std::string out;
  if (setvar) out += "# setvar " + setvar->name + " " + std::to_string(setvar->arity) + "\n";
  out += to_string(f) + "\n";
  return out;
}

}  // namespace fptmc
