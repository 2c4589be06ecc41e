#include "drivebound/stl/parse.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "drivebound/common/error.hpp"
#include "drivebound/stl/trace.hpp"

namespace drivebound::stl {

namespace {

enum class Tok {
  Ident,
  Number,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Semi,
  Minus,
  Lt,
  Le,
  Gt,
  Ge,
  EqEq,
  Arrow,  // =>
  End,
};

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { tokenize(); }
  const std::vector<Token>& tokens() const { return tokens_; }

 private:
  void tokenize() {
    std::size_t i = 0;
    int line = 1, col = 1;
    auto advance = [&](std::size_t n) {
      for (std::size_t k = 0; k < n; ++k) {
        if (src_[i + k] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      i += n;
    };
    while (i < src_.size()) {
      char c = src_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        continue;
      }
      Token tok;
      tok.line = line;
      tok.col = col;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_')) {
          ++j;
        }
        tok.kind = Tok::Ident;
        tok.text = std::string(src_.substr(i, j - i));
        advance(j - i);
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        std::size_t j = i;
        while (j < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[j])) ||
                                   src_[j] == '.' || src_[j] == 'e' || src_[j] == 'E' ||
                                   ((src_[j] == '+' || src_[j] == '-') && j > i &&
                                    (src_[j - 1] == 'e' || src_[j - 1] == 'E')))) {
          ++j;
        }
        std::string text(src_.substr(i, j - i));
        double v = 0.0;
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || p != text.data() + text.size()) {
          throw ParseError("malformed number '" + text + "'", line, col);
        }
        tok.kind = Tok::Number;
        tok.text = std::move(text);
        tok.number = v;
        advance(j - i);
      } else {
        switch (c) {
          case '(': tok.kind = Tok::LParen; advance(1); break;
          case ')': tok.kind = Tok::RParen; advance(1); break;
          case '[': tok.kind = Tok::LBracket; advance(1); break;
          case ']': tok.kind = Tok::RBracket; advance(1); break;
          case ',': tok.kind = Tok::Comma; advance(1); break;
          case ';': tok.kind = Tok::Semi; advance(1); break;
          case '-': tok.kind = Tok::Minus; advance(1); break;
          case '<':
            if (i + 1 < src_.size() && src_[i + 1] == '=') {
              tok.kind = Tok::Le;
              advance(2);
            } else {
              tok.kind = Tok::Lt;
              advance(1);
            }
            break;
          case '>':
            if (i + 1 < src_.size() && src_[i + 1] == '=') {
              tok.kind = Tok::Ge;
              advance(2);
            } else {
              tok.kind = Tok::Gt;
              advance(1);
            }
            break;
          case '=':
            if (i + 1 < src_.size() && src_[i + 1] == '=') {
              tok.kind = Tok::EqEq;
              advance(2);
            } else if (i + 1 < src_.size() && src_[i + 1] == '>') {
              tok.kind = Tok::Arrow;
              advance(2);
            } else {
              throw ParseError("stray '=' (use '==' or '=>')", line, col);
            }
            break;
          default:
            throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        }
      }
      tokens_.push_back(std::move(tok));
    }
    Token end;
    end.kind = Tok::End;
    end.line = line;
    end.col = col;
    tokens_.push_back(std::move(end));
  }

  std::string_view src_;
  std::vector<Token> tokens_;
};

bool is_label_name(const std::string& s) { return s == "G" || s == "Y" || s == "R"; }

bool is_keyword(const std::string& s) {
  return s == "param" || s == "not" || s == "and" || s == "or" || s == "true" || s == "inf" ||
         s == "alw_" || s == "ev_" || s == "until_";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src), toks_(lexer_.tokens()) {}

  Formula run() {
    parse_param_decl();
    Formula f = parse_implication();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ParseError(msg, at.line, at.col);
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what, peek());
    return next();
  }

  void parse_param_decl() {
    if (peek().kind != Tok::Ident || peek().text != "param") return;
    next();
    while (true) {
      const Token& t = expect(Tok::Ident, "parameter name");
      if (is_signal_name(t.text)) fail("parameter name collides with signal '" + t.text + "'", t);
      if (is_label_name(t.text) || is_keyword(t.text)) {
        fail("reserved word '" + t.text + "' cannot be a parameter", t);
      }
      params_.insert(t.text);
      if (peek().kind == Tok::Comma) {
        next();
        continue;
      }
      break;
    }
    expect(Tok::Semi, "';' after parameter declaration");
  }

  Formula parse_implication() {
    Formula lhs = parse_disjunction();
    if (peek().kind == Tok::Arrow) {
      next();
      return Formula::implies(std::move(lhs), parse_implication());
    }
    return lhs;
  }

  Formula parse_disjunction() {
    Formula f = parse_conjunction();
    while (peek().kind == Tok::Ident && peek().text == "or") {
      next();
      f = Formula::disj(std::move(f), parse_conjunction());
    }
    return f;
  }

  Formula parse_conjunction() {
    Formula f = parse_until();
    while (peek().kind == Tok::Ident && peek().text == "and") {
      next();
      f = Formula::conj(std::move(f), parse_until());
    }
    return f;
  }

  Formula parse_until() {
    Formula f = parse_unary();
    if (peek().kind == Tok::Ident && peek().text == "until_") {
      next();
      auto [lo, hi] = parse_interval();
      Formula rhs = parse_unary();
      return Formula::until(lo, hi, std::move(f), std::move(rhs));
    }
    return f;
  }

  Formula parse_unary() {
    if (peek().kind == Tok::Ident) {
      const std::string& name = peek().text;
      if (name == "not") {
        next();
        return Formula::negation(parse_unary());
      }
      if (name == "alw_") {
        next();
        auto [lo, hi] = parse_interval();
        return Formula::always(lo, hi, parse_unary());
      }
      if (name == "ev_") {
        next();
        auto [lo, hi] = parse_interval();
        return Formula::eventually(lo, hi, parse_unary());
      }
    }
    return parse_atom();
  }

  Formula parse_atom() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      next();
      Formula f = parse_implication();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "true") {
        next();
        return Formula::truth();
      }
      if (is_signal_name(t.text)) return parse_predicate();
      fail("unknown signal name '" + t.text + "'", t);
    }
    fail("expected formula", t);
  }

  Formula parse_predicate() {
    const Token& sig = next();
    Cmp cmp;
    const Token& op = peek();
    switch (op.kind) {
      case Tok::Lt: cmp = Cmp::Lt; break;
      case Tok::Le: cmp = Cmp::Le; break;
      case Tok::Gt: cmp = Cmp::Gt; break;
      case Tok::Ge: cmp = Cmp::Ge; break;
      case Tok::EqEq: cmp = Cmp::Eq; break;
      default: fail("expected comparator after signal '" + sig.text + "'", op);
    }
    next();
    Rhs rhs = parse_rhs();

    if (sig.text == "s_TL") {
      if (!rhs.is_label()) fail("signal s_TL must be compared to a label G|Y|R", op);
      if (cmp != Cmp::Eq) fail("label comparison requires '=='", op);
    } else if (rhs.is_label()) {
      fail("label literal is only valid with signal s_TL", op);
    }
    return Formula::pred(sig.text, cmp, std::move(rhs));
  }

  Rhs parse_rhs() {
    const Token& t = peek();
    if (t.kind == Tok::Minus) {
      next();
      const Token& num = expect(Tok::Number, "number after '-'");
      return Rhs::number(-num.number);
    }
    if (t.kind == Tok::Number) {
      next();
      return Rhs::number(t.number);
    }
    if (t.kind == Tok::Ident) {
      if (is_label_name(t.text)) {
        next();
        return Rhs::label(*light_from_code(t.text[0]));
      }
      if (params_.count(t.text)) {
        next();
        return Rhs::parameter(t.text);
      }
      if (is_signal_name(t.text)) {
        fail("signal '" + t.text + "' cannot appear on the right-hand side", t);
      }
      fail("unknown identifier '" + t.text + "' (declare parameters with 'param " + t.text +
               ";')",
           t);
    }
    fail("expected number, parameter, or label", t);
  }

  std::pair<double, double> parse_interval() {
    const Token& open = expect(Tok::LBracket, "'[' of interval");
    double lo = parse_interval_bound(false);
    expect(Tok::Comma, "',' in interval");
    double hi = parse_interval_bound(true);
    expect(Tok::RBracket, "']' of interval");
    if (lo < 0.0 || hi < 0.0) fail("negative interval bound", open);
    if (lo > hi) fail("inverted interval", open);
    return {lo, hi};
  }

  double parse_interval_bound(bool allow_inf) {
    const Token& t = peek();
    if (t.kind == Tok::Minus) {
      next();
      const Token& num = expect(Tok::Number, "number");
      (void)num;
      fail("negative interval bound", t);
    }
    if (t.kind == Tok::Ident && t.text == "inf") {
      if (!allow_inf) fail("interval lower bound must be finite", t);
      next();
      return std::numeric_limits<double>::infinity();
    }
    const Token& num = expect(Tok::Number, "interval bound");
    return num.number;
  }

  Lexer lexer_;
  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  std::set<std::string> params_;
};

}  // namespace

Formula parse(std::string_view text) { return Parser(text).run(); }

}  // namespace drivebound::stl
