#include <cctype>
#include <charconv>
#include <string>
#include <vector>

#include "conformable/errors.hpp"
#include "conformable/expr.hpp"

namespace conformable {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected)
    : Error("syntax error at offset " + std::to_string(offset) + ": expected " + join(expected)),
      offset_(offset),
      expected_(std::move(expected)) {}

UnknownIdentifier::UnknownIdentifier(std::string name, std::size_t offset)
    : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
      name_(std::move(name)),
      offset_(offset) {}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind = Tok::End;
  std::size_t offset = 0;
  std::string_view text;
  double number = 0.0;
};

// Registration table for callable names. pow(x, y) lowers to the '^' node.
struct Callable {
  std::string_view name;
  int arity;
  std::optional<Function> fn;
};

constexpr Callable kCallables[] = {
    {"sin", 1, Function::Sin},   {"cos", 1, Function::Cos}, {"exp", 1, Function::Exp},
    {"ln", 1, Function::Ln},     {"abs", 1, Function::Abs}, {"sqrt", 1, Function::Sqrt},
    {"pow", 2, std::nullopt},
};

const Callable* find_callable(std::string_view name) {
  for (const auto& c : kCallables)
    if (c.name == name) return &c;
  return nullptr;
}

const std::vector<std::string> kOperand = {"number", "'t'", "function name", "'('", "'-'"};
const std::vector<std::string> kOperator = {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) { advance(); }

  Expr parse_all() {
    Expr e = expr();
    if (tok_.kind != Tok::End) throw SyntaxError(tok_.offset, kOperator);
    return e;
  }

 private:
  Expr expr() {
    Expr lhs = term();
    while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
      const bool plus = tok_.kind == Tok::Plus;
      advance();
      Expr rhs = term();
      lhs = plus ? lhs + rhs : lhs - rhs;
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
      const bool mul = tok_.kind == Tok::Star;
      advance();
      Expr rhs = unary();
      lhs = mul ? lhs * rhs : lhs / rhs;
    }
    return lhs;
  }

  Expr unary() {
    if (tok_.kind == Tok::Minus) {
      advance();
      return -unary();
    }
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (tok_.kind == Tok::Caret) {
      advance();
      return Expr::pow(std::move(base), unary());
    }
    return base;
  }

  Expr atom() {
    switch (tok_.kind) {
      case Tok::Number: {
        const double v = tok_.number;
        advance();
        return Expr::constant(v);
      }
      case Tok::LParen: {
        advance();
        Expr inner = expr();
        expect(Tok::RParen, {"')'"});
        return inner;
      }
      case Tok::Ident: return identifier();
      default: throw SyntaxError(tok_.offset, kOperand);
    }
  }

  Expr identifier() {
    const Token id = tok_;
    if (id.text == "t") {
      advance();
      return Expr::variable();
    }
    const Callable* c = find_callable(id.text);
    if (!c) throw UnknownIdentifier(std::string(id.text), id.offset);
    advance();
    expect(Tok::LParen, {"'('"});
    std::vector<Expr> args;
    args.push_back(expr());
    while (static_cast<int>(args.size()) < c->arity) {
      expect(Tok::Comma, {"','"});
      args.push_back(expr());
    }
    expect(Tok::RParen, {"')'"});
    if (c->fn) return Expr::call(*c->fn, std::move(args[0]));
    return Expr::pow(std::move(args[0]), std::move(args[1]));
  }

  void expect(Tok kind, std::vector<std::string> what) {
    if (tok_.kind != kind) throw SyntaxError(tok_.offset, std::move(what));
    advance();
  }

  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    tok_ = Token{};
    tok_.offset = pos_;
    if (pos_ >= src_.size()) {
      tok_.kind = Tok::End;
      return;
    }
    const char c = src_[pos_];
    auto single = [&](Tok k) {
      tok_.kind = k;
      tok_.text = src_.substr(pos_, 1);
      ++pos_;
    };
    switch (c) {
      case '+': return single(Tok::Plus);
      case '-': return single(Tok::Minus);
      case '*': return single(Tok::Star);
      case '/': return single(Tok::Slash);
      case '^': return single(Tok::Caret);
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case ',': return single(Tok::Comma);
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      tok_.kind = Tok::Ident;
      tok_.text = src_.substr(start, pos_ - start);
      return;
    }
    throw SyntaxError(pos_, kOperand);
  }

  void lex_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw SyntaxError(start, {"number"});
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }
    tok_.kind = Tok::Number;
    tok_.text = src_.substr(start, pos_ - start);
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    // from_chars rejects a leading '.', so feed it "0." + rest in that case.
    std::string padded;
    if (*first == '.') {
      padded = "0" + std::string(first, last);
      first = padded.data();
      last = padded.data() + padded.size();
    }
    auto [ptr, ec] = std::from_chars(first, last, tok_.number);
    if (ec != std::errc() || ptr != last) throw SyntaxError(start, {"number"});
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_;
};

}  // namespace

Expr parse(std::string_view source) { return Parser(source).parse_all(); }

}  // namespace conformable
