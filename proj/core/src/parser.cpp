#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "robust/syntax.hpp"

namespace robust {

namespace {

enum class Tok {
  Ident,
  Number,
  Colon,
  Semi,
  Comma,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Arrow,
  Plus,
  Minus,
  Star,
  Percent,
  Eq,
  Ne,
  Lt,
  Le,
  Bang,
  Eof,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::Colon: return "':'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Arrow: return "'<-'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Percent: return "'%'";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Bang: return "'!'";
    case Tok::Eof: return "end of input";
  }
  return "?";
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '~'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '~' || c == '.' || c == '\'';
}

constexpr std::string_view kKeywords[] = {"program", "domain", "const", "thread", "regs",
                                          "init",    "final",  "begin", "end",    "goto",
                                          "mem",     "assert", "scfence", "fence"};

bool is_keyword(std::string_view s) {
  return std::find(std::begin(kKeywords), std::end(kKeywords), s) != std::end(kKeywords);
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t{Tok::Eof, {}, line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = src_[pos_];
      if (ident_start(c)) {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
        t.kind = Tok::Ident;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
        t.kind = Tok::Number;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else if (src_.substr(pos_, 3) == "\xE2\x86\x90") {  // U+2190 leftwards arrow
        pos_ += 3;
        ++col_;
        t.kind = Tok::Arrow;
        t.text = "<-";
      } else {
        t.text = std::string(1, c);
        advance();
        const char n = pos_ < src_.size() ? src_[pos_] : '\0';
        switch (c) {
          case ':': t.kind = Tok::Colon; break;
          case ';': t.kind = Tok::Semi; break;
          case ',': t.kind = Tok::Comma; break;
          case '[': t.kind = Tok::LBracket; break;
          case ']': t.kind = Tok::RBracket; break;
          case '(': t.kind = Tok::LParen; break;
          case ')': t.kind = Tok::RParen; break;
          case '+': t.kind = Tok::Plus; break;
          case '-': t.kind = Tok::Minus; break;
          case '*': t.kind = Tok::Star; break;
          case '%': t.kind = Tok::Percent; break;
          case '=': t.kind = Tok::Eq; break;
          case '<':
            if (n == '-') {
              advance();
              t.kind = Tok::Arrow;
              t.text = "<-";
            } else if (n == '=') {
              advance();
              t.kind = Tok::Le;
              t.text = "<=";
            } else {
              t.kind = Tok::Lt;
            }
            break;
          case '!':
            if (n == '=') {
              advance();
              t.kind = Tok::Ne;
              t.text = "!=";
            } else {
              t.kind = Tok::Bang;
            }
            break;
          default:
            throw ParseError(t.line, t.column, {}, "unexpected character '" + t.text + "'");
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program() {
    Program p;
    keyword("program");
    p.name = ident("program name");
    keyword("domain");
    p.domain_size = number();
    while (at_keyword("const")) {
      next();
      Constant c;
      c.name = ident("constant name");
      expect(Tok::Eq);
      c.value = number();
      constants_[c.name] = c.value;
      p.constants.push_back(std::move(c));
    }
    while (at_keyword("thread")) p.threads.push_back(thread());
    if (peek().kind != Tok::Eof) fail({"'thread'", "end of input"});
    return p;
  }

  Expr lone_expr() {
    Expr e = expr();
    if (peek().kind != Tok::Eof) fail({"end of input"});
    return e;
  }

 private:
  Thread thread() {
    keyword("thread");
    Thread t;
    t.name = ident("thread name");
    keyword("regs");
    while (peek().kind == Tok::Ident && !is_keyword(peek().text)) t.registers.push_back(next().text);
    keyword("init");
    t.init_label = ident("label");
    if (at_keyword("final")) {
      next();
      std::vector<std::string> finals;
      while (peek().kind == Tok::Ident && !is_keyword(peek().text)) finals.push_back(next().text);
      t.final_labels = std::move(finals);
    }
    keyword("begin");
    while (!at_keyword("end")) {
      if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail({"label", "'end'"});
      t.instructions.push_back(labeled());
    }
    keyword("end");
    return t;
  }

  LabeledInstruction labeled() {
    LabeledInstruction li;
    li.label = ident("label");
    expect(Tok::Colon);
    li.instruction = instruction();
    expect(Tok::Semi);
    keyword("goto");
    li.next = ident("label");
    expect(Tok::Semi);
    return li;
  }

  Instruction instruction() {
    if (at_keyword("assert")) {
      next();
      return Assert{expr()};
    }
    if (at_keyword("scfence")) {
      next();
      return ScFence{};
    }
    if (at_keyword("fence")) {
      next();
      Fence f;
      if (peek().kind != Tok::Semi) {
        f.addresses.push_back(expr());
        while (peek().kind == Tok::Comma) {
          next();
          f.addresses.push_back(expr());
        }
      }
      return f;
    }
    if (at_keyword("mem")) {
      next();
      expect(Tok::LBracket);
      Expr addr = expr();
      expect(Tok::RBracket);
      expect(Tok::Arrow);
      return Store{std::move(addr), expr()};
    }
    if (peek().kind != Tok::Ident || is_keyword(peek().text))
      fail({"register", "'mem'", "'assert'", "'scfence'", "'fence'"});
    std::string dest = next().text;
    expect(Tok::Arrow);
    if (at_keyword("mem")) {
      next();
      expect(Tok::LBracket);
      Expr addr = expr();
      expect(Tok::RBracket);
      return Load{std::move(dest), std::move(addr)};
    }
    return LocalAssign{std::move(dest), expr()};
  }

  Expr expr() {
    Expr lhs = additive();
    ExprOp op;
    switch (peek().kind) {
      case Tok::Eq: op = ExprOp::Eq; break;
      case Tok::Ne: op = ExprOp::Ne; break;
      case Tok::Lt: op = ExprOp::Lt; break;
      case Tok::Le: op = ExprOp::Le; break;
      default: return lhs;
    }
    next();
    return Expr::binary(op, std::move(lhs), additive());
  }

  Expr additive() {
    Expr lhs = multiplicative();
    for (;;) {
      ExprOp op;
      if (peek().kind == Tok::Plus) op = ExprOp::Add;
      else if (peek().kind == Tok::Minus) op = ExprOp::Sub;
      else return lhs;
      next();
      lhs = Expr::binary(op, std::move(lhs), multiplicative());
    }
  }

  Expr multiplicative() {
    Expr lhs = unary();
    for (;;) {
      ExprOp op;
      if (peek().kind == Tok::Star) op = ExprOp::Mul;
      else if (peek().kind == Tok::Percent) op = ExprOp::Mod;
      else return lhs;
      next();
      lhs = Expr::binary(op, std::move(lhs), unary());
    }
  }

  Expr unary() {
    if (peek().kind == Tok::Bang) {
      next();
      return Expr::unary(ExprOp::Not, unary());
    }
    return primary();
  }

  Expr primary() {
    const Token& t = peek();
    if (t.kind == Tok::Number) return Expr::constant(number());
    if (t.kind == Tok::LParen) {
      next();
      Expr e = expr();
      expect(Tok::RParen);
      return e;
    }
    if (t.kind == Tok::Ident && !is_keyword(t.text)) {
      std::string name = next().text;
      if (auto it = constants_.find(name); it != constants_.end())
        return Expr::constant(it->second, std::move(name));
      return Expr::reg(std::move(name));
    }
    fail({"number", "register", "constant", "'('", "'!'"});
  }

  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool at_keyword(std::string_view kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }

  void keyword(std::string_view kw) {
    if (!at_keyword(kw)) fail({"'" + std::string(kw) + "'"});
    next();
  }

  std::string ident(const char* what) {
    if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail({what});
    return next().text;
  }

  Value number() {
    if (peek().kind != Tok::Number) fail({"number"});
    const Token t = next();
    Value v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc()) throw ParseError(t.line, t.column, {"number"}, "out-of-range literal " + t.text);
    return v;
  }

  void expect(Tok kind) {
    if (peek().kind != kind) fail({describe(kind)});
    next();
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::Eof ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.column, std::move(expected), found);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, Value, std::less<>> constants_;
};

std::string format_error(std::size_t line, std::size_t column, const std::vector<std::string>& expected,
                         const std::string& found) {
  std::ostringstream os;
  os << "<input>:" << line << ":" << column << ": ";
  if (expected.empty()) {
    os << found;
    return os.str();
  }
  os << "expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) os << (i + 1 == expected.size() ? " or " : ", ");
    os << expected[i];
  }
  os << ", found " << found;
  return os.str();
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected,
                       const std::string& found)
    : std::runtime_error(format_error(line, column, expected, found)),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

Program parse_program(std::string_view text) { return Parser(Lexer(text).run()).program(); }

Expr parse_expr(std::string_view text) { return Parser(Lexer(text).run()).lone_expr(); }

Program load_program(std::string_view text) {
  Program p = parse_program(text);
  if (auto diags = validate(p); !diags.empty()) throw ValidationError(std::move(diags));
  return p;
}

Program load_program_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_program(ss.str());
}

std::size_t Program::instruction_count() const {
  std::size_t n = 0;
  for (const auto& t : threads) n += t.instructions.size();
  return n;
}

const Thread* Program::find_thread(std::string_view thread_name) const {
  for (const auto& t : threads)
    if (t.name == thread_name) return &t;
  return nullptr;
}

bool Program::has_fence() const {
  for (const auto& t : threads)
    for (const auto& li : t.instructions)
      if (std::holds_alternative<Fence>(li.instruction)) return true;
  return false;
}

bool is_memory_access(const Instruction& inst) {
  return std::holds_alternative<Load>(inst) || std::holds_alternative<Store>(inst);
}

}  // namespace robust
