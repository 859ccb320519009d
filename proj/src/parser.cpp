#include <cctype>
#include <charconv>
#include <set>

#include "multicat/query.hpp"

namespace multicat {

namespace {

enum class Tok {
  Ident,
  Int,
  Double,
  String,
  Query,
  From,
  To,
  Let,
  Be,
  In,
  If,
  Then,
  Else,
  Cons,
  Nil,
  True,
  False,
  LParen,
  RParen,
  Comma,
  Backslash,
  Arrow,
  Plus,
  Minus,
  Star,
  Slash,
  Gt,
  Lt,
  Ge,
  Le,
  EqEq,
  Ne,
  AndAnd,
  OrOr,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  SourceLoc loc;
  std::int64_t int_value = 0;
  double double_value = 0;
};

const std::pair<std::string_view, Tok> kKeywords[] = {
    {"QUERY", Tok::Query}, {"FROM", Tok::From}, {"TO", Tok::To},     {"LET", Tok::Let},     {"BE", Tok::Be},
    {"IN", Tok::In},       {"if", Tok::If},     {"then", Tok::Then}, {"else", Tok::Else},   {"cons", Tok::Cons},
    {"nil", Tok::Nil},     {"True", Tok::True}, {"False", Tok::False},
};

std::string describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Double: return "number";
    case Tok::String: return "string";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Backslash: return "'\\'";
    case Tok::Arrow: return "'->'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Gt: return "'>'";
    case Tok::Lt: return "'<'";
    case Tok::Ge: return "'>='";
    case Tok::Le: return "'<='";
    case Tok::EqEq: return "'=='";
    case Tok::Ne: return "'/='";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::End: return "end of input";
    default:
      for (const auto& [word, kind] : kKeywords)
        if (kind == t) return std::string(word);
  }
  return "?";
}

[[noreturn]] void syntax_error(SourceLoc loc, const std::string& msg, std::vector<std::string> expected = {}) {
  std::string text = "syntax error at " + std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + msg;
  if (!expected.empty()) {
    text += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) text += (i ? ", " : "") + expected[i];
    text += ")";
  }
  Error err(ErrorKind::SyntaxError, text, loc);
  err.expected = std::move(expected);
  throw err;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.loc = {line_, col_};
      if (pos_ >= text_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        lex_word(t);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        lex_number(t);
      } else if (c == '"') {
        lex_string(t);
      } else {
        lex_symbol(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  void lex_word(Token& t) {
    const auto start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '\''))
      advance();
    t.text = std::string(text_.substr(start, pos_ - start));
    t.kind = Tok::Ident;
    for (const auto& [word, kind] : kKeywords)
      if (word == t.text) t.kind = kind;
  }

  void lex_number(Token& t) {
    const auto start = pos_;
    bool is_double = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      is_double = true;
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t k = 1;
      if (peek(k) == '+' || peek(k) == '-') ++k;
      if (std::isdigit(static_cast<unsigned char>(peek(k)))) {
        is_double = true;
        for (std::size_t i = 0; i < k; ++i) advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      }
    }
    t.text = std::string(text_.substr(start, pos_ - start));
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    if (is_double) {
      t.kind = Tok::Double;
      auto res = std::from_chars(first, last, t.double_value);
      if (res.ec != std::errc{}) syntax_error(t.loc, "number literal out of range");
    } else {
      t.kind = Tok::Int;
      auto res = std::from_chars(first, last, t.int_value);
      if (res.ec != std::errc{}) syntax_error(t.loc, "integer literal out of range");
    }
  }

  void lex_string(Token& t) {
    t.kind = Tok::String;
    advance();
    for (;;) {
      if (pos_ >= text_.size() || peek() == '\n') syntax_error(t.loc, "unterminated string literal");
      char c = peek();
      advance();
      if (c == '"') return;
      if (c == '\\') {
        if (pos_ >= text_.size()) syntax_error(t.loc, "unterminated string literal");
        char e = peek();
        advance();
        switch (e) {
          case 'n': t.text += '\n'; break;
          case 't': t.text += '\t'; break;
          case '"': t.text += '"'; break;
          case '\\': t.text += '\\'; break;
          default: syntax_error(t.loc, std::string("unknown escape \\") + e);
        }
        continue;
      }
      t.text += c;
    }
  }

  void lex_symbol(Token& t) {
    const char c = peek();
    const char n = peek(1);
    auto two = [&](Tok k) {
      t.kind = k;
      t.text = std::string(text_.substr(pos_, 2));
      advance();
      advance();
    };
    auto one = [&](Tok k) {
      t.kind = k;
      t.text = std::string(1, c);
      advance();
    };
    if (c == '-' && n == '>') return two(Tok::Arrow);
    if (c == '>' && n == '=') return two(Tok::Ge);
    if (c == '<' && n == '=') return two(Tok::Le);
    if (c == '=' && n == '=') return two(Tok::EqEq);
    if (c == '/' && n == '=') return two(Tok::Ne);
    if (c == '&' && n == '&') return two(Tok::AndAnd);
    if (c == '|' && n == '|') return two(Tok::OrOr);
    switch (c) {
      case '(': return one(Tok::LParen);
      case ')': return one(Tok::RParen);
      case ',': return one(Tok::Comma);
      case '\\': return one(Tok::Backslash);
      case '+': return one(Tok::Plus);
      case '-': return one(Tok::Minus);
      case '*': return one(Tok::Star);
      case '/': return one(Tok::Slash);
      case '>': return one(Tok::Gt);
      case '<': return one(Tok::Lt);
      default: break;
    }
    syntax_error(t.loc, std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  QueryPtr parse_all() {
    auto q = query();
    if (peek().kind != Tok::End) fail({describe(Tok::End)});
    return q;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at(Tok k) const { return peek().kind == k; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const auto& t = peek();
    const std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    syntax_error(t.loc, "unexpected " + found, std::move(expected));
  }

  const Token& expect(Tok k) {
    if (!at(k)) fail({describe(k)});
    return next();
  }

  std::string ident() { return expect(Tok::Ident).text; }

  QueryPtr query() {
    const auto loc = peek().loc;
    if (at(Tok::Let)) {
      next();
      Let let;
      let.var = ident();
      expect(Tok::Be);
      let.bound = query();
      expect(Tok::In);
      let.body = query();
      return std::make_shared<const Query>(Query{std::move(let), loc});
    }
    if (!at(Tok::Query)) fail({"LET", "QUERY"});
    return std::make_shared<const Query>(Query{block(), loc});
  }

  Block block() {
    expect(Tok::Query);
    Block b;
    b.lambda = lambda();
    expect(Tok::From);
    b.source_loc = peek().loc;
    b.source = ident();
    expect(Tok::To);
    b.model_loc = peek().loc;
    b.models.push_back(model());
    while (at(Tok::Slash)) {
      next();
      b.models.push_back(model());
    }
    return b;
  }

  OutputModel model() {
    static const std::vector<std::string> kModels = {"graph", "algebraic graph", "relational", "xml"};
    if (!at(Tok::Ident)) fail(kModels);
    const auto word = peek().text;
    if (word == "algebraic") {
      next();
      if (!at(Tok::Ident) || peek().text != "graph") fail({"graph"});
      next();
      return OutputModel::AlgebraicGraph;
    }
    auto m = output_model_from_string(word);
    if (!m || *m == OutputModel::AlgebraicGraph) fail(kModels);
    next();
    return *m;
  }

  Lambda lambda() {
    Lambda l;
    expect(Tok::LParen);
    l.loc = peek().loc;
    expect(Tok::Backslash);
    l.params.push_back(ident());
    if (at(Tok::Ident)) l.params.push_back(ident());
    if (!at(Tok::Arrow)) fail(l.params.size() == 1 ? std::vector<std::string>{"identifier", "'->'"}
                                                   : std::vector<std::string>{"'->'"});
    next();
    l.body = expr();
    expect(Tok::RParen);
    return l;
  }

  ExprPtr expr() {
    if (at(Tok::If)) {
      const auto loc = next().loc;
      auto c = expr();
      expect(Tok::Then);
      auto t = expr();
      expect(Tok::Else);
      auto e = expr();
      return make_expr(IfExpr{c, t, e}, loc);
    }
    return or_expr();
  }

  ExprPtr or_expr() {
    auto lhs = and_expr();
    while (at(Tok::OrOr)) {
      next();
      auto rhs = and_expr();
      const auto loc = lhs->loc;
      lhs = make_expr(BinExpr{BinaryOp::Or, lhs, rhs}, loc);
    }
    return lhs;
  }

  ExprPtr and_expr() {
    auto lhs = cmp_expr();
    while (at(Tok::AndAnd)) {
      next();
      auto rhs = cmp_expr();
      const auto loc = lhs->loc;
      lhs = make_expr(BinExpr{BinaryOp::And, lhs, rhs}, loc);
    }
    return lhs;
  }

  static std::optional<BinaryOp> cmp_op(Tok t) {
    switch (t) {
      case Tok::Gt: return BinaryOp::Gt;
      case Tok::Lt: return BinaryOp::Lt;
      case Tok::Ge: return BinaryOp::Ge;
      case Tok::Le: return BinaryOp::Le;
      case Tok::EqEq: return BinaryOp::Eq;
      case Tok::Ne: return BinaryOp::Ne;
      default: return std::nullopt;
    }
  }

  ExprPtr cmp_expr() {
    auto lhs = add_expr();
    if (auto op = cmp_op(peek().kind)) {
      next();
      auto rhs = add_expr();
      if (cmp_op(peek().kind)) syntax_error(peek().loc, "comparison operators do not chain");
      const auto loc = lhs->loc;
      lhs = make_expr(BinExpr{*op, lhs, rhs}, loc);
    }
    return lhs;
  }

  ExprPtr add_expr() {
    auto lhs = mul_expr();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      const auto op = next().kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      auto rhs = mul_expr();
      const auto loc = lhs->loc;
      lhs = make_expr(BinExpr{op, lhs, rhs}, loc);
    }
    return lhs;
  }

  ExprPtr mul_expr() {
    auto lhs = app_expr();
    while (at(Tok::Star) || at(Tok::Slash)) {
      const auto op = next().kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
      auto rhs = app_expr();
      const auto loc = lhs->loc;
      lhs = make_expr(BinExpr{op, lhs, rhs}, loc);
    }
    return lhs;
  }

  bool atom_start() const {
    switch (peek().kind) {
      case Tok::Ident:
      case Tok::Int:
      case Tok::Double:
      case Tok::String:
      case Tok::True:
      case Tok::False:
      case Tok::LParen:
      case Tok::Nil: return true;
      default: return false;
    }
  }

  std::vector<ExprPtr> arguments() {
    std::vector<ExprPtr> args;
    while (atom_start()) args.push_back(atom());
    return args;
  }

  ExprPtr app_expr() {
    const auto loc = peek().loc;
    if (at(Tok::Cons)) {
      next();
      if (!atom_start()) fail({"argument of cons"});
      auto args = arguments();
      if (args.size() > 2) syntax_error(args[2]->loc, "cons takes at most two arguments");
      return make_expr(ConsExpr{args[0], args.size() == 2 ? args[1] : nullptr}, loc);
    }
    if (at(Tok::Ident)) {
      auto name = next().text;
      auto args = arguments();
      if (args.empty()) return make_expr(VarExpr{std::move(name)}, loc);
      return make_expr(AppExpr{std::move(name), std::move(args)}, loc);
    }
    auto a = atom();
    if (atom_start()) syntax_error(peek().loc, "only named functions can be applied");
    return a;
  }

  ExprPtr atom() {
    const auto& t = peek();
    const auto loc = t.loc;
    switch (t.kind) {
      case Tok::Ident: return make_expr(VarExpr{next().text}, loc);
      case Tok::Int: return make_expr(IntLit{next().int_value}, loc);
      case Tok::Double: return make_expr(DoubleLit{next().double_value}, loc);
      case Tok::String: return make_expr(StringLit{next().text}, loc);
      case Tok::True: next(); return make_expr(BoolLit{true}, loc);
      case Tok::False: next(); return make_expr(BoolLit{false}, loc);
      case Tok::Nil: next(); return make_expr(NilExpr{}, loc);
      case Tok::LParen: return paren();
      default:
        fail({"identifier", "literal", "'('", "nil"});
    }
  }

  ExprPtr paren() {
    const auto loc = expect(Tok::LParen).loc;
    if (at(Tok::Backslash)) {
      next();
      LamExpr lam;
      lam.param = ident();
      expect(Tok::Arrow);
      lam.body = expr();
      expect(Tok::RParen);
      return make_expr(std::move(lam), loc);
    }
    if (at(Tok::Minus) && (peek(1).kind == Tok::Int || peek(1).kind == Tok::Double) &&
        peek(2).kind == Tok::RParen) {
      next();
      const auto& num = next();
      ExprPtr lit = num.kind == Tok::Int ? make_expr(IntLit{-num.int_value}, loc)
                                         : make_expr(DoubleLit{-num.double_value}, loc);
      expect(Tok::RParen);
      return lit;
    }
    std::vector<ExprPtr> items{expr()};
    while (at(Tok::Comma)) {
      next();
      items.push_back(expr());
    }
    if (!at(Tok::RParen)) fail({"','", "')'"});
    next();
    if (items.size() == 1) return items.front();
    return make_expr(TupleExpr{std::move(items)}, loc);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

bool is_keyword(std::string_view word) {
  for (const auto& [w, kind] : kKeywords)
    if (w == word) return true;
  return false;
}

QueryPtr parse_query(std::string_view text) { return Parser(Lexer(text).run()).parse_all(); }

}  // namespace multicat
