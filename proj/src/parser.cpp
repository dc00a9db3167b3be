#include <algorithm>
#include <cctype>
#include <set>

#include "effekta/syntax.hpp"

namespace effekta {

namespace {

struct Token {
  enum Kind { Ident, Number, Sym, End } kind;
  std::string text;
  int line, col;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

const std::set<std::string, std::less<>> keywords = {
    "do",   "if",  "then", "else", "with", "handle", "finally", "return", "rec", "fun",
    "unit", "true", "false", "succ", "pred", "iszero", "even",  "def"};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip();
    Token t{Token::End, "", line_, col_};
    if (pos_ >= text_.size()) return t;
    const char c = text_[pos_];
    if (ident_start(c)) {
      t.kind = Token::Ident;
      while (pos_ < text_.size() && ident_char(text_[pos_])) t.text += take();
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Token::Number;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) t.text += take();
      return t;
    }
    t.kind = Token::Sym;
    for (std::string_view s : {"]->", "-[", "->", "<-", "=c", "=s"}) {
      if (text_.substr(pos_, s.size()) != s) continue;
      // "=s" and "=c" must not swallow the start of an identifier
      if (s[0] == '=' && pos_ + 2 < text_.size() && ident_char(text_[pos_ + 2])) continue;
      for (std::size_t i = 0; i < s.size(); ++i) take();
      t.text = s;
      return t;
    }
    if (std::string_view("(),:!=;{}").find(c) == std::string_view::npos)
      throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
    t.text = std::string(1, take());
    return t;
  }

  Token peek(int ahead = 0) const {
    Lexer copy = *this;
    Token t = copy.next();
    for (int i = 0; i < ahead; ++i) t = copy.next();
    return t;
  }

  // Raw text up to (not including) the first occurrence of one of the stops.
  std::pair<std::string, Token> raw_until(std::initializer_list<std::string_view> stops) {
    skip();
    Token start{Token::Sym, "", line_, col_};
    std::string out;
    while (pos_ < text_.size()) {
      for (auto s : stops)
        if (text_.substr(pos_, s.size()) == s) return {out, start};
      if (text_[pos_] == ';' || text_[pos_] == '{' || text_[pos_] == '}') break;
      out += take();
    }
    throw ParseError(line_, col_, "unterminated effect annotation");
  }

 private:
  char take() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view text, const Signatures& sigs) : lex_(text), sigs_(sigs) {}

  Program program() {
    while (is_ident(lex_.peek(), "def")) definition();
    Expr main = seq_expr();
    expect_end();
    return {sigs_, main, def_order_};
  }

  Expr lone_expr() {
    Expr e = seq_expr();
    expect_end();
    return e;
  }

  Value lone_value() {
    Value v = value();
    expect_end();
    return v;
  }

  Type lone_type() {
    Type t = type();
    expect_end();
    return t;
  }

 private:
  [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw ParseError(t.line, t.col, msg); }

  static bool is_sym(const Token& t, std::string_view s) { return t.kind == Token::Sym && t.text == s; }
  static bool is_ident(const Token& t, std::string_view s) { return t.kind == Token::Ident && t.text == s; }

  static std::string describe(const Token& t) { return t.kind == Token::End ? "end of input" : "'" + t.text + "'"; }

  Token expect_sym(std::string_view s) {
    Token t = lex_.next();
    if (!is_sym(t, s)) fail(t, "expected '" + std::string(s) + "', found " + describe(t));
    return t;
  }

  void expect_keyword(std::string_view s) {
    Token t = lex_.next();
    if (!is_ident(t, s)) fail(t, "expected '" + std::string(s) + "', found " + describe(t));
  }

  void expect_end() {
    Token t = lex_.next();
    if (t.kind != Token::End) fail(t, "unexpected " + describe(t));
  }

  std::string name() {
    Token t = lex_.next();
    if (t.kind != Token::Ident || keywords.count(t.text)) fail(t, "expected identifier, found " + describe(t));
    return t.text;
  }

  std::string binder() {
    Token t = lex_.peek();
    std::string n = name();
    if (defs_.count(n)) fail(t, "'" + n + "' is a definition and cannot be rebound");
    return n;
  }

  void definition() {
    expect_keyword("def");
    Token at = lex_.peek();
    std::string n = binder();
    if (sigs_.count(intern(n))) fail(at, "'" + n + "' is an operation name");
    expect_sym("=");
    Value v = value();
    if (!v.free_vars().empty()) fail(at, "definition '" + n + "' has free variable " + v.free_vars().front());
    expect_sym(";");
    defs_.insert_or_assign(n, v);
    def_order_.emplace_back(n, v);
  }

  Effect effect(std::initializer_list<std::string_view> stops) {
    auto [text, at] = lex_.raw_until(stops);
    try {
      return Effect(parse_effect_expr(text));
    } catch (const EffectSyntaxError& e) {
      throw ParseError(at.line, at.col, std::string("bad effect: ") + e.what());
    }
  }

  Type base_type() {
    Token t = lex_.next();
    if (is_sym(t, "(")) {
      Type inner = type();
      expect_sym(")");
      return inner;
    }
    if (is_ident(t, "Nat")) return Type::nat();
    if (is_ident(t, "Bool")) return Type::boolean();
    if (is_ident(t, "Unit")) return Type::unit();
    if (is_ident(t, "Bot")) return Type::bot();
    fail(t, "expected a type, found " + describe(t));
  }

  Type type() {
    Type param = base_type();
    if (!is_sym(lex_.peek(), "-[")) return param;
    lex_.next();
    Effect latent = effect({"]->"});
    expect_sym("]->");
    return Type::arrow(param, latent, type());
  }

  bool value_start(const Token& t) const {
    if (t.kind == Token::Number || is_sym(t, "(")) return true;
    if (t.kind != Token::Ident) return false;
    if (t.text == "unit" || t.text == "true" || t.text == "false" || t.text == "succ" || t.text == "rec" ||
        t.text == "fun") {
      return true;
    }
    return !keywords.count(t.text);
  }

  Value function(bool recursive) {
    std::string self = "_";
    if (recursive) self = binder();
    expect_sym("(");
    std::string param = binder();
    expect_sym(":");
    Type pt = type();
    expect_sym(")");
    expect_sym(":");
    Type rt = type();
    expect_sym("!");
    Effect latent = effect({recursive ? "=" : "->"});
    expect_sym(recursive ? "=" : "->");
    Expr body = seq_expr();
    return Value::fun(self, param, pt, rt, latent, body);
  }

  Value value() {
    Token t = lex_.next();
    if (t.kind == Token::Number) {
      try {
        return Value::nat(std::stoull(t.text));
      } catch (const std::out_of_range&) {
        fail(t, "numeral too large");
      }
    }
    if (is_sym(t, "(")) {
      Value v = value();
      expect_sym(")");
      return v;
    }
    if (t.kind != Token::Ident) fail(t, "expected a value, found " + describe(t));
    if (t.text == "unit") return Value::unit();
    if (t.text == "true") return Value::boolean(true);
    if (t.text == "false") return Value::boolean(false);
    if (t.text == "succ") {
      expect_sym("(");
      Value v = value();
      expect_sym(")");
      return Value::succ(v);
    }
    if (t.text == "rec") return function(true);
    if (t.text == "fun") return function(false);
    if (keywords.count(t.text)) fail(t, "expected a value, found " + describe(t));
    if (sigs_.count(intern(t.text))) fail(t, "operation '" + t.text + "' used as a value");
    if (auto it = defs_.find(t.text); it != defs_.end()) return it->second;
    return Value::var(t.text);
  }

  std::vector<Value> arguments() {
    expect_sym("(");
    std::vector<Value> args;
    if (is_sym(lex_.peek(), ")")) {
      lex_.next();
      return args;
    }
    for (;;) {
      args.push_back(value());
      Token t = lex_.next();
      if (is_sym(t, ")")) return args;
      if (!is_sym(t, ",")) fail(t, "expected ',' or ')', found " + describe(t));
    }
  }

  // A sequence continues after ';' unless the handler's finally part or a
  // definition follows.
  Expr seq_expr() {
    Expr first = simple();
    const Token semi = lex_.peek();
    if (!is_sym(semi, ";")) return first;
    const Token after = lex_.peek(1);
    if (after.kind == Token::End || is_ident(after, "finally") || is_ident(after, "def")) return first;
    lex_.next();
    return Expr::seq(first, seq_expr());
  }

  Handler handler() {
    expect_sym("{");
    std::vector<Clause> clauses;
    if (!is_ident(lex_.peek(), "finally")) {
      for (;;) {
        clauses.push_back(clause());
        if (std::count_if(clauses.begin(), clauses.end(),
                          [&](const Clause& c) { return c.op == clauses.back().op; }) > 1) {
          fail(last_clause_, "duplicate clause for operation '" + symbol_name(clauses.back().op) + "'");
        }
        Token t = lex_.next();
        if (is_sym(t, ";")) break;
        if (!is_sym(t, ",")) fail(t, "expected ',' or ';' after clause, found " + describe(t));
      }
    }
    expect_keyword("finally");
    std::string x = binder();
    expect_sym("->");
    Expr body = seq_expr();
    expect_sym("}");
    return Handler{std::move(clauses), x, body};
  }

  Clause clause() {
    last_clause_ = lex_.peek();
    Token at = lex_.next();
    if (at.kind != Token::Ident) fail(at, "expected an operation name, found " + describe(at));
    const Symbol op = intern(at.text);
    auto sig = sigs_.find(op);
    if (sig == sigs_.end()) fail(at, "unknown operation '" + at.text + "'");
    expect_sym("(");
    std::vector<std::string> params;
    if (!is_sym(lex_.peek(), ")")) {
      for (;;) {
        params.push_back(binder());
        Token t = lex_.next();
        if (is_sym(t, ")")) break;
        if (!is_sym(t, ",")) fail(t, "expected ',' or ')', found " + describe(t));
      }
    } else {
      lex_.next();
    }
    if (params.size() != sig->second.args.size()) {
      fail(at, "clause for '" + at.text + "' binds " + std::to_string(params.size()) + " parameters, operation takes " +
                   std::to_string(sig->second.args.size()));
    }
    Token mode = lex_.next();
    if (!is_sym(mode, "=c") && !is_sym(mode, "=s")) fail(mode, "expected '=c' or '=s', found " + describe(mode));
    expect_sym("->");
    Expr body = seq_expr();
    return Clause{op, params, body, mode.text == "=s"};
  }

  Expr simple() {
    const Token t = lex_.peek();
    if (is_ident(t, "do")) {
      lex_.next();
      std::string x = binder();
      expect_sym("<-");
      Expr first = simple();
      expect_sym(";");
      return Expr::bind(x, first, seq_expr());
    }
    if (is_ident(t, "if")) {
      lex_.next();
      Value c = value();
      expect_keyword("then");
      Expr a = seq_expr();
      expect_keyword("else");
      return Expr::cond(c, a, seq_expr());
    }
    if (is_ident(t, "with")) {
      lex_.next();
      Handler h = handler();
      expect_keyword("handle");
      return Expr::with(std::move(h), seq_expr());
    }
    if (is_ident(t, "return")) {
      lex_.next();
      return Expr::ret(value());
    }
    for (PrimOp p : {PrimOp::Pred, PrimOp::IsZero, PrimOp::Even}) {
      if (!is_ident(t, prim_name(p))) continue;
      lex_.next();
      expect_sym("(");
      Value v = value();
      expect_sym(")");
      return Expr::prim(p, v);
    }
    if (t.kind == Token::Ident && sigs_.count(intern(t.text)) && is_sym(lex_.peek(1), "(")) {
      lex_.next();
      const Symbol op = intern(t.text);
      std::vector<Value> args = arguments();
      const auto& sig = sigs_.at(op);
      if (args.size() != sig.args.size()) {
        fail(t, "operation '" + t.text + "' takes " + std::to_string(sig.args.size()) + " arguments, given " +
                    std::to_string(args.size()));
      }
      return Expr::op(op, std::move(args));
    }
    if (is_sym(t, "(")) {
      // either a parenthesised value applied to something or a grouped expression
      Lexer saved = lex_;
      try {
        lex_.next();
        Value v = value();
        expect_sym(")");
        return application(v, t);
      } catch (const ParseError&) {
        lex_ = saved;
      }
      lex_.next();
      Expr e = seq_expr();
      expect_sym(")");
      return e;
    }
    if (t.kind == Token::Ident && sigs_.count(intern(t.text))) fail(t, "operation '" + t.text + "' needs arguments");
    if (!value_start(t)) fail(t, "expected an expression, found " + describe(t));
    Value f = value();
    return application(f, t);
  }

  Expr application(const Value& f, const Token& at) {
    if (!value_start(lex_.peek())) fail(at, "a value is not an expression here; write 'return " + f.str() + "'");
    return Expr::app(f, value());
  }

  Lexer lex_;
  const Signatures& sigs_;
  std::map<std::string, Value, std::less<>> defs_;
  std::vector<std::pair<std::string, Value>> def_order_;
  Token last_clause_{Token::End, "", 0, 0};
};

}  // namespace

Program parse_program(std::string_view text, const Signatures& sigs) { return Parser(text, sigs).program(); }
Expr parse_expr(std::string_view text, const Signatures& sigs) { return Parser(text, sigs).lone_expr(); }
Value parse_value(std::string_view text, const Signatures& sigs) { return Parser(text, sigs).lone_value(); }
Type parse_type(std::string_view text) { return Parser(text, Signatures{}).lone_type(); }

}  // namespace effekta
