#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "effekta/effect.hpp"

namespace effekta {

namespace {

struct SymbolTable {
  std::shared_mutex mutex;
  std::deque<std::string> names;
  std::unordered_map<std::string, Symbol> ids;
};

SymbolTable& symbols() {
  static SymbolTable table;
  return table;
}

}  // namespace

Symbol intern(std::string_view name) {
  auto& t = symbols();
  {
    std::shared_lock lock(t.mutex);
    if (auto it = t.ids.find(std::string(name)); it != t.ids.end()) return it->second;
  }
  std::unique_lock lock(t.mutex);
  auto [it, inserted] = t.ids.try_emplace(std::string(name), static_cast<Symbol>(t.names.size()));
  if (inserted) t.names.emplace_back(name);
  return it->second;
}

const std::string& symbol_name(Symbol s) {
  auto& t = symbols();
  std::shared_lock lock(t.mutex);
  return t.names.at(s);
}

Lasso canonical(const Lasso& l) {
  Lasso out = l;
  auto& p = out.period;
  const std::size_t n = p.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < n && repeats; ++i) repeats = p[i] == p[i - d];
    if (repeats) {
      p.resize(d);
      break;
    }
  }
  while (!out.stem.empty() && !p.empty() && out.stem.back() == p.back()) {
    out.stem.pop_back();
    std::rotate(p.rbegin(), p.rbegin() + 1, p.rend());
  }
  return out;
}

std::string format_word(const Word& w) {
  if (w.empty()) return "eps";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += " . ";
    s += symbol_name(w[i]);
  }
  return s;
}

std::string format_lasso(const Lasso& l) {
  std::string s;
  if (!l.stem.empty()) s = format_word(l.stem) + " . ";
  return s + "(" + format_word(l.period) + ")^w";
}

EffectExpr EffectExpr::eps() { return EffectExpr(std::make_shared<Node>(Node{Kind::Eps, 0, nullptr, nullptr})); }

EffectExpr EffectExpr::atom(Symbol op) {
  return EffectExpr(std::make_shared<Node>(Node{Kind::Atom, op, nullptr, nullptr}));
}

EffectExpr EffectExpr::concat(EffectExpr a, EffectExpr b) {
  return EffectExpr(std::make_shared<Node>(Node{Kind::Concat, 0,
                                                std::make_shared<EffectExpr>(std::move(a)),
                                                std::make_shared<EffectExpr>(std::move(b))}));
}

EffectExpr EffectExpr::alt(EffectExpr a, EffectExpr b) {
  return EffectExpr(std::make_shared<Node>(Node{Kind::Union, 0,
                                                std::make_shared<EffectExpr>(std::move(a)),
                                                std::make_shared<EffectExpr>(std::move(b))}));
}

EffectExpr EffectExpr::star(EffectExpr a) {
  return EffectExpr(
      std::make_shared<Node>(Node{Kind::Star, 0, std::make_shared<EffectExpr>(std::move(a)), nullptr}));
}

EffectExpr EffectExpr::omega(EffectExpr a) {
  return EffectExpr(
      std::make_shared<Node>(Node{Kind::Omega, 0, std::make_shared<EffectExpr>(std::move(a)), nullptr}));
}

namespace {

int precedence(EffectExpr::Kind k) {
  switch (k) {
    case EffectExpr::Kind::Union: return 0;
    case EffectExpr::Kind::Concat: return 1;
    case EffectExpr::Kind::Star:
    case EffectExpr::Kind::Omega: return 2;
    default: return 3;
  }
}

void print(const EffectExpr& e, int context, std::string& out) {
  const bool parens = precedence(e.kind()) < context;
  if (parens) out += '(';
  switch (e.kind()) {
    case EffectExpr::Kind::Eps: out += "eps"; break;
    case EffectExpr::Kind::Atom: out += symbol_name(e.symbol()); break;
    case EffectExpr::Kind::Concat:
      print(e.left(), 1, out);
      out += " . ";
      print(e.right(), 2, out);
      break;
    case EffectExpr::Kind::Union:
      print(e.left(), 0, out);
      out += " | ";
      print(e.right(), 1, out);
      break;
    case EffectExpr::Kind::Star:
      print(e.left(), 2, out);
      out += '*';
      break;
    case EffectExpr::Kind::Omega:
      print(e.left(), 2, out);
      out += "^w";
      break;
  }
  if (parens) out += ')';
}

class EffectParser {
 public:
  explicit EffectParser(std::string_view text) : text_(text) {}

  EffectExpr parse() {
    EffectExpr e = alternation();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw EffectSyntaxError("effect at offset " + std::to_string(pos_) + ": " + msg);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  EffectExpr alternation() {
    EffectExpr e = sequence();
    while (accept('|')) e = EffectExpr::alt(e, sequence());
    return e;
  }

  EffectExpr sequence() {
    EffectExpr e = postfix();
    while (accept('.')) e = EffectExpr::concat(e, postfix());
    return e;
  }

  EffectExpr postfix() {
    EffectExpr e = primary();
    for (;;) {
      if (accept('*')) {
        e = EffectExpr::star(e);
      } else if (accept('^')) {
        if (pos_ >= text_.size() || text_[pos_] != 'w') fail("expected 'w' after '^'");
        ++pos_;
        e = EffectExpr::omega(e);
      } else {
        return e;
      }
    }
  }

  EffectExpr primary() {
    skip();
    if (accept('(')) {
      EffectExpr e = alternation();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
            text_[pos_] == '\'')) {
      ++pos_;
    }
    if (start == pos_ || std::isdigit(static_cast<unsigned char>(text_[start]))) {
      pos_ = start;
      fail("expected an operation name, 'eps' or '('");
    }
    std::string_view name = text_.substr(start, pos_ - start);
    if (name == "eps") return EffectExpr::eps();
    return EffectExpr::atom(name);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string EffectExpr::str() const {
  std::string out;
  print(*this, 0, out);
  return out;
}

EffectExpr parse_effect_expr(std::string_view text) { return EffectParser(text).parse(); }

}  // namespace effekta
