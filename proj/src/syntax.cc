#include "dam/syntax.h"

#include <charconv>
#include <vector>

#include "dam/errors.h"

namespace dam {

namespace {

enum class Tok { ident, number, self, punct, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> lex(std::string_view src) {
  // Longest match first. "]>", "[<", ">]" and "<[" are recognised by the
  // parser from single brackets so that "ut[x]>1" stays unambiguous.
  static constexpr std::string_view kMulti[] = {"<->", "->", "<=", ">=",
                                                "[]",  "<>"};
  static constexpr std::string_view kSingle = "[]<>(),:&|!+-*/=";

  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    const std::size_t tl = line;
    const std::size_t tc = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      out.push_back({Tok::ident, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (digit(c)) {
      std::size_t j = i;
      while (j < src.size() && digit(src[j])) ++j;
      out.push_back({Tok::number, std::string(src.substr(i, j - i)), tl, tc});
      advance(j - i);
      continue;
    }
    if (c == '@') {
      if (src.substr(i, 5) == "@self" &&
          (i + 5 >= src.size() || !ident_char(src[i + 5]))) {
        out.push_back({Tok::self, "@self", tl, tc});
        advance(5);
        continue;
      }
      throw SyntaxError("expected '@self'", tl, tc);
    }
    bool matched = false;
    for (auto op : kMulti) {
      if (src.substr(i, op.size()) == op) {
        out.push_back({Tok::punct, std::string(op), tl, tc});
        advance(op.size());
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (kSingle.find(c) != std::string_view::npos) {
      out.push_back({Tok::punct, std::string(1, c), tl, tc});
      advance(1);
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", tl, tc);
  }
  out.push_back({Tok::end, "", line, col});
  return out;
}

bool reserved(std::string_view s) {
  return s == "true" || s == "false" || s == "skip" || s == "wins" ||
         s == "ut";
}

struct Sum {
  std::vector<RationalTerm> terms;
  Rational constant{0};
};

class Parser {
 public:
  Parser(std::string_view src, const ParseOptions& options)
      : tokens_(lex(src)), options_(options) {}

  Formula parse() {
    Formula f = iff();
    if (peek().kind != Tok::end) fail("expected end of input");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t k = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[k];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool at(std::string_view punct, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::punct && t.text == punct;
  }
  bool accept(std::string_view punct) {
    if (!at(punct)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    const std::string found =
        t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(what + ", found " + found, t.line, t.column);
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
  }
  std::string ident(const char* what) {
    const Token& t = peek();
    if (t.kind != Tok::ident || reserved(t.text)) fail(std::string("expected ") + what);
    return next().text;
  }

  void require_seller(const std::string& name) {
    if (options_.seller_names && !options_.seller_names->contains(name)) {
      throw ArityError("'" + name + "' is not a seller");
    }
  }

  Formula iff() {
    Formula lhs = imp();
    while (accept("<->")) lhs = Formula::equivalence(lhs, imp());
    return lhs;
  }

  Formula imp() {
    Formula lhs = disj();
    if (accept("->")) return Formula::implication(lhs, imp());
    return lhs;
  }

  Formula disj() {
    Formula lhs = conj();
    while (accept("|")) lhs = Formula::disjunction(lhs, conj());
    return lhs;
  }

  Formula conj() {
    Formula lhs = unary();
    while (accept("&")) lhs = Formula::conjunction(lhs, unary());
    return lhs;
  }

  Formula unary() {
    if (accept("!")) return Formula::negation(unary());
    if (accept("[]")) return Formula::box(unary());
    if (accept("<>")) return Formula::diamond(unary());
    if (at("[")) {
      next();
      if (accept("<")) {
        auto c = coalition(">");
        expect("]");
        return Formula::coalition_box(std::move(c), unary());
      }
      if (accept("<>")) {
        expect("]");
        return Formula::coalition_box({}, unary());
      }
      if (accept("]")) return Formula::box(unary());
      auto action = bindings("]");
      return Formula::diffuse(std::move(action), unary());
    }
    if (at("<")) {
      next();
      if (accept("[")) {
        auto c = coalition("]");
        expect(">");
        return Formula::coalition_diamond(std::move(c), unary());
      }
      if (accept("[]")) {
        expect(">");
        return Formula::coalition_diamond({}, unary());
      }
      if (accept(">")) return Formula::diamond(unary());
      auto action = bindings(">");
      return Formula::diffuse_diamond(std::move(action), unary());
    }
    return atom();
  }

  std::vector<std::string> coalition(std::string_view close) {
    std::vector<std::string> out;
    if (accept(close)) return out;
    do {
      std::string name = ident("seller name");
      require_seller(name);
      out.push_back(std::move(name));
    } while (accept(","));
    expect(close);
    return out;
  }

  std::vector<Binding> bindings(std::string_view close) {
    std::vector<Binding> out;
    do {
      Binding b;
      b.seller = ident("seller name");
      require_seller(b.seller);
      for (const auto& prev : out) {
        if (prev.seller == b.seller) {
          throw ArityError("seller '" + b.seller +
                           "' appears twice in one action");
        }
      }
      expect(":");
      const Token& t = peek();
      if (t.kind == Tok::ident && t.text == "skip") {
        next();
      } else {
        b.target = ident("buyer name or 'skip'");
      }
      out.push_back(std::move(b));
    } while (accept(","));
    expect(close);
    return out;
  }

  Subject subject() {
    if (peek().kind == Tok::self) {
      next();
      return Subject::self();
    }
    return Subject::named(ident("name or '@self'"));
  }

  Formula atom() {
    const Token& t = peek();
    if (t.kind == Tok::ident) {
      if (t.text == "true" || t.text == "false") {
        const bool value = t.text == "true";
        next();
        return Formula::constant(value);
      }
      if (t.text == "wins") {
        next();
        expect("(");
        Subject s = subject();
        expect(")");
        return Formula::heart(std::move(s));
      }
      if (t.text == "ut") return relation();
      if (!reserved(t.text)) return Formula::nominal(next().text);
      fail("unexpected keyword");
    }
    if (t.kind == Tok::number || at("-")) return relation();
    if (accept("(")) {
      Formula f = iff();
      expect(")");
      return f;
    }
    fail("expected a formula");
  }

  Formula relation() {
    Sum lhs = sum();
    Comparison op;
    if (accept(">=")) {
      op = Comparison::ge;
    } else if (accept("<=")) {
      op = Comparison::le;
    } else if (accept(">")) {
      op = Comparison::gt;
    } else if (accept("<")) {
      op = Comparison::lt;
    } else if (accept("=")) {
      op = Comparison::eq;
    } else {
      fail("expected a comparison");
    }
    Sum rhs = sum();
    std::vector<RationalTerm> terms = std::move(lhs.terms);
    for (auto& t : rhs.terms) {
      terms.push_back(RationalTerm{-t.coefficient, std::move(t.subject)});
    }
    return Formula::relation(std::move(terms), op, rhs.constant - lhs.constant);
  }

  Sum sum() {
    Sum out;
    term(out, false);
    while (true) {
      if (accept("+")) {
        term(out, false);
      } else if (accept("-")) {
        term(out, true);
      } else {
        break;
      }
    }
    return out;
  }

  void term(Sum& out, bool negate) {
    if (accept("-")) negate = !negate;
    std::optional<Rational> coefficient;
    if (peek().kind == Tok::number) {
      coefficient = number();
      if (!accept("*")) {
        out.constant += negate ? -*coefficient : *coefficient;
        return;
      }
    }
    const Token& t = peek();
    if (t.kind != Tok::ident || t.text != "ut") fail("expected 'ut[...]'");
    next();
    expect("[");
    Subject s = subject();
    expect("]");
    Rational c = coefficient.value_or(Rational(1));
    out.terms.push_back(RationalTerm{negate ? -c : c, std::move(s)});
  }

  Rational number() {
    auto integer = [&]() {
      const Token& t = peek();
      if (t.kind != Tok::number) fail("expected a number");
      std::int64_t v = 0;
      const auto [p, ec] =
          std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc()) {
        throw SyntaxError("number out of range", t.line, t.column);
      }
      next();
      return v;
    };
    const std::int64_t num = integer();
    if (!accept("/")) return Rational(num);
    const Token& t = peek();
    const std::int64_t den = integer();
    if (den == 0) throw SyntaxError("zero denominator", t.line, t.column);
    return Rational(num, den);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const ParseOptions& options_;
};

// ---- printing ----

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string subject_text(const Subject& s) {
  return s.is_self() ? "@self" : *s.name;
}

std::string coefficient_text(const Rational& c, const Subject& s) {
  const std::string ut = "ut[" + subject_text(s) + "]";
  return c == 1 ? ut : to_string(c) + "*" + ut;
}

const char* comparison_text(Comparison op) {
  switch (op) {
    case Comparison::ge: return ">=";
    case Comparison::le: return "<=";
    case Comparison::gt: return ">";
    case Comparison::lt: return "<";
    case Comparison::eq: return "=";
  }
  return ">=";
}

std::string action_text(const std::vector<Binding>& action) {
  std::string out;
  for (const auto& b : action) {
    if (!out.empty()) out += ", ";
    out += b.seller + ":" + (b.target ? *b.target : "skip");
  }
  return out;
}

std::string coalition_text(const std::vector<std::string>& c) {
  std::string out;
  for (const auto& s : c) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

void print(const Formula& f, std::string& out);

// Left-nested chain of one connective, printed without inner parentheses.
template <class Node>
void print_left_chain(const Formula& f, const char* op, std::string& out) {
  std::vector<const Formula*> items;
  const Formula* cur = &f;
  while (const Node* n = cur->as<Node>()) {
    items.push_back(&n->rhs);
    cur = &n->lhs;
  }
  items.push_back(cur);
  out += '(';
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    if (it != items.rbegin()) out += op;
    print(**it, out);
  }
  out += ')';
}

void print(const Formula& f, std::string& out) {
  using namespace syntax;
  std::visit(
      overloaded{
          [&](const Nominal& n) { out += n.name; },
          [&](const LinearGeq& n) {
            if (n.terms.empty()) {
              out += n.bound == 0 ? "true" : "0 >= " + std::to_string(n.bound);
              return;
            }
            for (std::size_t i = 0; i < n.terms.size(); ++i) {
              if (i > 0) out += " + ";
              out += coefficient_text(Rational(n.terms[i].coefficient),
                                      n.terms[i].subject);
            }
            out += " >= " + std::to_string(n.bound);
          },
          [&](const Relation& n) {
            if (n.terms.empty()) out += "0";
            for (std::size_t i = 0; i < n.terms.size(); ++i) {
              if (i > 0) out += " + ";
              out += coefficient_text(n.terms[i].coefficient,
                                      n.terms[i].subject);
            }
            out += std::string(" ") + comparison_text(n.op) + " " +
                   to_string(n.bound);
          },
          [&](const Heart& n) {
            out += "wins(" + subject_text(n.target) + ")";
          },
          [&](const Constant& n) { out += n.value ? "true" : "false"; },
          [&](const Not& n) {
            out += '!';
            print(n.operand, out);
          },
          [&](const Box& n) {
            out += "[] ";
            print(n.operand, out);
          },
          [&](const Diamond& n) {
            out += "<> ";
            print(n.operand, out);
          },
          [&](const Diffuse& n) {
            out += "[" + action_text(n.action) + "] ";
            print(n.operand, out);
          },
          [&](const DiffuseDiamond& n) {
            out += "<" + action_text(n.action) + "> ";
            print(n.operand, out);
          },
          [&](const CoalitionBox& n) {
            out += "[<" + coalition_text(n.coalition) + ">] ";
            print(n.operand, out);
          },
          [&](const CoalitionDiamond& n) {
            out += "<[" + coalition_text(n.coalition) + "]> ";
            print(n.operand, out);
          },
          [&](const And&) { print_left_chain<And>(f, " & ", out); },
          [&](const Or&) { print_left_chain<Or>(f, " | ", out); },
          [&](const Iff&) { print_left_chain<Iff>(f, " <-> ", out); },
          [&](const Implies&) {
            // right associative
            out += '(';
            const Formula* cur = &f;
            while (const Implies* n = cur->as<Implies>()) {
              print(n->lhs, out);
              out += " -> ";
              cur = &n->rhs;
            }
            print(*cur, out);
            out += ')';
          },
      },
      f.node().value);
}

}  // namespace

Formula parse_surface(std::string_view src, const ParseOptions& options) {
  return Parser(src, options).parse();
}

Formula parse_formula(std::string_view src, const ParseOptions& options) {
  return desugar(parse_surface(src, options));
}

std::string format_formula(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

}  // namespace dam
