#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "antiholo/jet.hpp"

namespace antiholo {

/// Syntax/semantic error in expression text. Carries the byte offset plus the
/// derived line/column (1-based) of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, std::size_t offset, int line, int column)
      : std::runtime_error(msg + " at offset " + std::to_string(offset) + " (line " +
                           std::to_string(line) + ", column " + std::to_string(column) + ")"),
        offset_(offset),
        line_(line),
        column_(column) {}

  std::size_t offset() const { return offset_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::size_t offset_;
  int line_;
  int column_;
};

/// Numeric domain error during evaluation; names the offending subexpression.
class EvalDomainError : public std::runtime_error {
 public:
  EvalDomainError(const std::string& what, const std::string& subexpr)
      : std::runtime_error(what + " in subexpression '" + subexpr + "'"),
        subexpr_(subexpr) {}

  const std::string& subexpression() const { return subexpr_; }

 private:
  std::string subexpr_;
};

/// Immutable arithmetic expression over real literals, coordinate variables
/// x1..x{dim}, unary minus, + - * /, integer ^, and sin/cos/exp/log/sqrt/atan.
///
/// Trees are shared, never mutated after construction; evaluation is a pure
/// function of the point, so a single Expr may be evaluated concurrently.
class Expr {
 public:
  enum class Kind { Literal, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
  enum class Func { Sin, Cos, Exp, Log, Sqrt, Atan };

  struct Node {
    Kind kind;
    double literal = 0.0;
    int var = -1;        // 0-based variable index
    int exponent = 0;    // for Pow
    Func func = Func::Sin;
    std::shared_ptr<const Node> a, b;
    std::size_t pos = 0, len = 0;  // source span, when parsed from text
  };

  Expr() = default;

  int dim() const { return dim_; }
  bool valid() const { return root_ != nullptr; }
  const Node& root() const { return *root_; }

  // ---- construction ------------------------------------------------------

  static Expr parse(const std::string& text, int dim);

  static Expr constant(double v, int dim) { return Expr(leaf_literal(v), dim); }

  /// 0-based variable index.
  static Expr variable(int index, int dim) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->var = index;
    return Expr(std::move(n), dim);
  }

  friend Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_literal(0.0)) return b;
    if (b.is_literal(0.0)) return a;
    if (a.is_literal() && b.is_literal())
      return constant(a.root_->literal + b.root_->literal, a.dim_);
    return binary(Kind::Add, a, b);
  }

  friend Expr operator-(const Expr& a, const Expr& b) {
    if (b.is_literal(0.0)) return a;
    if (a.is_literal() && b.is_literal())
      return constant(a.root_->literal - b.root_->literal, a.dim_);
    if (a.is_literal(0.0)) return -b;
    return binary(Kind::Sub, a, b);
  }

  friend Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_literal(0.0) || b.is_literal(0.0)) return constant(0.0, a.dim_);
    if (a.is_literal(1.0)) return b;
    if (b.is_literal(1.0)) return a;
    if (a.is_literal() && b.is_literal())
      return constant(a.root_->literal * b.root_->literal, a.dim_);
    return binary(Kind::Mul, a, b);
  }

  friend Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_literal(1.0)) return a;
    if (a.is_literal(0.0) && !b.is_literal(0.0)) return constant(0.0, a.dim_);
    return binary(Kind::Div, a, b);
  }

  Expr operator-() const {
    if (is_literal()) return constant(-root_->literal, dim_);
    if (root_ && root_->kind == Kind::Neg) return Expr(root_->a, dim_, source_);
    auto n = std::make_shared<Node>();
    n->kind = Kind::Neg;
    n->a = root_;
    return Expr(std::move(n), dim_, source_);
  }

  friend Expr pow(const Expr& a, int e) {
    if (e == 0) return constant(1.0, a.dim_);
    if (e == 1) return a;
    if (a.is_literal()) return constant(std::pow(a.root_->literal, e), a.dim_);
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pow;
    n->exponent = e;
    n->a = a.root_;
    return Expr(std::move(n), a.dim_, a.source_);
  }

  static Expr call(Func f, const Expr& arg) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Call;
    n->func = f;
    n->a = arg.root_;
    return Expr(std::move(n), arg.dim_, arg.source_);
  }

  // ---- evaluation --------------------------------------------------------

  /// Jet of the expression at p, with derivatives up to `order` (0..3).
  Jet eval(const Eigen::VectorXd& p, int order) const {
    assert(valid() && p.size() == dim_);
    return eval_node(*root_, p, order);
  }

  double eval_value(const Eigen::VectorXd& p) const { return eval(p, 0).value(); }

  // ---- inspection --------------------------------------------------------

  std::string to_string() const { return root_ ? render(*root_, 0) : std::string("<empty>"); }

  /// Structural equality (same tree shape, literals compared exactly).
  bool equals(const Expr& other) const {
    if (dim_ != other.dim_) return false;
    return node_equals(root_.get(), other.root_.get());
  }

 private:
  Expr(std::shared_ptr<const Node> root, int dim,
       std::shared_ptr<const std::string> source = nullptr)
      : root_(std::move(root)), dim_(dim), source_(std::move(source)) {}

  static std::shared_ptr<Node> leaf_literal(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Literal;
    n->literal = v;
    return n;
  }

  bool is_literal() const { return root_ && root_->kind == Kind::Literal; }
  bool is_literal(double v) const { return is_literal() && root_->literal == v; }

  static Expr binary(Kind k, const Expr& a, const Expr& b) {
    assert(a.dim_ == b.dim_);
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = a.root_;
    n->b = b.root_;
    return Expr(std::move(n), a.dim_, a.source_ ? a.source_ : b.source_);
  }

  Jet eval_node(const Node& n, const Eigen::VectorXd& p, int order) const {
    switch (n.kind) {
      case Kind::Literal:
        return Jet::constant(dim_, order, n.literal);
      case Kind::Var:
        return Jet::variable(dim_, order, n.var, p[n.var]);
      case Kind::Neg:
        return -eval_node(*n.a, p, order);
      case Kind::Add:
        return eval_node(*n.a, p, order) + eval_node(*n.b, p, order);
      case Kind::Sub:
        return eval_node(*n.a, p, order) - eval_node(*n.b, p, order);
      case Kind::Mul:
        return eval_node(*n.a, p, order) * eval_node(*n.b, p, order);
      case Kind::Div: {
        const Jet num = eval_node(*n.a, p, order);
        const Jet den = eval_node(*n.b, p, order);
        try {
          return num / den;
        } catch (const JetDomainError& e) {
          throw EvalDomainError(e.what(), describe(n));
        }
      }
      case Kind::Pow: {
        const Jet base = eval_node(*n.a, p, order);
        try {
          return pow_int(base, n.exponent);
        } catch (const JetDomainError& e) {
          throw EvalDomainError(e.what(), describe(n));
        }
      }
      case Kind::Call: {
        const Jet u = eval_node(*n.a, p, order);
        try {
          switch (n.func) {
            case Func::Sin: return antiholo::sin(u);
            case Func::Cos: return antiholo::cos(u);
            case Func::Exp: return antiholo::exp(u);
            case Func::Log: return antiholo::log(u);
            case Func::Sqrt: return antiholo::sqrt(u);
            case Func::Atan: return antiholo::atan(u);
          }
        } catch (const JetDomainError& e) {
          throw EvalDomainError(e.what(), describe(n));
        }
      }
    }
    throw std::logic_error("unreachable expression kind");
  }

  /// Source slice if the node was parsed from text, rendered form otherwise.
  std::string describe(const Node& n) const {
    if (source_ && n.len > 0) return source_->substr(n.pos, n.len);
    return render(n, 0);
  }

  static int precedence(Kind k) {
    switch (k) {
      case Kind::Add:
      case Kind::Sub: return 1;
      case Kind::Mul:
      case Kind::Div: return 2;
      case Kind::Neg: return 3;
      case Kind::Pow: return 4;
      default: return 5;
    }
  }

  static std::string render(const Node& n, int parent_prec) {
    const auto wrap = [&](std::string s, int prec) {
      return prec < parent_prec ? "(" + std::move(s) + ")" : std::move(s);
    };
    switch (n.kind) {
      case Kind::Literal: {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", n.literal);
        std::string s(buf);
        return n.literal < 0 ? wrap(std::move(s), 3) : s;
      }
      case Kind::Var:
        return "x" + std::to_string(n.var + 1);
      case Kind::Neg:
        return wrap("-" + render(*n.a, precedence(Kind::Neg) + 1), precedence(Kind::Neg));
      case Kind::Add:
        return wrap(render(*n.a, 1) + " + " + render(*n.b, 2), 1);
      case Kind::Sub:
        return wrap(render(*n.a, 1) + " - " + render(*n.b, 2), 1);
      case Kind::Mul:
        return wrap(render(*n.a, 2) + "*" + render(*n.b, 3), 2);
      case Kind::Div:
        return wrap(render(*n.a, 2) + "/" + render(*n.b, 3), 2);
      case Kind::Pow:
        return wrap(render(*n.a, 5) + "^" + std::to_string(n.exponent), 4);
      case Kind::Call: {
        static const char* names[] = {"sin", "cos", "exp", "log", "sqrt", "atan"};
        return std::string(names[static_cast<int>(n.func)]) + "(" + render(*n.a, 0) + ")";
      }
    }
    return "?";
  }

  static bool node_equals(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
      case Kind::Literal: return a->literal == b->literal;
      case Kind::Var: return a->var == b->var;
      case Kind::Pow:
        return a->exponent == b->exponent && node_equals(a->a.get(), b->a.get());
      case Kind::Call:
        return a->func == b->func && node_equals(a->a.get(), b->a.get());
      case Kind::Neg:
        return node_equals(a->a.get(), b->a.get());
      default:
        return node_equals(a->a.get(), b->a.get()) && node_equals(a->b.get(), b->b.get());
    }
  }

  friend class ExprParser;

  std::shared_ptr<const Node> root_;
  int dim_ = 0;
  std::shared_ptr<const std::string> source_;
};

/// Recursive-descent parser for the expression grammar (see docs/expr-grammar.ebnf):
///
///   expr    = term { ("+" | "-") term }
///   term    = unary { ("*" | "/") unary }
///   unary   = "-" unary | power
///   power   = primary [ "^" integer ]
///   primary = number | variable | function "(" expr ")" | "(" expr ")"
///
/// "+ - * /" associate left; "^" binds tighter than unary minus and takes a
/// (optionally signed) integer literal exponent.
class ExprParser {
 public:
  ExprParser(std::string text, int dim)
      : source_(std::make_shared<std::string>(std::move(text))), dim_(dim) {}

  Expr run() {
    if (source_->empty()) fail("empty expression", 0);
    skip_ws();
    if (pos_ >= source_->size()) fail("empty expression", pos_);
    auto node = parse_expr();
    skip_ws();
    if (pos_ < source_->size()) fail("unexpected trailing input", pos_);
    return Expr(std::move(node), dim_, source_);
  }

 private:
  using NodePtr = std::shared_ptr<const Expr::Node>;

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    int line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < source_->size(); ++i) {
      if ((*source_)[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, at, line, col);
  }

  void skip_ws() {
    while (pos_ < source_->size() && std::isspace(static_cast<unsigned char>((*source_)[pos_])))
      ++pos_;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < source_->size() && (*source_)[pos_] == c;
  }

  bool accept(char c) {
    if (peek_is(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = make_binary(Expr::Kind::Add, lhs, parse_term());
      else if (accept('-'))
        lhs = make_binary(Expr::Kind::Sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = make_binary(Expr::Kind::Mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = make_binary(Expr::Kind::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    skip_ws();
    const std::size_t start = pos_;
    if (accept('-')) {
      NodePtr inner = parse_unary();
      // fold -literal so that "-1" and a built constant(-1) are structurally equal
      if (inner->kind == Expr::Kind::Literal) {
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Kind::Literal;
        n->literal = -inner->literal;
        n->pos = start;
        n->len = pos_ - start;
        return n;
      }
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Kind::Neg;
      n->a = inner;
      n->pos = start;
      n->len = pos_ - start;
      return n;
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) {
      const std::size_t at = pos_;
      auto n = std::make_shared<Expr::Node>();
      n->kind = Expr::Kind::Pow;
      n->exponent = parse_integer_exponent(at);
      n->a = base;
      n->pos = base->pos;
      n->len = pos_ - base->pos;
      if (peek_is('^')) fail("chained '^' is not allowed; parenthesize", pos_);
      return n;
    }
    return base;
  }

  int parse_integer_exponent(std::size_t at) {
    skip_ws();
    bool negative = false;
    if (accept('-'))
      negative = true;
    else
      accept('+');
    skip_ws();
    const std::size_t num_start = pos_;
    while (pos_ < source_->size() && std::isdigit(static_cast<unsigned char>((*source_)[pos_])))
      ++pos_;
    if (pos_ == num_start) fail("'^' requires an integer exponent", at);
    if (pos_ < source_->size() &&
        ((*source_)[pos_] == '.' || (*source_)[pos_] == 'e' || (*source_)[pos_] == 'E'))
      fail("'^' requires an integer exponent", num_start);
    const std::string digits = source_->substr(num_start, pos_ - num_start);
    if (digits.size() > 3) fail("exponent out of range", num_start);
    const int e = std::stoi(digits);
    if (e > 64) fail("exponent out of range", num_start);
    return negative ? -e : e;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= source_->size()) fail("unexpected end of input", pos_);
    const std::size_t start = pos_;
    const char c = (*source_)[pos_];

    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      skip_ws();
      if (!accept(')')) fail("expected ')'", pos_);
      return inner;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();

    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < source_->size() &&
             (std::isalnum(static_cast<unsigned char>((*source_)[end])) || (*source_)[end] == '_'))
        ++end;
      const std::string ident = source_->substr(pos_, end - pos_);
      pos_ = end;

      if (ident.size() >= 2 && ident[0] == 'x' &&
          std::all_of(ident.begin() + 1, ident.end(),
                      [](char d) { return std::isdigit(static_cast<unsigned char>(d)); })) {
        const long index = std::stol(ident.substr(1));
        if (index < 1 || index > dim_)
          fail("variable index out of range (have x1..x" + std::to_string(dim_) + ")", start);
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Kind::Var;
        n->var = static_cast<int>(index - 1);
        n->pos = start;
        n->len = pos_ - start;
        return n;
      }

      static const std::pair<const char*, Expr::Func> funcs[] = {
          {"sin", Expr::Func::Sin},  {"cos", Expr::Func::Cos},   {"exp", Expr::Func::Exp},
          {"log", Expr::Func::Log},  {"sqrt", Expr::Func::Sqrt}, {"atan", Expr::Func::Atan}};
      for (const auto& [name, f] : funcs) {
        if (ident == name) {
          skip_ws();
          if (!accept('(')) fail("expected '(' after function name", pos_);
          NodePtr arg = parse_expr();
          skip_ws();
          if (!accept(')')) fail("expected ')'", pos_);
          auto n = std::make_shared<Expr::Node>();
          n->kind = Expr::Kind::Call;
          n->func = f;
          n->a = arg;
          n->pos = start;
          n->len = pos_ - start;
          return n;
        }
      }
      fail("unknown identifier '" + ident + "'", start);
    }

    fail(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < source_->size() && std::isdigit(static_cast<unsigned char>((*source_)[pos_])))
      ++pos_;
    if (pos_ < source_->size() && (*source_)[pos_] == '.') {
      ++pos_;
      while (pos_ < source_->size() && std::isdigit(static_cast<unsigned char>((*source_)[pos_])))
        ++pos_;
    }
    if (pos_ < source_->size() && ((*source_)[pos_] == 'e' || (*source_)[pos_] == 'E')) {
      std::size_t exp_pos = pos_ + 1;
      if (exp_pos < source_->size() && ((*source_)[exp_pos] == '+' || (*source_)[exp_pos] == '-'))
        ++exp_pos;
      if (exp_pos < source_->size() && std::isdigit(static_cast<unsigned char>((*source_)[exp_pos]))) {
        pos_ = exp_pos;
        while (pos_ < source_->size() && std::isdigit(static_cast<unsigned char>((*source_)[pos_])))
          ++pos_;
      }
    }
    const std::string text = source_->substr(start, pos_ - start);
    if (text == ".") fail("malformed number", start);
    auto n = std::make_shared<Expr::Node>();
    n->kind = Expr::Kind::Literal;
    n->literal = std::stod(text);
    n->pos = start;
    n->len = pos_ - start;
    return n;
  }

  NodePtr make_binary(Expr::Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    n->pos = a->pos;
    n->len = (b->pos + b->len) - a->pos;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  std::shared_ptr<std::string> source_;
  int dim_;
  std::size_t pos_ = 0;
};

inline Expr Expr::parse(const std::string& text, int dim) {
  return ExprParser(text, dim).run();
}

/// Parse expression text over variables x1..x{dim}.
inline Expr parse_expr(const std::string& text, int dim) { return Expr::parse(text, dim); }

/// Evaluate with jet arithmetic: derivatives up to `order` at p.
inline Jet eval_jet(const Expr& e, const Eigen::VectorXd& p, int order) {
  return e.eval(p, order);
}

}  // namespace antiholo
