#pragma once

// Coefficient expressions in (x, y): a small infix grammar, an immutable AST,
// and evaluation to values or first-order jets.
//
//   expr    := unary (('+' | '-') unary)*
//   unary   := '-' unary | term               (-x*y is -(x*y))
//   term    := factor (('*' | '/') factor)*
//   factor  := '-' factor | power
//   power   := primary ('^' exponent)?
//   exponent:= '-' exponent | power           (right associative)
//   primary := number | 'x' | 'y' | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | tan | exp | log | sqrt | tanh | abs

#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

#include "vekua/errors.hpp"
#include "vekua/format.hpp"
#include "vekua/jet.hpp"

namespace vekua {

enum class Op { Number, VarX, VarY, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Tanh, Abs };

inline constexpr std::array<std::pair<Func, std::string_view>, 8> kFunctions{{
    {Func::Sin, "sin"},
    {Func::Cos, "cos"},
    {Func::Tan, "tan"},
    {Func::Exp, "exp"},
    {Func::Log, "log"},
    {Func::Sqrt, "sqrt"},
    {Func::Tanh, "tanh"},
    {Func::Abs, "abs"},
}};

inline std::string_view func_name(Func f) {
  for (const auto& [func, name] : kFunctions) {
    if (func == f) return name;
  }
  return "?";
}

inline std::optional<Func> func_from_name(std::string_view name) {
  for (const auto& [func, n] : kFunctions) {
    if (n == name) return func;
  }
  return std::nullopt;
}

struct ExprNode;

class Expr {
 public:
  Expr() : Expr(number(0.0)) {}

  static Expr number(double v);
  static Expr x();
  static Expr y();
  static Expr neg(Expr a);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr call(Func f, Expr arg);

  Op op() const noexcept;
  double value() const noexcept;
  Func func() const noexcept;
  const Expr& lhs() const noexcept;
  const Expr& rhs() const noexcept;

  /// True when the tree contains no variable.
  bool is_constant() const noexcept;

  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  Op op = Op::Number;
  double value = 0.0;
  Func func = Func::Sin;
  std::optional<Expr> lhs;
  std::optional<Expr> rhs;
  bool constant = true;
};

inline Expr Expr::number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Number;
  n->value = v;
  return Expr(std::move(n));
}

inline Expr Expr::x() {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::VarX;
  n->constant = false;
  return Expr(std::move(n));
}

inline Expr Expr::y() {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::VarY;
  n->constant = false;
  return Expr(std::move(n));
}

inline Expr Expr::neg(Expr a) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Neg;
  n->constant = a.is_constant();
  n->lhs = std::move(a);
  return Expr(std::move(n));
}

inline Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (op != Op::Add && op != Op::Sub && op != Op::Mul && op != Op::Div && op != Op::Pow) {
    throw std::invalid_argument("Expr::binary: not a binary operator");
  }
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->constant = lhs.is_constant() && rhs.is_constant();
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::move(n));
}

inline Expr Expr::call(Func f, Expr arg) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Call;
  n->func = f;
  n->constant = arg.is_constant();
  n->lhs = std::move(arg);
  return Expr(std::move(n));
}

inline Op Expr::op() const noexcept { return node_->op; }
inline double Expr::value() const noexcept { return node_->value; }
inline Func Expr::func() const noexcept { return node_->func; }
inline const Expr& Expr::lhs() const noexcept { return *node_->lhs; }
inline const Expr& Expr::rhs() const noexcept { return *node_->rhs; }
inline bool Expr::is_constant() const noexcept { return node_->constant; }

inline bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::Number:
      return a.value() == b.value();
    case Op::VarX:
    case Op::VarY:
      return true;
    case Op::Neg:
      return a.lhs() == b.lhs();
    case Op::Call:
      return a.func() == b.func() && a.lhs() == b.lhs();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

inline Expr operator+(Expr a, Expr b) { return Expr::binary(Op::Add, std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return Expr::binary(Op::Sub, std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return Expr::binary(Op::Mul, std::move(a), std::move(b)); }
inline Expr operator/(Expr a, Expr b) { return Expr::binary(Op::Div, std::move(a), std::move(b)); }
inline Expr operator-(Expr a) { return Expr::neg(std::move(a)); }

namespace detail {

inline int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Neg:
      return 2;
    case Op::Mul:
    case Op::Div:
      return 3;
    case Op::Pow:
      return 5;
    case Op::Number:
      return std::signbit(e.value()) ? 0 : 6;
    default:
      return 6;
  }
}

inline void print(const Expr& e, std::string& out);

inline void print_wrapped(const Expr& e, bool parens, std::string& out) {
  if (parens) out += '(';
  print(e, out);
  if (parens) out += ')';
}

inline void print(const Expr& e, std::string& out) {
  switch (e.op()) {
    case Op::Number:
      out += format_double(e.value());
      return;
    case Op::VarX:
      out += 'x';
      return;
    case Op::VarY:
      out += 'y';
      return;
    case Op::Neg:
      out += '-';
      print_wrapped(e.lhs(), precedence(e.lhs()) < 2, out);
      return;
    case Op::Call:
      out += func_name(e.func());
      print_wrapped(e.lhs(), true, out);
      return;
    case Op::Pow:
      print_wrapped(e.lhs(), precedence(e.lhs()) < 6, out);
      out += '^';
      print_wrapped(e.rhs(), precedence(e.rhs()) < 5, out);
      return;
    default: {
      const int p = precedence(e);
      const char* sym = e.op() == Op::Add ? " + " : e.op() == Op::Sub ? " - " : e.op() == Op::Mul ? "*" : "/";
      print_wrapped(e.lhs(), precedence(e.lhs()) < p, out);
      out += sym;
      print_wrapped(e.rhs(), precedence(e.rhs()) <= p, out);
      return;
    }
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(what, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(Op::Add, std::move(lhs), parse_unary());
      } else if (accept('-')) {
        lhs = Expr::binary(Op::Sub, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::neg(parse_unary());
    return parse_term();
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(Op::Mul, std::move(lhs), parse_factor());
      } else if (accept('/')) {
        lhs = Expr::binary(Op::Div, std::move(lhs), parse_factor());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_factor() {
    if (accept('-')) return Expr::neg(parse_factor());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return Expr::binary(Op::Pow, std::move(base), parse_exponent());
    return base;
  }

  Expr parse_exponent() {
    if (accept('-')) return Expr::neg(parse_exponent());
    return parse_power();
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t n = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        pos_ = mark;
        fail("malformed exponent");
      }
    }
    double v = 0.0;
    if (!parse_double(text_.substr(start, pos_ - start), v) || !std::isfinite(v)) {
      pos_ = start;
      fail("number out of range");
    }
    return Expr::number(v);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return Expr::x();
    if (name == "y") return Expr::y();
    const auto f = func_from_name(name);
    if (!f) throw UnknownIdentifier(std::string(name), start);
    if (!accept('(')) fail("expected '(' after " + std::string(name));
    Expr arg = parse_expr();
    if (!accept(')')) fail("expected ')'");
    return Expr::call(*f, std::move(arg));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline double value_of(double v) { return v; }
inline double value_of(const Jet2& j) { return j.value; }

inline bool finite_of(double v) { return std::isfinite(v); }
inline bool finite_of(const Jet2& j) { return j.finite(); }

template <typename T>
T evaluate(const Expr& e, const T& x, const T& y) {
  constexpr bool kJet = std::is_same_v<T, Jet2>;
  using std::abs, std::cos, std::exp, std::log, std::pow, std::sin, std::sqrt, std::tan, std::tanh;

  auto domain = [](const char* what) { return DomainError(what); };

  T r{};
  switch (e.op()) {
    case Op::Number:
      if constexpr (kJet) {
        r = Jet2::constant(e.value());
      } else {
        r = e.value();
      }
      return r;
    case Op::VarX:
      return x;
    case Op::VarY:
      return y;
    case Op::Neg:
      r = -evaluate(e.lhs(), x, y);
      break;
    case Op::Add:
      r = evaluate(e.lhs(), x, y) + evaluate(e.rhs(), x, y);
      break;
    case Op::Sub:
      r = evaluate(e.lhs(), x, y) - evaluate(e.rhs(), x, y);
      break;
    case Op::Mul:
      r = evaluate(e.lhs(), x, y) * evaluate(e.rhs(), x, y);
      break;
    case Op::Div: {
      const T num = evaluate(e.lhs(), x, y);
      const T den = evaluate(e.rhs(), x, y);
      if (value_of(den) == 0.0) throw domain("division by zero");
      r = num / den;
      break;
    }
    case Op::Pow: {
      const T base = evaluate(e.lhs(), x, y);
      const double b = value_of(base);
      if (e.rhs().is_constant()) {
        const double c = evaluate(e.rhs(), 0.0, 0.0);
        if (b < 0.0 && c != std::trunc(c)) throw domain("negative base with non-integer exponent");
        if (b == 0.0 && c < 0.0) throw domain("zero base with negative exponent");
        r = pow(base, c);
      } else {
        if (!(b > 0.0)) throw domain("non-positive base with variable exponent");
        r = pow(base, evaluate(e.rhs(), x, y));
      }
      break;
    }
    case Op::Call: {
      const T a = evaluate(e.lhs(), x, y);
      const double v = value_of(a);
      switch (e.func()) {
        case Func::Sin:
          r = sin(a);
          break;
        case Func::Cos:
          r = cos(a);
          break;
        case Func::Tan:
          r = tan(a);
          break;
        case Func::Exp:
          r = exp(a);
          break;
        case Func::Log:
          if (!(v > 0.0)) throw domain("log of non-positive argument");
          r = log(a);
          break;
        case Func::Sqrt:
          if (v < 0.0) throw domain("sqrt of negative argument");
          if (kJet && v == 0.0) throw domain("sqrt is not differentiable at 0");
          r = sqrt(a);
          break;
        case Func::Tanh:
          r = tanh(a);
          break;
        case Func::Abs:
          if (kJet && v == 0.0) throw domain("abs is not differentiable at 0");
          r = abs(a);
          break;
      }
      break;
    }
  }
  if (!finite_of(r)) throw domain("non-finite result");
  return r;
}

}  // namespace detail

inline std::string Expr::to_string() const {
  std::string out;
  detail::print(*this, out);
  return out;
}

/// Parses an expression. Throws SyntaxError (with offset) or UnknownIdentifier.
inline Expr parse_expr(std::string_view text) { return detail::Parser(text).parse(); }

/// Value at (x, y). Throws DomainError outside the expression's domain.
inline double eval(const Expr& e, double x, double y) { return detail::evaluate<double>(e, x, y); }

/// Value and both first partials at (x, y) by forward-mode propagation.
inline Jet2 eval_jet(const Expr& e, double x, double y) {
  return detail::evaluate<Jet2>(e, Jet2::var_x(x), Jet2::var_y(y));
}

struct Partials {
  double dx = 0.0;
  double dy = 0.0;
};

/// Central-difference partials with step h; independent of eval_jet.
inline Partials fd_partials(const Expr& e, double x, double y, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_partials: step must be positive");
  return {(eval(e, x + h, y) - eval(e, x - h, y)) / (2.0 * h),
          (eval(e, x, y + h) - eval(e, x, y - h)) / (2.0 * h)};
}

}  // namespace vekua
