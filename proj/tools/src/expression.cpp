#include "utm_cli/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

namespace utm::cli {

enum class Op { Number, X, T, Pi, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class Fn { Sin, Cos, Exp, Tanh, Sqrt, Abs, Re, Im };

struct ExprNode {
  Op op = Op::Number;
  cplx value;  // Number
  Fn fn = Fn::Sin;
  std::shared_ptr<const ExprNode> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

constexpr std::array<std::pair<const char*, Fn>, 8> kFunctions{{{"sin", Fn::Sin},
                                                                 {"cos", Fn::Cos},
                                                                 {"exp", Fn::Exp},
                                                                 {"tanh", Fn::Tanh},
                                                                 {"sqrt", Fn::Sqrt},
                                                                 {"abs", Fn::Abs},
                                                                 {"re", Fn::Re},
                                                                 {"im", Fn::Im}}};

const char* fn_name(Fn f) {
  for (auto& [name, id] : kFunctions)
    if (id == f) return name;
  return "?";
}

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr number(cplx v) {
  auto n = std::make_shared<ExprNode>();
  n->value = v;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  NodePtr run() {
    NodePtr e = expr();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { fail_at(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, size_t at) const {
    throw ExpressionError(what, std::string(s_), at);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (eat('+'))
        lhs = make(Op::Add, lhs, term());
      else if (eat('-'))
        lhs = make(Op::Sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (eat('*'))
        lhs = make(Op::Mul, lhs, unary());
      else if (eat('/'))
        lhs = make(Op::Div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Op::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (eat('^')) return make(Op::Pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const size_t start = pos_;
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return literal();
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string_view id = s_.substr(start, pos_ - start);
      if (id == "x") return make(Op::X);
      if (id == "t") return make(Op::T);
      if (id == "pi") return make(Op::Pi);
      if (id == "i") return number(cplx(0.0, 1.0));
      for (auto& [name, f] : kFunctions)
        if (id == name) {
          if (!eat('(')) fail("expected '(' after " + std::string(id));
          auto n = std::make_shared<ExprNode>();
          n->op = Op::Call;
          n->fn = f;
          n->a = expr();
          if (!eat(')')) fail("expected ')'");
          return n;
        }
      fail_at("unknown identifier '" + std::string(id) + "'", start);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr literal() {
    const size_t start = pos_;
    auto digits = [&] {
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        digits();
      else
        pos_ = save;
    }
    double v = 0.0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_) fail_at("malformed number", start);
    if (!std::isfinite(v)) fail_at("number out of range", start);
    const bool ident_next = pos_ + 1 < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])) ||
                                                     s_[pos_ + 1] == '_');
    if (pos_ < s_.size() && s_[pos_] == 'i' && !ident_next) {
      ++pos_;
      return number(cplx(0.0, v));
    }
    if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      fail("expected an operator after the number");
    return number(cplx(v, 0.0));
  }

  std::string_view s_;
  size_t pos_ = 0;
};

cplx ipow(cplx z, long n) {
  bool inv = n < 0;
  unsigned long m = static_cast<unsigned long>(inv ? -n : n);
  cplx acc = 1.0;
  while (m) {
    if (m & 1) acc *= z;
    z *= z;
    m >>= 1;
  }
  return inv ? 1.0 / acc : acc;
}

cplx eval(const ExprNode& n, double x, double t) {
  switch (n.op) {
    case Op::Number: return n.value;
    case Op::X: return x;
    case Op::T: return t;
    case Op::Pi: return pi;
    case Op::Neg: return -eval(*n.a, x, t);
    case Op::Add: return eval(*n.a, x, t) + eval(*n.b, x, t);
    case Op::Sub: return eval(*n.a, x, t) - eval(*n.b, x, t);
    case Op::Mul: return eval(*n.a, x, t) * eval(*n.b, x, t);
    case Op::Div: return eval(*n.a, x, t) / eval(*n.b, x, t);
    case Op::Pow: {
      cplx b = eval(*n.a, x, t), e = eval(*n.b, x, t);
      if (e.imag() == 0.0 && e.real() == std::round(e.real()) && std::abs(e.real()) <= 64.0)
        return ipow(b, static_cast<long>(e.real()));
      if (b.imag() == 0.0 && e.imag() == 0.0 && b.real() >= 0.0) return std::pow(b.real(), e.real());
      if (b.imag() == 0.0) b = cplx(b.real(), 0.0);  // no -0 branch flip
      return std::pow(b, e);
    }
    case Op::Call: {
      cplx v = eval(*n.a, x, t);
      switch (n.fn) {
        case Fn::Sin: return v.imag() == 0.0 ? cplx(std::sin(v.real())) : std::sin(v);
        case Fn::Cos: return v.imag() == 0.0 ? cplx(std::cos(v.real())) : std::cos(v);
        case Fn::Exp: return v.imag() == 0.0 ? cplx(std::exp(v.real())) : std::exp(v);
        case Fn::Tanh: return v.imag() == 0.0 ? cplx(std::tanh(v.real())) : std::tanh(v);
        case Fn::Sqrt:
          // Real arguments take the principal branch whatever the sign of a zero imaginary part.
          if (v.imag() == 0.0) return v.real() >= 0.0 ? cplx(std::sqrt(v.real())) : cplx(0.0, std::sqrt(-v.real()));
          return std::sqrt(v);
        case Fn::Abs: return std::abs(v);
        case Fn::Re: return v.real();
        case Fn::Im: return v.imag();
      }
    }
  }
  return 0.0;
}

bool depends(const ExprNode& n, Op var) {
  if (n.op == var) return true;
  return (n.a && depends(*n.a, var)) || (n.b && depends(*n.b, var));
}

int precedence(const ExprNode& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

std::string real_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print(const ExprNode& n, std::string& out);

void print_wrapped(const ExprNode& n, bool paren, std::string& out) {
  if (paren) out += '(';
  print(n, out);
  if (paren) out += ')';
}

void print(const ExprNode& n, std::string& out) {
  const int p = precedence(n);
  switch (n.op) {
    case Op::Number:
      if (n.value.imag() == 0.0) {
        out += real_text(n.value.real());
      } else if (n.value.imag() == 1.0) {
        out += 'i';
      } else {
        out += real_text(n.value.imag());
        out += 'i';
      }
      return;
    case Op::X: out += 'x'; return;
    case Op::T: out += 't'; return;
    case Op::Pi: out += "pi"; return;
    case Op::Neg:
      out += '-';
      print_wrapped(*n.a, precedence(*n.a) < 3, out);
      return;
    case Op::Pow:
      print_wrapped(*n.a, precedence(*n.a) <= 4, out);
      out += '^';
      print_wrapped(*n.b, precedence(*n.b) < 3, out);
      return;
    case Op::Call:
      out += fn_name(n.fn);
      out += '(';
      print(*n.a, out);
      out += ')';
      return;
    default: {
      const char* sym = n.op == Op::Add ? " + " : n.op == Op::Sub ? " - " : n.op == Op::Mul ? "*" : "/";
      print_wrapped(*n.a, precedence(*n.a) < p, out);
      out += sym;
      print_wrapped(*n.b, precedence(*n.b) <= p, out);
    }
  }
}

}  // namespace

ExpressionError::ExpressionError(const std::string& message, std::string text, size_t column)
    : Error(ErrorKind::Config, "parse error at column " + std::to_string(column + 1) + ": " + message),
      text_(std::move(text)),
      column_(column) {}

std::string ExpressionError::caret() const { return text_ + "\n" + std::string(column_, ' ') + "^"; }

Expression::Expression() : root_(number(0.0)), source_("0") {}

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.root_ = Parser(text).run();
  e.source_ = std::string(text);
  return e;
}

Expression Expression::constant(cplx value) {
  // Literals stay non-negative so that the printed form reparses to the same tree.
  Expression e;
  const double re = value.real(), im = value.imag();
  NodePtr r = number(std::abs(re));
  if (std::signbit(re)) r = make(Op::Neg, r);
  if (im == 0.0) {
    e.root_ = r;
  } else {
    NodePtr j = number(cplx(0.0, std::abs(im)));
    if (re == 0.0)
      e.root_ = std::signbit(im) ? make(Op::Neg, j) : j;
    else
      e.root_ = make(std::signbit(im) ? Op::Sub : Op::Add, r, j);
  }
  e.source_ = e.print();
  return e;
}

cplx Expression::operator()(double x, double t) const { return eval(*root_, x, t); }
bool Expression::depends_on_x() const { return depends(*root_, Op::X); }
bool Expression::depends_on_t() const { return depends(*root_, Op::T); }

std::string Expression::print() const {
  std::string out;
  utm::cli::print(*root_, out);
  return out;
}

}  // namespace utm::cli
