#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "utm/errors.hpp"
#include "utm/types.hpp"

namespace utm::cli {

class ExpressionError : public Error {
 public:
  ExpressionError(const std::string& message, std::string text, size_t column);
  const std::string& text() const { return text_; }
  size_t column() const { return column_; }  // 0-based offset into text()
  // Source line with a caret under the offending column.
  std::string caret() const;

 private:
  std::string text_;
  size_t column_;
};

struct ExprNode;

// Complex arithmetic over x and t. Grammar:
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | '+' unary | power
//   power  := atom ('^' unary)?
//   atom   := number ['i'] | 'i' | 'pi' | 'x' | 't' | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | exp | tanh | sqrt | abs | re | im
class Expression {
 public:
  Expression();
  static Expression parse(std::string_view text);
  static Expression constant(cplx value);

  cplx operator()(double x, double t = 0.0) const;
  bool depends_on_x() const;
  bool depends_on_t() const;
  // Canonical form; parse(print()) prints identically and evaluates bit-equal.
  std::string print() const;
  const std::string& source() const { return source_; }

 private:
  std::shared_ptr<const ExprNode> root_;
  std::string source_;
};

}  // namespace utm::cli
