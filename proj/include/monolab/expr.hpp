#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "monolab/jet.hpp"

namespace monolab {

/// Syntax error in a profile expression. `offset` is the byte position in
/// the source text where the problem was detected.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation left the real domain of a builtin (log of a non-positive
/// number, division by zero, ...). `subexpression` is the printed form of
/// the offending node.
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, std::string subexpression);
  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

enum class Builtin { Sqrt, Exp, Log, Sin, Cos, Tan, Sinh, Cosh, Tanh, Atan };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

namespace ast {
struct Number {
  double value;
};
struct Variable {};
struct NamedConstant {
  std::string name;  // "pi" or "e"
  double value;
};
struct Negate {
  ExprPtr operand;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs, rhs;
};
struct Call {
  Builtin fn;
  ExprPtr arg;
};
}  // namespace ast

struct ExprNode {
  std::variant<ast::Number, ast::Variable, ast::NamedConstant, ast::Negate,
               ast::Binary, ast::Call>
      node;
  bool depends_on_r = false;
};

/// Immutable parsed expression in the single variable `r`.
///
/// Grammar (precedence high to low): `^` (right associative), unary minus,
/// `*` `/`, `+` `-`. Identifiers are `r`, the constants `pi` and `e`, and the
/// functions sqrt, exp, log, sin, cos, tan, sinh, cosh, tanh, atan.
/// A `^` whose exponent is an r-free integer accepts any base; otherwise the
/// base must be positive.
class Expr {
 public:
  static Expr parse(std::string_view text);

  Jet2 eval(double r) const;
  double value(double r) const { return eval(r).value; }

  /// Fully parenthesized text that parses back to a structurally equal tree.
  std::string to_string() const;

  const ExprNode& root() const { return *root_; }
  bool depends_on_r() const { return root_->depends_on_r; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(ExprPtr root) : root_(std::move(root)) {}
  ExprPtr root_;
};

}  // namespace monolab
