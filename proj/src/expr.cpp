#include "monolab/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace monolab {

ParseError::ParseError(const std::string& what, std::size_t offset)
    : std::runtime_error(what + " at offset " + std::to_string(offset)),
      offset_(offset) {}

DomainError::DomainError(const std::string& what, std::string subexpression)
    : std::runtime_error(what + " in '" + subexpression + "'"),
      subexpression_(std::move(subexpression)) {}

namespace {

struct BuiltinName {
  std::string_view name;
  Builtin fn;
};

constexpr std::array<BuiltinName, 10> kBuiltins{{
    {"sqrt", Builtin::Sqrt},
    {"exp", Builtin::Exp},
    {"log", Builtin::Log},
    {"sin", Builtin::Sin},
    {"cos", Builtin::Cos},
    {"tan", Builtin::Tan},
    {"sinh", Builtin::Sinh},
    {"cosh", Builtin::Cosh},
    {"tanh", Builtin::Tanh},
    {"atan", Builtin::Atan},
}};

std::string_view builtin_name(Builtin fn) {
  for (const auto& b : kBuiltins)
    if (b.fn == fn) return b.name;
  return "?";
}

ExprPtr make(decltype(ExprNode::node) node, bool depends_on_r) {
  auto p = std::make_shared<ExprNode>();
  p->node = std::move(node);
  p->depends_on_r = depends_on_r;
  return p;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    ExprPtr e = parse_sum();
    skip_space();
    if (pos_ != text_.size()) {
      if (text_[pos_] == ')')
        throw ParseError("unbalanced parentheses: unexpected ')'", pos_);
      throw ParseError(std::string("unexpected character '") + text_[pos_] + "'",
                       pos_);
    }
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr parse_sum() {
    ExprPtr lhs = parse_product();
    for (;;) {
      BinaryOp op;
      if (accept('+'))
        op = BinaryOp::Add;
      else if (accept('-'))
        op = BinaryOp::Sub;
      else
        return lhs;
      ExprPtr rhs = parse_product();
      const bool dep = lhs->depends_on_r || rhs->depends_on_r;
      lhs = make(ast::Binary{op, lhs, rhs}, dep);
    }
  }

  ExprPtr parse_product() {
    ExprPtr lhs = parse_unary();
    for (;;) {
      BinaryOp op;
      if (accept('*'))
        op = BinaryOp::Mul;
      else if (accept('/'))
        op = BinaryOp::Div;
      else
        return lhs;
      ExprPtr rhs = parse_unary();
      const bool dep = lhs->depends_on_r || rhs->depends_on_r;
      lhs = make(ast::Binary{op, lhs, rhs}, dep);
    }
  }

  ExprPtr parse_unary() {
    if (accept('-')) {
      ExprPtr operand = parse_unary();
      const bool dep = operand->depends_on_r;
      return make(ast::Negate{operand}, dep);
    }
    return parse_power();
  }

  // `^` binds tighter than unary minus on its left, and its right operand
  // may itself carry a sign: 2^-1, -2^2 = -(2^2), 2^3^2 = 2^(3^2).
  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    if (accept('^')) {
      ExprPtr exponent = parse_unary();
      const bool dep = base->depends_on_r || exponent->depends_on_r;
      return make(ast::Binary{BinaryOp::Pow, base, exponent}, dep);
    }
    return base;
  }

  ExprPtr parse_primary() {
    skip_space();
    if (pos_ == text_.size()) throw ParseError("empty operand", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      const std::size_t open = pos_++;
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ')')
        throw ParseError("empty operand", pos_);
      ExprPtr inner = parse_sum();
      if (!accept(')'))
        throw ParseError("unbalanced parentheses: '(' opened at offset " +
                             std::to_string(open) + " is not closed",
                         pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_identifier();
    if (c == ')') throw ParseError("empty operand", pos_);
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  ExprPtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
        ++pos_;
      if (pos_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_])))
        digits();
      else
        pos_ = save;  // bare "e" after digits is not an exponent
    }
    double value = 0.0;
    const auto* first = text_.data() + start;
    const auto* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value))
      throw ParseError("malformed number '" +
                           std::string(text_.substr(start, pos_ - start)) + "'",
                       start);
    return make(ast::Number{value}, false);
  }

  ExprPtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    const std::string_view id = text_.substr(start, pos_ - start);
    if (id == "r") return make(ast::Variable{}, true);
    if (id == "pi") return make(ast::NamedConstant{"pi", std::numbers::pi}, false);
    if (id == "e") return make(ast::NamedConstant{"e", std::numbers::e}, false);
    for (const auto& b : kBuiltins) {
      if (b.name != id) continue;
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != '(')
        throw ParseError("function '" + std::string(id) + "' needs '('", pos_);
      const std::size_t open = pos_++;
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ')')
        throw ParseError("empty operand", pos_);
      ExprPtr arg = parse_sum();
      if (!accept(')'))
        throw ParseError("unbalanced parentheses: '(' opened at offset " +
                             std::to_string(open) + " is not closed",
                         pos_);
      const bool dep = arg->depends_on_r;
      return make(ast::Call{b.fn, arg}, dep);
    }
    throw ParseError("unknown identifier '" + std::string(id) + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void print(const ExprNode& n, std::string& out) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ast::Number>) {
          std::array<char, 64> buf{};
          auto [ptr, ec] =
              std::to_chars(buf.data(), buf.data() + buf.size(), v.value);
          out.append(buf.data(), ptr);
        } else if constexpr (std::is_same_v<T, ast::Variable>) {
          out += 'r';
        } else if constexpr (std::is_same_v<T, ast::NamedConstant>) {
          out += v.name;
        } else if constexpr (std::is_same_v<T, ast::Negate>) {
          out += "(-";
          print(*v.operand, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, ast::Binary>) {
          static constexpr std::array<char, 5> ops{'+', '-', '*', '/', '^'};
          out += '(';
          print(*v.lhs, out);
          out += ' ';
          out += ops[static_cast<int>(v.op)];
          out += ' ';
          print(*v.rhs, out);
          out += ')';
        } else {
          out += builtin_name(v.fn);
          out += '(';
          print(*v.arg, out);
          out += ')';
        }
      },
      n.node);
}

std::string print(const ExprNode& n) {
  std::string s;
  print(n, s);
  return s;
}

bool structurally_equal(const ExprNode& a, const ExprNode& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& va) {
        using T = std::decay_t<decltype(va)>;
        const auto& vb = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, ast::Number>) {
          return va.value == vb.value;
        } else if constexpr (std::is_same_v<T, ast::Variable>) {
          return true;
        } else if constexpr (std::is_same_v<T, ast::NamedConstant>) {
          return va.name == vb.name;
        } else if constexpr (std::is_same_v<T, ast::Negate>) {
          return structurally_equal(*va.operand, *vb.operand);
        } else if constexpr (std::is_same_v<T, ast::Binary>) {
          return va.op == vb.op && structurally_equal(*va.lhs, *vb.lhs) &&
                 structurally_equal(*va.rhs, *vb.rhs);
        } else {
          return va.fn == vb.fn && structurally_equal(*va.arg, *vb.arg);
        }
      },
      a.node);
}

Jet2 eval_node(const ExprNode& n, double r);

Jet2 eval_pow(const ExprNode& self, const ast::Binary& b, double r) {
  const Jet2 base = eval_node(*b.lhs, r);
  const Jet2 exponent = eval_node(*b.rhs, r);
  if (!b.rhs->depends_on_r && std::nearbyint(exponent.value) == exponent.value &&
      std::abs(exponent.value) < 1e9) {
    const int m = static_cast<int>(exponent.value);
    if (m < 0 && base.value == 0.0)
      throw DomainError("division by zero (negative power of zero)", print(self));
    return pow_int(base, m);
  }
  if (!(base.value > 0.0))
    throw DomainError("non-integer power of a non-positive base", print(self));
  return pow(base, exponent);
}

Jet2 eval_call(const ExprNode& self, const ast::Call& c, double r) {
  const Jet2 u = eval_node(*c.arg, r);
  switch (c.fn) {
    case Builtin::Sqrt:
      if (u.value < 0.0)
        throw DomainError("sqrt of negative argument", print(self));
      if (u.value == 0.0) {
        if (u.d1 == 0.0 && u.d2 == 0.0) return Jet2::constant(0.0);
        throw DomainError("sqrt is not differentiable at 0", print(self));
      }
      return sqrt(u);
    case Builtin::Exp:
      return exp(u);
    case Builtin::Log:
      if (!(u.value > 0.0))
        throw DomainError("log of non-positive argument", print(self));
      return log(u);
    case Builtin::Sin:
      return sin(u);
    case Builtin::Cos:
      return cos(u);
    case Builtin::Tan:
      if (std::cos(u.value) == 0.0)
        throw DomainError("tan at a pole", print(self));
      return tan(u);
    case Builtin::Sinh:
      return sinh(u);
    case Builtin::Cosh:
      return cosh(u);
    case Builtin::Tanh:
      return tanh(u);
    case Builtin::Atan:
      return atan(u);
  }
  return u;
}

Jet2 eval_node(const ExprNode& n, double r) {
  return std::visit(
      [&](const auto& v) -> Jet2 {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ast::Number>) {
          return Jet2::constant(v.value);
        } else if constexpr (std::is_same_v<T, ast::Variable>) {
          return Jet2::variable(r);
        } else if constexpr (std::is_same_v<T, ast::NamedConstant>) {
          return Jet2::constant(v.value);
        } else if constexpr (std::is_same_v<T, ast::Negate>) {
          return -eval_node(*v.operand, r);
        } else if constexpr (std::is_same_v<T, ast::Binary>) {
          switch (v.op) {
            case BinaryOp::Add:
              return eval_node(*v.lhs, r) + eval_node(*v.rhs, r);
            case BinaryOp::Sub:
              return eval_node(*v.lhs, r) - eval_node(*v.rhs, r);
            case BinaryOp::Mul:
              return eval_node(*v.lhs, r) * eval_node(*v.rhs, r);
            case BinaryOp::Div: {
              const Jet2 num = eval_node(*v.lhs, r);
              const Jet2 den = eval_node(*v.rhs, r);
              if (den.value == 0.0)
                throw DomainError("division by zero", print(n));
              return num / den;
            }
            case BinaryOp::Pow:
              return eval_pow(n, v, r);
          }
          return {};
        } else {
          const Jet2 out = eval_call(n, v, r);
          if (!std::isfinite(out.value))
            throw DomainError("non-finite result", print(n));
          return out;
        }
      },
      n.node);
}

}  // namespace

Expr Expr::parse(std::string_view text) { return Expr(Parser(text).parse()); }

Jet2 Expr::eval(double r) const { return eval_node(*root_, r); }

std::string Expr::to_string() const { return print(*root_); }

bool operator==(const Expr& a, const Expr& b) {
  return structurally_equal(*a.root_, *b.root_);
}

}  // namespace monolab
