#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hbergman/geometry.hpp"

namespace hbergman {

enum class ExprOp { Number, Imag, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class ExprFunc { Sin, Cos, Exp, Log, Sqrt, Abs, Pow };

/// Variable slots: Radius is r, Angle is t_{index} (2..n), Coord is x_{index} (1..n).
enum class VarKind { Radius, Angle, Coord };

struct ExprNode {
  ExprOp op = ExprOp::Number;
  double number = 0.0;
  VarKind var = VarKind::Radius;
  int index = 0;
  ExprFunc func = ExprFunc::Sin;
  std::vector<std::shared_ptr<const ExprNode>> args;
};

class ParseError : public std::invalid_argument {
 public:
  enum class Kind { Syntax, UnknownIdentifier, Arity };
  ParseError(Kind kind, std::size_t offset, const std::string& what);
  [[nodiscard]] Kind kind() const { return kind_; }
  /// Byte offset into the source text where the problem starts.
  [[nodiscard]] std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

/// Immutable parsed expression for a fixed dimension.
class ExprAST {
 public:
  ExprAST() = default;
  ExprAST(std::shared_ptr<const ExprNode> root, int dim);

  [[nodiscard]] const ExprNode& root() const { return *root_; }
  [[nodiscard]] int dim() const { return dim_; }
  /// Whether the value depends on x only through |x|.
  [[nodiscard]] bool radial_only() const { return !uses_angles_ && !uses_coords_; }
  [[nodiscard]] bool uses_spherical() const { return uses_radius_ || uses_angles_; }

  /// Value at x. Throws DomainError for log/sqrt off the nonnegative reals
  /// (imaginary part beyond 1e-12), log(0), and division by zero.
  [[nodiscard]] std::complex<double> evaluate(const CartesianPoint& x) const;

  /// Canonical fully parenthesized text; parse(print()) rebuilds the same tree.
  [[nodiscard]] std::string print() const;

 private:
  std::shared_ptr<const ExprNode> root_;
  int dim_ = 0;
  bool uses_radius_ = false;
  bool uses_angles_ = false;
  bool uses_coords_ = false;
};

/// expr := term (('+'|'-') term)*
/// term := factor (('*'|'/') factor)*
/// factor := unary ('^' factor)?
/// unary := '-' unary | primary
/// primary := number | 'i' | var | func '(' args ')' | '(' expr ')'
ExprAST parse_expression(std::string_view text, int dim);

/// Structural equality (numbers compared bitwise).
bool same_structure(const ExprNode& a, const ExprNode& b);

}  // namespace hbergman
