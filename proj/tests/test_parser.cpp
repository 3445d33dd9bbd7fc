#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hbergman/parser.hpp"

using namespace hbergman;

namespace {

using Complex = std::complex<double>;

Complex value_of(const char* text, CartesianPoint x = CartesianPoint{0.1, 0.2}) {
  return parse_expression(text, x.dim()).evaluate(x);
}

std::size_t error_offset(const char* text, ParseError::Kind* kind = nullptr) {
  try {
    parse_expression(text, 3);
  } catch (const ParseError& e) {
    if (kind) *kind = e.kind();
    return e.offset();
  }
  return std::string::npos;
}

// Random tree generator for round trips.
std::shared_ptr<const ExprNode> random_tree(std::mt19937_64& rng, int depth, int dim) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
  auto n = std::make_shared<ExprNode>();
  const int c = pick(rng);
  if (c == 0) {
    n->op = ExprOp::Number;
    std::uniform_real_distribution<double> u(0.0, 100.0);
    n->number = std::uniform_int_distribution<int>(0, 1)(rng) ? std::floor(u(rng)) : u(rng) * 1e-3;
  } else if (c == 1) {
    n->op = ExprOp::Imag;
  } else if (c == 2) {
    n->op = ExprOp::Var;
    const int v = std::uniform_int_distribution<int>(0, 2)(rng);
    n->var = static_cast<VarKind>(v);
    n->index = v == 0 ? 0 : v == 1 ? std::uniform_int_distribution<int>(2, dim)(rng)
                                   : std::uniform_int_distribution<int>(1, dim)(rng);
  } else if (c == 3) {
    n->op = ExprOp::Neg;
    n->args = {random_tree(rng, depth - 1, dim)};
  } else if (c <= 8) {
    n->op = static_cast<ExprOp>(static_cast<int>(ExprOp::Add) + (c - 4));
    n->args = {random_tree(rng, depth - 1, dim), random_tree(rng, depth - 1, dim)};
  } else {
    n->op = ExprOp::Call;
    n->func = static_cast<ExprFunc>(std::uniform_int_distribution<int>(0, 6)(rng));
    n->args = {random_tree(rng, depth - 1, dim)};
    if (n->func == ExprFunc::Pow) n->args.push_back(random_tree(rng, depth - 1, dim));
  }
  return n;
}

}  // namespace

TEST_CASE("grammar and precedence") {
  CHECK(value_of("1") == Complex(1.0));
  CHECK(value_of("2^3^2") == Complex(512.0));
  CHECK(value_of("2*3+4") == Complex(10.0));
  CHECK(value_of("2+3*4") == Complex(14.0));
  CHECK(value_of("(2+3)*4") == Complex(20.0));
  CHECK(value_of("8/4/2") == Complex(1.0));
  CHECK(value_of("7-2-1") == Complex(4.0));
  // unary minus binds tighter than ^
  CHECK(value_of("-2^2") == Complex(4.0));
  CHECK(value_of("2^-1") == Complex(0.5));
  CHECK(value_of("pow(2, 10)") == Complex(1024.0));
  CHECK(value_of("1.5e2") == Complex(150.0));
  const ExprAST e = parse_expression("exp(i*3.14159*r)", 2);
  const ExprNode& root = e.root();
  CHECK(root.op == ExprOp::Call);
  CHECK(root.func == ExprFunc::Exp);
  const ExprNode& mul = *root.args[0];
  CHECK(mul.op == ExprOp::Mul);
  CHECK(mul.args[0]->op == ExprOp::Mul);
  CHECK(mul.args[0]->args[0]->op == ExprOp::Imag);
  CHECK(mul.args[0]->args[1]->number == 3.14159);
  CHECK(mul.args[1]->op == ExprOp::Var);
  CHECK(mul.args[1]->var == VarKind::Radius);
  CHECK(e.radial_only());
  CHECK_FALSE(parse_expression("x1 + t2", 3).radial_only());
}

TEST_CASE("evaluation examples") {
  CHECK(std::abs(value_of("r", CartesianPoint{0.0, 0.3}) - 0.3) < 1e-15);
  CHECK(std::abs(value_of("x1 + i*x2") - Complex(0.1, 0.2)) < 1e-15);
  std::mt19937_64 rng(0x5EED);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  const ExprAST id = parse_expression("sin(t2)^2 + cos(t2)^2", 3);
  for (int s = 0; s < 100; ++s) {
    const CartesianPoint x{u(rng), u(rng), u(rng)};
    CHECK(std::abs(id.evaluate(x) - 1.0) < 1e-14);
  }
  CHECK_THROWS_AS(value_of("log(-1)"), DomainError);
  CHECK_THROWS_AS(value_of("sqrt(i)"), DomainError);
  CHECK_THROWS_AS(value_of("1/(x1-x1)"), DomainError);
  CHECK_THROWS_AS(value_of("log(0*x1)"), DomainError);
  CHECK(std::abs(value_of("exp(i*3.141592653589793)") + 1.0) < 1e-15);
  CHECK_THROWS_AS(parse_expression("x1", 2).evaluate(CartesianPoint{0.1, 0.1, 0.1}), DimensionError);
}

TEST_CASE("malformed inputs report exact offsets") {
  ParseError::Kind kind{};
  CHECK(error_offset("", &kind) == 0);
  CHECK(kind == ParseError::Kind::Syntax);
  CHECK(error_offset("1 +") == 3);
  CHECK(error_offset("(1 + 2") == 6);
  CHECK(error_offset("1 + * 2") == 4);
  CHECK(error_offset("2 3") == 2);
  CHECK(error_offset("foo(1)", &kind) == 0);
  CHECK(kind == ParseError::Kind::UnknownIdentifier);
  CHECK(error_offset("x1 + x4", &kind) == 5);
  CHECK(kind == ParseError::Kind::UnknownIdentifier);
  CHECK(error_offset("r + t1", &kind) == 4);
  CHECK(error_offset("1 + pow(2)", &kind) == 4);
  CHECK(kind == ParseError::Kind::Arity);
  CHECK(error_offset("sin(1, 2)", &kind) == 0);
  CHECK(kind == ParseError::Kind::Arity);
  CHECK(error_offset("3 $ 4", &kind) == 2);
  CHECK(kind == ParseError::Kind::Syntax);
  CHECK(error_offset("sin 1") == 4);
}

TEST_CASE("print and parse round trip") {
  std::mt19937_64 rng(0x5EED);
  for (int s = 0; s < 1000; ++s) {
    const int dim = std::uniform_int_distribution<int>(2, 4)(rng);
    const ExprAST ast(random_tree(rng, 5, dim), dim);
    const ExprAST back = parse_expression(ast.print(), dim);
    CHECK(same_structure(ast.root(), back.root()));
    CHECK(back.print() == ast.print());
  }
}

TEST_CASE("evaluation is bit-stable") {
  const ExprAST e = parse_expression("exp(i*pow(r, 2)/(1-r)) * sin(t3) + x2^3", 3);
  const CartesianPoint x{0.2, -0.4, 0.3};
  const Complex a = e.evaluate(x);
  const Complex b = e.evaluate(x);
  CHECK(std::bit_cast<std::uint64_t>(a.real()) == std::bit_cast<std::uint64_t>(b.real()));
  CHECK(std::bit_cast<std::uint64_t>(a.imag()) == std::bit_cast<std::uint64_t>(b.imag()));
}
