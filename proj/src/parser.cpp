#include "hbergman/parser.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "hbergman/spherical_map.hpp"

namespace hbergman {

namespace {

using Node = std::shared_ptr<const ExprNode>;
using Complex = std::complex<double>;

struct FuncInfo {
  const char* name;
  ExprFunc func;
  int arity;
};

constexpr FuncInfo kFuncs[] = {
    {"sin", ExprFunc::Sin, 1},   {"cos", ExprFunc::Cos, 1}, {"exp", ExprFunc::Exp, 1},
    {"log", ExprFunc::Log, 1},   {"sqrt", ExprFunc::Sqrt, 1}, {"abs", ExprFunc::Abs, 1},
    {"pow", ExprFunc::Pow, 2},
};

Node make(ExprOp op, std::vector<Node> args = {}) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, int dim) : s_(text), dim_(dim) {}

  Node run() {
    skip();
    if (pos_ == s_.size()) fail(ParseError::Kind::Syntax, pos_, "empty expression");
    Node e = expr();
    skip();
    if (pos_ != s_.size()) fail(ParseError::Kind::Syntax, pos_, "unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] static void fail(ParseError::Kind kind, std::size_t at, const std::string& msg) {
    throw ParseError(kind, at, msg);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip();
    if (pos_ >= s_.size()) fail(ParseError::Kind::Syntax, pos_, std::string("expected '") + c + "' at end of input");
    if (s_[pos_] != c) fail(ParseError::Kind::Syntax, pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  Node expr() {
    Node lhs = term();
    while (true) {
      if (accept('+')) {
        lhs = make(ExprOp::Add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(ExprOp::Sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  Node term() {
    Node lhs = factor();
    while (true) {
      if (accept('*')) {
        lhs = make(ExprOp::Mul, {lhs, factor()});
      } else if (accept('/')) {
        lhs = make(ExprOp::Div, {lhs, factor()});
      } else {
        return lhs;
      }
    }
  }

  Node factor() {
    Node base = unary();
    if (accept('^')) return make(ExprOp::Pow, {base, factor()});
    return base;
  }

  Node unary() {
    if (accept('-')) return make(ExprOp::Neg, {unary()});
    return primary();
  }

  Node primary() {
    skip();
    if (pos_ >= s_.size()) fail(ParseError::Kind::Syntax, pos_, "unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Node e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(ParseError::Kind::Syntax, pos_, "unexpected '" + std::string(1, c) + "'");
  }

  Node number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) ++p;
        pos_ = p;
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_) {
      fail(ParseError::Kind::Syntax, start, "malformed number");
    }
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::Number;
    n->number = v;
    return n;
  }

  Node identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string_view name = s_.substr(start, pos_ - start);
    for (const FuncInfo& f : kFuncs) {
      if (name == f.name) return call(f, start);
    }
    if (name == "i") return make(ExprOp::Imag);
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::Var;
    if (name == "r") {
      n->var = VarKind::Radius;
      return n;
    }
    if (name.size() >= 2 && (name[0] == 't' || name[0] == 'x')) {
      int idx = 0;
      const auto res = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
      const bool digits = res.ec == std::errc() && res.ptr == name.data() + name.size() && name[1] != '0';
      if (digits && name[0] == 't' && idx >= 2 && idx <= dim_) {
        n->var = VarKind::Angle;
        n->index = idx;
        return n;
      }
      if (digits && name[0] == 'x' && idx >= 1 && idx <= dim_) {
        n->var = VarKind::Coord;
        n->index = idx;
        return n;
      }
    }
    fail(ParseError::Kind::UnknownIdentifier, start, "unknown identifier '" + std::string(name) + "'");
  }

  Node call(const FuncInfo& f, std::size_t name_at) {
    expect('(');
    std::vector<Node> args;
    skip();
    if (pos_ < s_.size() && s_[pos_] == ')') {
      ++pos_;
    } else {
      args.push_back(expr());
      while (accept(',')) args.push_back(expr());
      expect(')');
    }
    if (static_cast<int>(args.size()) != f.arity) {
      fail(ParseError::Kind::Arity, name_at,
           std::string(f.name) + " takes " + std::to_string(f.arity) + " argument(s), got " +
               std::to_string(args.size()));
    }
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::Call;
    n->func = f.func;
    n->args = std::move(args);
    return n;
  }

  std::string_view s_;
  int dim_;
  std::size_t pos_ = 0;
};

void scan_vars(const ExprNode& n, bool& radius, bool& angles, bool& coords) {
  if (n.op == ExprOp::Var) {
    if (n.var == VarKind::Radius) radius = true;
    if (n.var == VarKind::Angle) angles = true;
    if (n.var == VarKind::Coord) coords = true;
  }
  for (const auto& a : n.args) scan_vars(*a, radius, angles, coords);
}

bool is_real(const Complex& z) { return std::abs(z.imag()) <= 1e-12; }

Complex real_nonneg_arg(const Complex& z, const char* name) {
  if (!is_real(z) || z.real() < 0.0) {
    throw DomainError(std::string(name) + " needs a nonnegative real argument");
  }
  return Complex(z.real(), 0.0);
}

Complex power(const Complex& a, const Complex& b) {
  if (a.imag() == 0.0 && b.imag() == 0.0) {
    if (a.real() >= 0.0 || b.real() == std::round(b.real())) {
      if (a.real() == 0.0 && b.real() < 0.0) throw DomainError("division by zero in power");
      return Complex(std::pow(a.real(), b.real()), 0.0);
    }
  }
  if (a == Complex(0.0)) {
    if (b.real() > 0.0) return Complex(0.0);
    throw DomainError("zero raised to a non-positive power");
  }
  return std::pow(a, b);
}

struct Env {
  const CartesianPoint& x;
  const SphericalPoint* g;
};

Complex eval(const ExprNode& n, const Env& env) {
  switch (n.op) {
    case ExprOp::Number:
      return Complex(n.number, 0.0);
    case ExprOp::Imag:
      return Complex(0.0, 1.0);
    case ExprOp::Var:
      if (n.var == VarKind::Coord) return Complex(env.x[n.index - 1], 0.0);
      if (n.var == VarKind::Radius) return Complex((*env.g)[0], 0.0);
      return Complex((*env.g)[n.index - 1], 0.0);
    case ExprOp::Neg:
      return -eval(*n.args[0], env);
    case ExprOp::Add:
      return eval(*n.args[0], env) + eval(*n.args[1], env);
    case ExprOp::Sub:
      return eval(*n.args[0], env) - eval(*n.args[1], env);
    case ExprOp::Mul:
      return eval(*n.args[0], env) * eval(*n.args[1], env);
    case ExprOp::Div: {
      const Complex num = eval(*n.args[0], env);
      const Complex den = eval(*n.args[1], env);
      if (den == Complex(0.0)) throw DomainError("division by zero");
      return num / den;
    }
    case ExprOp::Pow:
      return power(eval(*n.args[0], env), eval(*n.args[1], env));
    case ExprOp::Call: {
      const Complex a = eval(*n.args[0], env);
      switch (n.func) {
        case ExprFunc::Sin:
          return std::sin(a);
        case ExprFunc::Cos:
          return std::cos(a);
        case ExprFunc::Exp:
          return std::exp(a);
        case ExprFunc::Log: {
          const Complex v = real_nonneg_arg(a, "log");
          if (v.real() == 0.0) throw DomainError("log of zero");
          return Complex(std::log(v.real()), 0.0);
        }
        case ExprFunc::Sqrt:
          return Complex(std::sqrt(real_nonneg_arg(a, "sqrt").real()), 0.0);
        case ExprFunc::Abs:
          return Complex(std::abs(a), 0.0);
        case ExprFunc::Pow:
          return power(a, eval(*n.args[1], env));
      }
    }
  }
  throw std::logic_error("unreachable expression node");
}

const char* func_name(ExprFunc f) {
  for (const FuncInfo& info : kFuncs) {
    if (info.func == f) return info.name;
  }
  return "?";
}

void print_node(const ExprNode& n, std::string& out) {
  switch (n.op) {
    case ExprOp::Number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      out += buf;
      return;
    }
    case ExprOp::Imag:
      out += 'i';
      return;
    case ExprOp::Var:
      if (n.var == VarKind::Radius) {
        out += 'r';
      } else {
        out += n.var == VarKind::Angle ? 't' : 'x';
        out += std::to_string(n.index);
      }
      return;
    case ExprOp::Neg:
      out += "(-";
      print_node(*n.args[0], out);
      out += ')';
      return;
    case ExprOp::Call:
      out += func_name(n.func);
      out += '(';
      for (std::size_t k = 0; k < n.args.size(); ++k) {
        if (k) out += ", ";
        print_node(*n.args[k], out);
      }
      out += ')';
      return;
    default:
      break;
  }
  const char* sym = n.op == ExprOp::Add   ? " + "
                    : n.op == ExprOp::Sub ? " - "
                    : n.op == ExprOp::Mul ? " * "
                    : n.op == ExprOp::Div ? " / "
                                          : " ^ ";
  out += '(';
  print_node(*n.args[0], out);
  out += sym;
  print_node(*n.args[1], out);
  out += ')';
}

}  // namespace

ParseError::ParseError(Kind kind, std::size_t offset, const std::string& what)
    : std::invalid_argument(what + " at offset " + std::to_string(offset)), kind_(kind), offset_(offset) {}

ExprAST::ExprAST(std::shared_ptr<const ExprNode> root, int dim) : root_(std::move(root)), dim_(dim) {
  scan_vars(*root_, uses_radius_, uses_angles_, uses_coords_);
}

std::complex<double> ExprAST::evaluate(const CartesianPoint& x) const {
  if (x.dim() != dim_) throw DimensionError("expression: point dimension differs from the declared one");
  if (uses_spherical()) {
    const SphericalPoint g = to_spherical(x);
    return eval(*root_, Env{x, &g});
  }
  return eval(*root_, Env{x, nullptr});
}

std::string ExprAST::print() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

ExprAST parse_expression(std::string_view text, int dim) {
  if (dim < 2 || dim > kMaxDim) throw DimensionError("parse: dimension outside [2, 8]");
  Parser p(text, dim);
  return ExprAST(p.run(), dim);
}

bool same_structure(const ExprNode& a, const ExprNode& b) {
  if (a.op != b.op || a.args.size() != b.args.size()) return false;
  switch (a.op) {
    case ExprOp::Number:
      if (std::bit_cast<std::uint64_t>(a.number) != std::bit_cast<std::uint64_t>(b.number)) return false;
      break;
    case ExprOp::Var:
      if (a.var != b.var || a.index != b.index) return false;
      break;
    case ExprOp::Call:
      if (a.func != b.func) return false;
      break;
    default:
      break;
  }
  for (std::size_t k = 0; k < a.args.size(); ++k) {
    if (!same_structure(*a.args[k], *b.args[k])) return false;
  }
  return true;
}

}  // namespace hbergman
