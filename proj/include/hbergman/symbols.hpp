#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hbergman/boxes.hpp"
#include "hbergman/geometry.hpp"
#include "hbergman/parser.hpp"

namespace hbergman {

enum class ProfileType { Const, Power, Custom };

/// The amplitude f on [1, inf): a constant c, a power x^s, or any positive
/// continuous function (g then comes from cached quadrature; the cache is
/// keyed by label, so distinct functions need distinct labels).
struct Profile {
  ProfileType type = ProfileType::Const;
  double value = 1.0;
  double exponent = 0.0;
  std::function<double(double)> custom;
  std::string label;

  static Profile constant(double c);
  static Profile power(double s);
  static Profile from_function(std::function<double(double)> f, std::string label);

  double operator()(double x) const;
};

enum class Section6Variant { Bounded, Compact };

/// psi(r) = r^{1-n} (1-r^2)^{-lambda} f(1/(1-r)) exp(i pi g(1/(1-r))) with
/// g(x) = int_1^x f(y) y^{lambda-1} dy (bounded) or int_1^x f(y) y^lambda dy
/// (compact).
struct Section6Params {
  Profile profile;
  double lambda = 0.0;
  int n = 2;
  Section6Variant variant = Section6Variant::Bounded;

  /// Throws std::invalid_argument unless lambda > -1, 2 <= n <= 8 and
  /// inf_{x >= 1} f(x) x^lambda > 0.
  void validate() const;
  /// y-exponent of the g integrand: lambda - 1 (bounded) or lambda (compact).
  [[nodiscard]] double g_weight_exponent() const;
};

/// g(x) for x >= 1; closed form for builtin profiles.
double g_of(const Section6Params& p, double x);

/// The x >= 1 with g(x) = u (u >= 0).
double g_inverse(const Section6Params& p, double u);

/// Radii in [1-2^-m, 1-2^-m-1] where g(1/(1-r)) is an integer, ascending.
std::vector<double> oscillation_knots(const Section6Params& p, int m);

/// Streams the points x in [x_lo, x_hi] with g(x) = k * step, increasing.
/// Returns the number visited.
std::size_t for_each_g_level(const Section6Params& p, double x_lo, double x_hi, double step,
                             const std::function<void(double x)>& visit);

enum class SymbolKind { Constant, Radial, Expression, Function, Section6, Truncated, BoxRestricted, Scaled, Conjugate };

/// Immutable complex-valued function on the ball.
class Symbol {
 public:
  static Symbol constant(std::complex<double> c);
  /// A radial symbol given by its profile r -> psi(r).
  static Symbol radial(std::function<std::complex<double>(double)> profile, std::string label);
  static Symbol expression(const ExprAST& ast);
  /// Arbitrary pointwise function (treated as non-radial).
  static Symbol function(std::function<std::complex<double>(const CartesianPoint&)> f, std::string label);
  static Symbol section6(const Section6Params& params);
  /// psi_rho: psi on |x| <= rho, zero outside.
  static Symbol truncated(const Symbol& inner, double rho);
  /// psi chi_B for the box id (half-open tie-break of locate()).
  static Symbol box_restricted(const Symbol& inner, const BoxId& id);
  static Symbol scaled(const Symbol& inner, std::complex<double> factor);
  static Symbol conjugate(const Symbol& inner);

  /// Throws DomainError where the defining formula is singular.
  std::complex<double> operator()(const CartesianPoint& x) const;

  [[nodiscard]] SymbolKind kind() const;
  [[nodiscard]] bool is_radial() const;
  /// Profile value at radius r (radial symbols only).
  [[nodiscard]] std::complex<double> radial_value(double r) const;
  /// r^{n-1} psi(r) (1-r^2)^lambda at r = 1 - s. Section6 symbols with
  /// matching (n, lambda) return f(x) exp(i pi g(x)) without cancellation.
  [[nodiscard]] std::complex<double> weighted_radial(double s, int n, double lambda) const;
  /// Radii (as s = 1 - r, decreasing) inside [r_lo, r_hi] where the radial
  /// integrand changes character: half-integer levels of g for section6
  /// symbols and the truncation radius. Returns false if the symbol has no
  /// such structure (callers then use uniform panels).
  bool for_each_radial_break(double r_lo, double r_hi, const std::function<void(double s)>& visit) const;
  /// rho for truncated symbols (min over nested truncations).
  [[nodiscard]] std::optional<double> support_radius() const;
  [[nodiscard]] const Section6Params* section6_params() const;

  /// A section6 symbol seen through scalings, conjugations and truncations.
  struct Section6Chain {
    const Section6Params* params = nullptr;
    std::complex<double> factor{1.0};
    bool conjugated = false;
    double rho = 1.0;
  };
  /// Set only when every wrapper around the section6 core is one of those three.
  [[nodiscard]] std::optional<Section6Chain> section6_chain() const;
  [[nodiscard]] std::string describe() const;

  struct Impl;

 private:
  explicit Symbol(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Builds a symbol from its JSON spec:
///   {"kind": "constant", "value": c | [re, im]}
///   {"kind": "radial", "text": "<expression in r>"}
///   {"kind": "expression", "text": "<expression>"}
///   {"kind": "section6", "profile": {"type": "const", "value": c} | {"type": "power", "exponent": s},
///    "lambda": l, "variant": "bounded" | "compact"}
///   {"kind": "truncated", "rho": rho, "symbol": {...}}
/// n is the dimension; section6 specs without "lambda" take default_lambda.
/// Throws std::invalid_argument (ParseError for expression text).
Symbol symbol_from_json(const nlohmann::json& spec, int n, double default_lambda = 0.0);

}  // namespace hbergman
