#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "hbergman/symbols.hpp"

namespace hbergman {

namespace {

using Json = nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument("symbol spec: " + what); }

void allow_keys(const Json& j, std::initializer_list<const char*> keys) {
  const std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!ok.contains(k)) bad("unexpected key '" + k + "'");
  }
}

double number(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) bad(std::string("'") + key + "' must be a number");
  const double v = j[key].get<double>();
  if (!std::isfinite(v)) bad(std::string("'") + key + "' must be finite");
  return v;
}

std::string text(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) bad(std::string("'") + key + "' must be a string");
  return j[key].get<std::string>();
}

Profile profile_from(const Json& j) {
  if (!j.is_object()) bad("'profile' must be an object");
  const std::string type = text(j, "type");
  if (type == "const") {
    allow_keys(j, {"type", "value"});
    return Profile::constant(number(j, "value"));
  }
  if (type == "power") {
    allow_keys(j, {"type", "exponent"});
    return Profile::power(number(j, "exponent"));
  }
  bad("profile type must be 'const' or 'power'");
}

}  // namespace

Symbol symbol_from_json(const Json& spec, int n, double default_lambda) {
  if (!spec.is_object()) bad("expected an object");
  const std::string kind = text(spec, "kind");
  if (kind == "constant") {
    allow_keys(spec, {"kind", "value"});
    if (!spec.contains("value")) bad("'value' is required");
    const Json& v = spec["value"];
    if (v.is_number()) return Symbol::constant(v.get<double>());
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      return Symbol::constant({v[0].get<double>(), v[1].get<double>()});
    }
    bad("'value' must be a number or [re, im]");
  }
  if (kind == "expression") {
    allow_keys(spec, {"kind", "text"});
    return Symbol::expression(parse_expression(text(spec, "text"), n));
  }
  if (kind == "radial") {
    allow_keys(spec, {"kind", "text"});
    const std::string src = text(spec, "text");
    const ExprAST ast = parse_expression(src, n);
    if (!ast.radial_only()) bad("radial text may only use r and constants");
    return Symbol::radial(
        [ast, n](double r) {
          CartesianPoint x(n);
          x[0] = r;
          return ast.evaluate(x);
        },
        src);
  }
  if (kind == "section6") {
    allow_keys(spec, {"kind", "profile", "lambda", "variant"});
    Section6Params p;
    p.n = n;
    p.lambda = spec.contains("lambda") ? number(spec, "lambda") : default_lambda;
    if (!spec.contains("profile")) bad("'profile' is required");
    p.profile = profile_from(spec["profile"]);
    const std::string variant = spec.contains("variant") ? text(spec, "variant") : "bounded";
    if (variant == "bounded") {
      p.variant = Section6Variant::Bounded;
    } else if (variant == "compact") {
      p.variant = Section6Variant::Compact;
    } else {
      bad("variant must be 'bounded' or 'compact'");
    }
    p.validate();
    return Symbol::section6(p);
  }
  if (kind == "truncated") {
    allow_keys(spec, {"kind", "rho", "symbol"});
    const double rho = number(spec, "rho");
    if (!spec.contains("symbol")) bad("'symbol' is required");
    return Symbol::truncated(symbol_from_json(spec["symbol"], n, default_lambda), rho);
  }
  bad("unknown kind '" + kind + "'");
}

}  // namespace hbergman
