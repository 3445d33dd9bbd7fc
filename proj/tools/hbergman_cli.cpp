// hbergman: command-line front end for the decomposition, Carleson,
// section6 example, Toeplitz, kernel and validation modules.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hbergman/boxes.hpp"
#include "hbergman/carleson.hpp"
#include "hbergman/harmonic.hpp"
#include "hbergman/json_io.hpp"
#include "hbergman/parser.hpp"
#include "hbergman/quadrature.hpp"
#include "hbergman/symbols.hpp"
#include "hbergman/validation.hpp"

using namespace hbergman;
using Json = nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kMaxGenGuard = 16;

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  int n = 2;
  double lambda = 0.0;
  double p = 2.0;
  std::optional<int> max_gen;
  std::vector<int> grid;
  std::uint64_t seed = kDefaultSeed;
  std::string symbol_json;
  std::string symbol_expr;
  std::string out;
  std::string format = "json";

  // Subcommand specific.
  std::string variant = "bounded";
  std::string profile = "const";
  double profile_value = 1.0;
  double bound = 3.2;
  std::string f_expr = "1";
  std::vector<std::string> points;
  std::string x, y;
  std::vector<std::string> checks;
  std::string thresholds;
  double convergence_tol = 0.05;

  void validate() const {
    if (n < 2 || n > kMaxDim) throw ConfigError("--dim must lie in [2, " + std::to_string(kMaxDim) + "]");
    if (!(lambda > -1.0) || !std::isfinite(lambda)) throw ConfigError("--lambda must be a finite number > -1");
    if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("--p must lie in (1, inf)");
    if (max_gen && (*max_gen < 0 || *max_gen > kMaxGenGuard)) {
      throw ConfigError("--max-gen must lie in [0, " + std::to_string(kMaxGenGuard) + "]");
    }
    for (int g : grid) {
      if (g < 1 || g > 64) throw ConfigError("--grid entries must lie in [1, 64]");
    }
    if (!(convergence_tol >= 0.0)) throw ConfigError("--convergence-tol must be >= 0");
    if (format != "json" && format != "csv") throw ConfigError("--format must be json or csv");
    if (!symbol_json.empty() && !symbol_expr.empty()) throw ConfigError("give --symbol or --symbol-expr, not both");
  }

  [[nodiscard]] int gen_or(int fallback) const { return max_gen.value_or(fallback); }
};

CartesianPoint parse_point(const std::string& s, int n, const char* flag) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw ConfigError(std::string(flag) + ": cannot read '" + item + "' as a number");
    }
  }
  if (static_cast<int>(v.size()) != n) {
    throw ConfigError(std::string(flag) + ": expected " + std::to_string(n) + " coordinates, got " +
                      std::to_string(v.size()));
  }
  const CartesianPoint x(std::span<const double>(v.data(), v.size()));
  if (!(x.norm() < 1.0)) throw ConfigError(std::string(flag) + ": point must lie in the open unit ball");
  return x;
}

Json point_json(const CartesianPoint& x) {
  Json a = Json::array();
  for (int i = 0; i < x.dim(); ++i) a.push_back(x[i]);
  return a;
}

Symbol load_symbol(const RunConfig& cfg) {
  if (!cfg.symbol_expr.empty()) return Symbol::expression(parse_expression(cfg.symbol_expr, cfg.n));
  if (cfg.symbol_json.empty()) throw ConfigError("a symbol is required (--symbol or --symbol-expr)");
  Json spec;
  try {
    spec = Json::parse(cfg.symbol_json);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("--symbol is not valid JSON: ") + e.what());
  }
  return symbol_from_json(spec, cfg.n, cfg.lambda);
}

void require_json(const RunConfig& cfg, const char* cmd) {
  if (cfg.format != "json") throw ConfigError(std::string(cmd) + ": csv output is only available for per-box tables");
}

KernelConfig kernel_config(const RunConfig& cfg) {
  KernelConfig k;
  k.lambda = cfg.lambda;
  if (cfg.max_gen) k.max_gen = *cfg.max_gen;
  if (!cfg.grid.empty()) k.grid.nodes_per_axis = cfg.grid;
  k.validate();
  return k;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    write_atomically(cfg.out, text);
  }
}

std::string join(const std::vector<double>& v, char sep) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? std::string(1, sep) : "") << v[i];
  return os.str();
}

// decompose: one record per box of generations 0..max_gen.
int cmd_decompose(const RunConfig& cfg) {
  const int max_gen = cfg.gen_or(3);
  const MeasureSpec flat = MeasureSpec::make(cfg.n, 0.0), spec = MeasureSpec::make(cfg.n, cfg.lambda);
  Json records = Json::array();
  std::ostringstream csv;
  csv.precision(17);
  csv << "m,ladder,mask,q_min,q_max,volume,volume_lambda\n";
  for (int m = 0; m <= max_gen; ++m) {
    for_each_box_id(cfg.n, m, [&](const BoxId& id) {
      const DyadicBox box = box_geometry(id);
      std::vector<int> ladder(id.ladder.begin(), id.ladder.begin() + (cfg.n - 1));
      std::vector<double> lo, hi;
      for (int a = 0; a < cfg.n; ++a) {
        lo.push_back(box.q_min[a]);
        hi.push_back(box.q_max[a]);
      }
      const double v = box_volume(box, flat), vl = box_volume(box, spec);
      if (cfg.format == "csv") {
        std::ostringstream k;
        for (std::size_t i = 0; i < ladder.size(); ++i) k << (i ? ";" : "") << ladder[i];
        csv << m << "," << k.str() << "," << id.reflections << "," << join(lo, ';') << "," << join(hi, ';') << "," << v
            << "," << vl << "\n";
      } else {
        records.push_back({{"id", {{"m", m}, {"ladder", ladder}, {"mask", id.reflections}}},
                           {"q_min", lo},
                           {"q_max", hi},
                           {"volume", v},
                           {"volume_lambda", vl}});
      }
    });
  }
  emit(cfg, cfg.format == "csv" ? csv.str() : dump_json(records));
  return 0;
}

// volumes: per-generation totals and the band of |B| 2^{mn}.
int cmd_volumes(const RunConfig& cfg) {
  const int max_gen = cfg.gen_or(8);
  const MeasureSpec flat = MeasureSpec::make(cfg.n, 0.0), spec = MeasureSpec::make(cfg.n, cfg.lambda);
  Json rows = Json::array();
  std::ostringstream csv;
  csv.precision(17);
  csv << "m,boxes,total,total_lambda,band_lo,band_hi\n";
  for (int m = 0; m <= max_gen; ++m) {
    PairwiseAccumulator<double> total, total_l;
    double lo = INFINITY, hi = 0.0;
    std::size_t count = 0;
    const double scale = std::ldexp(1.0, m * cfg.n);
    for_each_box_id(cfg.n, m, [&](const BoxId& id) {
      const double v = box_volume(id, flat);
      total.add(v);
      total_l.add(box_volume(id, spec));
      lo = std::min(lo, v * scale);
      hi = std::max(hi, v * scale);
      ++count;
    });
    rows.push_back({{"m", m},
                    {"boxes", count},
                    {"total", total.total()},
                    {"total_lambda", total_l.total()},
                    {"band", {lo, hi}}});
    csv << m << "," << count << "," << total.total() << "," << total_l.total() << "," << lo << "," << hi << "\n";
  }
  const Json doc{{"n", cfg.n}, {"lambda", cfg.lambda}, {"max_gen", max_gen}, {"generations", rows}};
  emit(cfg, cfg.format == "csv" ? csv.str() : dump_json(doc));
  return 0;
}

int cmd_carleson(const RunConfig& cfg) {
  const Symbol psi = load_symbol(cfg);
  CarlesonOptions opts;
  if (!cfg.grid.empty()) opts.grid.nodes_per_axis = cfg.grid;
  opts.grid.validate();
  const CarlesonReport rep = carleson_report(psi, MeasureSpec::make(cfg.n, cfg.lambda), cfg.gen_or(8), opts);
  emit(cfg, cfg.format == "csv" ? rep.to_csv() : dump_json(rep.to_json()));
  // Convergence gate: the estimate must be finite and stable under grid halving.
  const auto [coarse, fine] = rep.grid_convergence;
  const double delta = std::abs(fine - coarse) / std::max(std::abs(fine), 1e-300);
  if (!std::isfinite(rep.c_psi_estimate) || !(delta <= cfg.convergence_tol)) {
    std::cerr << "carleson: grid convergence gate failed (coarse " << coarse << ", fine " << fine << ")\n";
    return kExitNumerical;
  }
  return 0;
}

int cmd_example6(const RunConfig& cfg) {
  require_json(cfg, "example6");
  Section6Params p;
  p.n = cfg.n;
  p.lambda = cfg.lambda;
  if (cfg.profile == "const") {
    p.profile = Profile::constant(cfg.profile_value);
  } else if (cfg.profile == "power") {
    p.profile = Profile::power(cfg.profile_value);
  } else {
    throw ConfigError("--profile must be const or power");
  }
  if (cfg.variant == "bounded") {
    p.variant = Section6Variant::Bounded;
  } else if (cfg.variant == "compact") {
    p.variant = Section6Variant::Compact;
  } else {
    throw ConfigError("--variant must be bounded or compact");
  }
  p.validate();
  const Symbol psi = Symbol::section6(p);
  const auto rows = radial_condition(psi, MeasureSpec::make(cfg.n, cfg.lambda), cfg.gen_or(12));
  Json table = Json::array();
  std::vector<double> sups;
  bool all_pass = true, decreasing = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const bool pass = rows[i].value <= cfg.bound;
    all_pass = all_pass && pass;
    if (i > 0 && !(rows[i].value < rows[i - 1].value)) decreasing = false;
    sups.push_back(rows[i].value);
    table.push_back({{"m", rows[i].m},
                     {"M_m", rows[i].value},
                     {"M_m_coarse", rows[i].value_coarse},
                     {"breaks", rows[i].breaks},
                     {"pass", pass}});
  }
  const Json doc{{"n", cfg.n},
                 {"lambda", cfg.lambda},
                 {"variant", cfg.variant},
                 {"profile", {{"type", cfg.profile}, {"value", cfg.profile_value}}},
                 {"bound", cfg.bound},
                 {"rows", table},
                 {"all_pass", all_pass},
                 {"strictly_decreasing", decreasing},
                 {"bounded_certificate", bounded_verdict(sups)},
                 {"vanishing_certificate", vanishing_verdict(sups)}};
  emit(cfg, dump_json(doc));
  return 0;
}

int cmd_toeplitz(const RunConfig& cfg) {
  require_json(cfg, "toeplitz");
  const Symbol psi = load_symbol(cfg);
  const ExprAST f_ast = parse_expression(cfg.f_expr, cfg.n);
  std::vector<CartesianPoint> xs;
  for (const auto& s : cfg.points) xs.push_back(parse_point(s, cfg.n, "--x"));
  if (xs.empty()) throw ConfigError("toeplitz: give at least one --x point");
  const KernelConfig k = kernel_config(cfg);
  const Integrand f = [&](const CartesianPoint& y) { return f_ast.evaluate(y); };
  Json out = Json::array();
  for (const auto& x : xs) {
    const ProjectionResult r = toeplitz_apply(psi, f, x, k);
    out.push_back({{"x", point_json(x)},
                   {"value_re", r.value.real()},
                   {"value_im", r.value.imag()},
                   {"tail_estimate", r.kernel_tail},
                   {"generations_used", r.generations_used},
                   {"tail_shell_included", r.tail_shell_included},
                   {"decaying", r.decaying}});
  }
  emit(cfg, dump_json(out));
  return 0;
}

int cmd_kernel(const RunConfig& cfg) {
  require_json(cfg, "kernel");
  const CartesianPoint x = parse_point(cfg.x, cfg.n, "--x"), y = parse_point(cfg.y, cfg.n, "--y");
  const KernelValue v = reproducing_kernel_ex(x, y, kernel_config(cfg));
  const Json doc{{"x", point_json(x)},
                 {"y", point_json(y)},
                 {"lambda", cfg.lambda},
                 {"value", v.value},
                 {"degree", v.degree},
                 {"tail_bound", v.tail_bound}};
  emit(cfg, dump_json(doc));
  return 0;
}

int cmd_validate(const RunConfig& cfg) {
  require_json(cfg, "validate");
  ValidationThresholds th;
  if (!cfg.thresholds.empty()) {
    std::ifstream in(cfg.thresholds);
    if (!in) throw ConfigError("cannot read thresholds file " + cfg.thresholds);
    try {
      th = ValidationThresholds::from_json(Json::parse(in));
    } catch (const Json::exception& e) {
      throw ConfigError(std::string("thresholds file: ") + e.what());
    }
  }
  for (const auto& c : cfg.checks) {
    const auto& names = validation_check_names();
    if (std::find(names.begin(), names.end(), c) == names.end()) throw ConfigError("unknown check '" + c + "'");
  }
  emit(cfg, dump_json(run_validation(cfg.checks, cfg.seed, th)));
  return 0;
}

void common_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--dim", cfg.n, "Ambient dimension n");
  sub->add_option("--lambda", cfg.lambda, "Weight exponent lambda > -1");
  sub->add_option("--p", cfg.p, "Exponent p in (1, inf)");
  sub->add_option("--max-gen", cfg.max_gen, "Deepest box generation (<= 16)");
  sub->add_option("--grid", cfg.grid, "Gauss nodes per axis, radial first")->delimiter(',');
  sub->add_option("--seed", cfg.seed, "Seed for sampled checks");
  sub->add_option("--symbol", cfg.symbol_json, "Symbol spec as inline JSON");
  sub->add_option("--symbol-expr", cfg.symbol_expr, "Symbol as an expression in r, t2.., x1..");
  sub->add_option("--out", cfg.out, "Output file (stdout when omitted)");
  sub->add_option("--format", cfg.format, "json or csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dyadic box decompositions, Carleson sums and Toeplitz operators on harmonic Bergman spaces"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* decompose = app.add_subcommand("decompose", "List the boxes of generations 0..max-gen");
  auto* volumes = app.add_subcommand("volumes", "Per-generation volume totals and bands");
  auto* carleson = app.add_subcommand("carleson", "Carleson report for a symbol");
  auto* example6 = app.add_subcommand("example6", "M_m table for the oscillating section6 symbols");
  auto* toeplitz = app.add_subcommand("toeplitz", "Evaluate T_psi f at points");
  auto* kernel = app.add_subcommand("kernel", "Evaluate the reproducing kernel R_lambda(x, y)");
  auto* validate = app.add_subcommand("validate", "Run the lemma validation checks");
  for (auto* sub : {decompose, volumes, carleson, example6, toeplitz, kernel, validate}) common_flags(sub, cfg);

  carleson->add_option("--convergence-tol", cfg.convergence_tol, "Allowed relative change under grid halving");
  example6->add_option("--variant", cfg.variant, "bounded or compact");
  example6->add_option("--profile", cfg.profile, "const or power");
  example6->add_option("--profile-value", cfg.profile_value, "Constant value or power exponent");
  example6->add_option("--bound", cfg.bound, "Pass threshold for M_m");
  toeplitz->add_option("--f", cfg.f_expr, "Function f as an expression");
  toeplitz->add_option("--x", cfg.points, "Evaluation point, comma separated (repeatable)");
  kernel->add_option("--x", cfg.x, "First point")->required();
  kernel->add_option("--y", cfg.y, "Second point")->required();
  validate->add_option("--checks", cfg.checks, "Checks to run (default all)")->delimiter(',');
  validate->add_option("--thresholds", cfg.thresholds, "JSON file overriding pass thresholds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    cfg.validate();
    if (decompose->parsed()) return cmd_decompose(cfg);
    if (volumes->parsed()) return cmd_volumes(cfg);
    if (carleson->parsed()) return cmd_carleson(cfg);
    if (example6->parsed()) return cmd_example6(cfg);
    if (toeplitz->parsed()) return cmd_toeplitz(cfg);
    if (kernel->parsed()) return cmd_kernel(cfg);
    if (validate->parsed()) return cmd_validate(cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error at offset " << e.offset() << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitConfig;
}
