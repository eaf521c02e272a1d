// gnslab: condition checks, GNS data, unitization extensions and sweeps for
// finite quasi *-algebra models, driven from model/functional JSON files or
// the built-in families.
//
// Exit codes: 0 all requested checks hold, 1 a mathematical condition fails
// (including precondition and consistency failures), 2 unusable input
// (parse errors, bad parameters, unknown names).

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gnslab/extension.hpp"
#include "gnslab/gns.hpp"
#include "gnslab/io.hpp"
#include "gnslab/models.hpp"

namespace {

using namespace gnslab;

struct Options {
  std::string model_path;
  std::string functional_path;
  std::string builtin;

  int n_param = -1;       // --N (ell2 length) or --n (family index)
  int k_param = -1;       // --K, defaults to --N
  int points = 21;        // grid node count
  int d_param = 4;        // matrix dimension
  double a_param = -1.0;  // interval endpoints
  double b_param = 1.0;
  std::uint64_t seed = 0;
  bool states_in_core = false;

  std::string gamma = "minimal";
  bool allow_below_minimum = false;

  Tolerances tol;
  std::string out = "-";
  std::string format = "json";

  std::string family;              // sweep positional
  std::vector<std::string> sizes;  // sweep positional
};

// Attaches the shared flag set to a subcommand.  Input-selection flags are
// meaningless for `sweep`, which names its family positionally.
void add_common(CLI::App* cmd, Options& o, bool with_inputs) {
  if (with_inputs) {
    cmd->add_option("--model", o.model_path, "model JSON file");
    cmd->add_option("--functional", o.functional_path,
                    "functional JSON file (weights)");
    cmd->add_option("--builtin", o.builtin,
                    "built-in model: ell2, grid, pointeval, two_points, "
                    "matrix_corner, tent, sqrt2n");
    cmd->add_option("--N,-N", o.n_param, "sequence length (ell2)");
    cmd->add_option("--n", o.n_param, "family index (tent, sqrt2n)");
    cmd->add_option("--K,-K", o.k_param, "core length (ell2), default N");
    cmd->add_option("--points", o.points, "grid node count");
    cmd->add_option("--d", o.d_param, "matrix dimension (matrix_corner)");
    cmd->add_option("--a", o.a_param, "interval left endpoint");
    cmd->add_option("--b", o.b_param, "interval right endpoint");
    cmd->add_flag("--states-in-core", o.states_in_core,
                  "draw matrix_corner states inside the corner block");
  }
  cmd->add_option("--seed", o.seed, "random seed for seeded models");
  cmd->add_option("--tol-axiom", o.tol.axiom, "algebra axiom tolerance");
  cmd->add_option("--tol-rank-cutoff", o.tol.rank_cutoff,
                  "relative eigenvalue rank cutoff");
  cmd->add_option("--tol-range", o.tol.range_tol,
                  "relative range-membership tolerance");
  cmd->add_option("--tol-residual", o.tol.residual,
                  "relative residual tolerance");
  cmd->add_option("--out", o.out, "output path, - for stdout");
  cmd->add_option("--format", o.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

ModelBundle resolve_builtin(const Options& o) {
  if (o.builtin == "ell2") {
    if (o.n_param < 1) throw ParseError("ell2 requires --N");
    return model_ell2(o.n_param, o.k_param >= 1 ? o.k_param : o.n_param);
  }
  if (o.builtin == "grid")
    return model_grid_integral(o.a_param, o.b_param, o.points);
  if (o.builtin == "pointeval")
    return model_pointeval(o.a_param, o.b_param, o.points);
  if (o.builtin == "two_points") return model_two_points();
  if (o.builtin == "matrix_corner")
    return model_matrix_corner(o.d_param, o.seed, o.states_in_core);
  if (o.builtin == "tent" || o.builtin == "sqrt2n")
    throw ParseError("builtin '" + o.builtin +
                     "' is a closed-form family; use `check` or `sweep`");
  throw ParseError("unknown builtin: " + o.builtin);
}

struct Input {
  QuasiAlgebraSpec spec;
  Functional omega;
  std::string name;
  Json parameters = Json::object();
};

Input resolve_input(const Options& o, bool need_functional = true) {
  if (!o.builtin.empty() && !o.model_path.empty())
    throw ParseError("--model and --builtin are mutually exclusive");
  if (!o.builtin.empty()) {
    ModelBundle b = resolve_builtin(o);
    Json params = Json::object();
    for (const auto& [key, val] : b.parameters) params[key] = val;
    return {std::move(b.spec), std::move(b.omega), b.name, params};
  }
  if (o.model_path.empty())
    throw ParseError("provide --model FILE or --builtin NAME");
  Input in;
  in.spec = load_model(o.model_path);
  in.name = o.model_path;
  if (!o.functional_path.empty())
    in.omega = load_functional(o.functional_path);
  else if (need_functional)
    throw ParseError("--functional FILE is required with --model");
  if (need_functional &&
      in.omega.weights.size() != in.spec.ambient_dim())
    throw ParseError("functional length disagrees with model dim_ambient");
  return in;
}

std::pair<GammaPolicy, double> resolve_gamma(const Options& o) {
  if (o.gamma == "minimal") return {GammaPolicy::Minimal, 0.0};
  try {
    size_t used = 0;
    double v = std::stod(o.gamma, &used);
    if (used != o.gamma.size()) throw std::invalid_argument(o.gamma);
    return {GammaPolicy::Explicit, v};
  } catch (const std::exception&) {
    throw ParseError("--gamma expects 'minimal' or a number, got '" + o.gamma +
                     "'");
  }
}

void emit(const Options& o, const Json& report) {
  if (o.format != "json")
    throw ParseError("csv output is only available for sweep");
  write_text(o.out, report.dump(2) + "\n");
}

Json envelope(const std::string& command, const Input& in, Json report) {
  return Json{{"command", command},
              {"model", in.name},
              {"parameters", in.parameters},
              {"report", std::move(report)}};
}

int cmd_validate(const Options& o) {
  Input in = resolve_input(o, /*need_functional=*/false);
  ValidationReport report = validate_quasi_algebra(in.spec, o.tol.axiom);
  emit(o, envelope("validate", in, validation_to_json(report)));
  return report.passed ? 0 : 1;
}

// The closed-form families have no finite model; `check` reports their
// exact moments and the canonical ratio instead of a condition table.
int check_closed_form(const Options& o) {
  if (o.n_param < 1) throw ParseError(o.builtin + " requires --n");
  Json report;
  bool holds = true;
  if (o.builtin == "tent") {
    TentMoments m = tent_moments(o.n_param);
    double ratio = m.i1 * m.i1 / m.i2;
    holds = ratio > o.n_param;
    report = Json{{"family", "tent"},
                  {"n", o.n_param},
                  {"i1", m.i1},
                  {"i2", m.i2},
                  {"ratio", ratio},
                  {"exceeds_n", holds}};
  } else {
    Sqrt2nValues v = sqrt2n_family(o.n_param);
    report = Json{{"family", "sqrt2n"},
                  {"n", o.n_param},
                  {"norm1", v.norm1},
                  {"norm2sq", v.norm2sq},
                  {"ratio", v.norm1 * v.norm1 / v.norm2sq}};
  }
  if (o.format != "json")
    throw ParseError("csv output is only available for sweep");
  write_text(o.out, Json{{"command", "check"},
                         {"model", o.builtin},
                         {"report", report}}
                            .dump(2) +
                        "\n");
  return holds ? 0 : 1;
}

int cmd_check(const Options& o) {
  if (o.builtin == "tent" || o.builtin == "sqrt2n")
    return check_closed_form(o);
  Input in = resolve_input(o);
  ConditionReport report = condition_report(in.spec, in.omega, o.tol);
  emit(o, envelope("check", in, condition_report_to_json(report)));
  return report.all_hold() ? 0 : 1;
}

int cmd_gns(const Options& o) {
  Input in = resolve_input(o);
  GNSRep rep = build_gns(in.spec, in.omega, o.tol);
  GnsVerification v = verify_gns(rep, o.tol);
  Json report = gns_report_to_json(rep, v);
  emit(o, envelope("gns", in, std::move(report)));
  return v.holds ? 0 : 1;
}

int cmd_extend(const Options& o) {
  Input in = resolve_input(o);
  auto [policy, value] = resolve_gamma(o);
  ExtensionSpec ext = extend_functional(in.spec, in.omega, policy, value,
                                        o.allow_below_minimum, o.tol);
  ConditionEntry positivity = positivity_on_unitization(ext, o.tol);
  ConditionReport representable = check_extension_representable(ext, o.tol);
  emit(o, envelope("extend", in,
                   extension_report_to_json(ext, positivity, representable)));
  return positivity.status == Status::Holds && representable.all_hold() ? 0
                                                                        : 1;
}

int cmd_domain(const Options& o) {
  Input in = resolve_input(o);
  auto [policy, value] = resolve_gamma(o);
  ExtensionSpec ext = extend_functional(in.spec, in.omega, policy, value,
                                        o.allow_below_minimum, o.tol);
  DomainDe dom = domain_De(ext, o.tol);
  Json report = domain_report_to_json(dom);
  report["gamma"] = ext.gamma;
  emit(o, envelope("domain", in, std::move(report)));
  bool ok = dom.is_quasi_algebra_with_unit && dom.restriction_valid &&
            dom.restriction_representable;
  return ok ? 0 : 1;
}

int cmd_chain(const Options& o) {
  Input in = resolve_input(o);
  auto [policy, value] = resolve_gamma(o);
  ChainReport rep = chain_report(in.spec, in.omega, policy, value,
                                 o.allow_below_minimum, o.tol);
  emit(o, envelope("chain", in, chain_report_to_json(rep)));
  return rep.implications_ok && rep.discrepancies.empty() ? 0 : 1;
}

// Sizes: "1..50" (inclusive range) or "2,10,100" (explicit list); several
// positional tokens concatenate.
std::vector<int> parse_sizes(const std::vector<std::string>& tokens) {
  std::vector<int> out;
  auto parse_int = [](const std::string& s) {
    try {
      size_t used = 0;
      int v = std::stoi(s, &used);
      if (used != s.size() || v < 1) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ParseError("bad size token '" + s + "': expect positive integers");
    }
  };
  for (const auto& tok : tokens) {
    auto dots = tok.find("..");
    if (dots != std::string::npos) {
      int lo = parse_int(tok.substr(0, dots));
      int hi = parse_int(tok.substr(dots + 2));
      if (hi < lo) throw ParseError("empty size range '" + tok + "'");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
      continue;
    }
    std::string piece;
    std::istringstream stream(tok);
    while (std::getline(stream, piece, ','))
      if (!piece.empty()) out.push_back(parse_int(piece));
  }
  if (out.empty()) throw ParseError("no sizes given");
  return out;
}

int cmd_sweep(const Options& o) {
  SweepFamily family = parse_family(o.family);
  std::vector<int> sizes = parse_sizes(o.sizes);
  std::vector<SweepRow> rows = sweep(family, sizes, o.tol);
  if (o.format == "csv")
    write_text(o.out, sweep_to_csv(rows));
  else
    write_text(o.out, Json{{"command", "sweep"},
                           {"family", family_name(family)},
                           {"report", sweep_to_json(rows)}}
                              .dump(2) +
                          "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-model laboratory for functionals on quasi *-algebras"};
  app.require_subcommand(1);

  Options validate_o, check_o, gns_o, extend_o, domain_o, chain_o, sweep_o;

  add_common(app.add_subcommand("validate", "check the algebra axioms"),
             validate_o, true);
  add_common(app.add_subcommand("check", "evaluate the functional conditions"),
             check_o, true);
  add_common(app.add_subcommand("gns", "build and verify the representation"),
             gns_o, true);

  auto* extend_cmd =
      app.add_subcommand("extend", "extend to the unitized model");
  add_common(extend_cmd, extend_o, true);
  extend_cmd->add_option("--gamma", extend_o.gamma, "minimal or a number");
  extend_cmd->add_flag("--allow-below-minimum", extend_o.allow_below_minimum,
                       "permit gamma under the minimal value");

  auto* domain_cmd =
      app.add_subcommand("domain", "bounded part of the unitized space");
  add_common(domain_cmd, domain_o, true);
  domain_cmd->add_option("--gamma", domain_o.gamma, "minimal or a number");
  domain_cmd->add_flag("--allow-below-minimum", domain_o.allow_below_minimum,
                       "permit gamma under the minimal value");

  auto* chain_cmd = app.add_subcommand(
      "chain", "cross-check the representability characterizations");
  add_common(chain_cmd, chain_o, true);
  chain_cmd->add_option("--gamma", chain_o.gamma, "minimal or a number");
  chain_cmd->add_flag("--allow-below-minimum", chain_o.allow_below_minimum,
                      "permit gamma under the minimal value");

  auto* sweep_cmd =
      app.add_subcommand("sweep", "run a family across truncation sizes");
  sweep_cmd->add_option("family", sweep_o.family, "ell2, tent, sqrt2n, pointeval")
      ->required();
  sweep_cmd->add_option("sizes", sweep_o.sizes, "e.g. 1..50 or 2,10,100")
      ->required();
  add_common(sweep_cmd, sweep_o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("validate")) return cmd_validate(validate_o);
    if (app.got_subcommand("check")) return cmd_check(check_o);
    if (app.got_subcommand("gns")) return cmd_gns(gns_o);
    if (app.got_subcommand("extend")) return cmd_extend(extend_o);
    if (app.got_subcommand("domain")) return cmd_domain(domain_o);
    if (app.got_subcommand("chain")) return cmd_chain(chain_o);
    if (app.got_subcommand("sweep")) return cmd_sweep(sweep_o);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const StructuralError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "condition failure [" << e.condition << "]: " << e.what()
              << "\n";
    return 1;
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
