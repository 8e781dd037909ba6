#include "minsub/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "minsub/errors.hpp"
#include "minsub/geometry_verify.hpp"

namespace minsub::cli {

namespace {

bool close_rel(double x, double y, double tol) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(y)); }

std::string vector_text(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  return format_complex_list(vector_from_json(j));
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.out.empty()) {
    out << text;
  } else {
    write_atomic(config.out, text);
  }
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

SpaceId RunConfig::space_id() const {
  if (space.empty()) throw ParameterError("missing --space");
  if (space.find(':') != std::string::npos) {
    SpaceId id = SpaceId::parse(space);
    if (n && *n != id.n) throw ParameterError("--n disagrees with the n in --space");
    return id;
  }
  if (!n) throw ParameterError("--space '" + space + "' needs ':n' or --n");
  return SpaceId::parse(space + ":" + std::to_string(*n));
}

EigenSpec RunConfig::spec() const {
  const SpaceId id = space_id();
  if (id.compact()) {
    throw ParameterError("--space must be one of the non-compact spaces; compact duals are reached through 'duality'");
  }
  if (!a) throw ParameterError("missing --a");
  std::optional<ComplexVector> bv;
  if (b) bv = parse_complex_list(*b);
  return make_spec(id, parse_complex_list(*a), bv);
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["space"] = space;
  j["n"] = n ? nlohmann::json(*n) : nlohmann::json(nullptr);
  j["a"] = a ? nlohmann::json(*a) : nlohmann::json(nullptr);
  j["b"] = b ? nlohmann::json(*b) : nlohmann::json(nullptr);
  j["seed"] = seed;
  j["points"] = points;
  j["steps"] = steps;
  j["step_size"] = step_size;
  j["h"] = h;
  j["tol"] = tol ? nlohmann::json(*tol) : nlohmann::json(nullptr);
  j["level"] = format_complex(level);
  return j;
}

void apply_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw ParameterError("config file must hold a JSON object");
  try {
    if (j.contains("space")) c.space = j.at("space").get<std::string>();
    if (j.contains("n")) c.n = j.at("n").get<int>();
    if (j.contains("a")) c.a = vector_text(j.at("a"));
    if (j.contains("b")) c.b = vector_text(j.at("b"));
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("points")) c.points = j.at("points").get<int>();
    if (j.contains("steps")) c.steps = j.at("steps").get<int>();
    if (j.contains("step_size")) c.step_size = j.at("step_size").get<double>();
    if (j.contains("h")) c.h = j.at("h").get<double>();
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    if (j.contains("level")) {
      const auto& lv = j.at("level");
      c.level = lv.is_string() ? parse_complex(lv.get<std::string>()) : Complex(lv.get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("config file: ") + e.what());
  }
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ParameterError("cannot open '" + tmp.string() + "' for writing");
    f << content;
    if (!f.flush()) throw ParameterError("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.points < 1) throw ParameterError("--points must be at least 1");
  const EigenSpec spec = config.spec();
  if (!spec.eigen_conditions_met) throw ParameterError(spec.violation(ConditionRole::Eigen));
  const double tol = config.tol.value_or(kVerifyTol);

  VerificationReport report = eigen_sweep(spec, config.points, config.seed);
  report.dual_fitted = duality_sweep(spec, config.points, config.seed);

  const bool residuals_ok = report.max_tau_residual <= tol && report.max_kappa_residual <= tol;
  const bool fit_ok = close_rel(report.fitted_lambda, report.resolved_lambda, kDualityTol) &&
                      close_rel(report.fitted_mu, spec.expected_mu, kDualityTol);
  const bool dual_ok = close_rel(report.dual_fitted->first, -report.fitted_lambda, kDualityTol) &&
                       close_rel(report.dual_fitted->second, -report.fitted_mu, kDualityTol);

  nlohmann::json j = to_json(report);
  j["lambda_candidates"] = spec.lambda_candidates;
  j["tol"] = tol;
  j["config"] = config.to_json();
  j["pass"] = residuals_ok && fit_ok && dual_ok;
  emit(config, j.dump(2) + "\n", out);
  if (!residuals_ok) err << "verify: residual above " << tol << "\n";
  if (!fit_ok) err << "verify: fitted values differ from the catalog\n";
  if (!dual_ok) err << "verify: compact dual values are not the negated ones\n";
  return residuals_ok && fit_ok && dual_ok ? kExitPass : kExitFail;
}

int cmd_fiber(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.steps < 0) throw ParameterError("--steps must be non-negative");
  if (!(config.step_size > 0.0)) throw ParameterError("--step-size must be positive");
  const EigenSpec spec = config.spec();
  if (!spec.fiber_conditions_met) throw ParameterError(spec.violation(ConditionRole::Fiber));
  const double tol = config.tol.value_or(kRegularityTol);

  const FiberPoint zero = constructive_zero(spec);
  std::vector<FiberPoint> samples;
  if (config.steps == 0) {
    samples.push_back(zero);
  } else {
    samples = fiber_walk(spec, zero, config.steps, config.step_size, config.seed);
  }
  const RegularValueReport rep = regular_value_report(spec, samples, tol);

  double max_phi = 0.0;
  double max_membership = 0.0;
  for (const auto& s : samples) {
    max_phi = std::max(max_phi, s.phi_abs);
    max_membership = std::max(max_membership, s.point.membership_residual);
  }
  const bool pass = rep.all_regular() && max_phi <= kFiberPhiTol && max_membership <= kMembershipTol;

  if (!config.out.empty()) {
    std::ostringstream body;
    if (ends_with(config.out, ".jsonl")) {
      write_fiber_jsonl(body, samples);
    } else {
      write_fiber_csv(body, samples);
    }
    write_atomic(config.out, body.str());
  }
  nlohmann::json j;
  j["space"] = spec.space.to_string();
  j["n"] = spec.space.n;
  j["samples"] = samples.size();
  j["regular_count"] = rep.regular;
  j["min_margin_ratio"] = rep.min_margin_ratio;
  j["failing"] = rep.failing;
  j["max_phi_abs"] = max_phi;
  j["max_membership_residual"] = max_membership;
  j["tol"] = tol;
  j["config"] = config.to_json();
  j["pass"] = pass;
  out << j.dump(2) << "\n";
  if (!pass) err << "fiber: " << rep.failing.size() << " sample(s) failed certification\n";
  return pass ? kExitPass : kExitFail;
}

int cmd_curvature(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (!(config.h > 0.0)) throw ParameterError("--h must be positive");
  if (config.points < 1) throw ParameterError("--points must be at least 1");
  if (!(config.step_size > 0.0)) throw ParameterError("--step-size must be positive");
  const EigenSpec spec = config.spec();
  if (!spec.fiber_conditions_met) throw ParameterError(spec.violation(ConditionRole::Fiber));
  const double tol = config.tol.value_or(kCurvatureTol);

  const FiberPoint start = level_point(spec, config.level);
  std::vector<FiberPoint> pts{start};
  if (config.points > 1 && descriptor(spec.space).basis_p.size() > 2) {
    WalkOptions opt;
    opt.level = config.level;
    auto walk = fiber_walk(spec, start, config.points - 1, config.step_size, config.seed, opt);
    pts.insert(pts.end(), walk.begin(), walk.end());
  }

  const std::vector<double> hs{config.h, config.h / 2.0, config.h / 4.0};
  nlohmann::json rows = nlohmann::json::array();
  std::vector<double> max_norm(hs.size(), 0.0);
  bool below = true;
  bool decreasing = true;
  int newton_failures = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    nlohmann::json row;
    row["point"] = i;
    try {
      std::vector<double> norms;
      for (double h : hs) norms.push_back(mean_curvature_estimate(spec, pts[i], h, config.level));
      for (std::size_t k = 0; k < hs.size(); ++k) {
        max_norm[k] = std::max(max_norm[k], norms[k]);
        below = below && norms[k] <= tol;
        if (k > 0 && norms[k] > norms[k - 1] && norms[k] > kCurvatureFloor) decreasing = false;
      }
      row["norms"] = norms;
    } catch (const ConvergenceError& e) {
      row["error"] = e.what();
      ++newton_failures;
    }
    rows.push_back(row);
  }
  const bool pass = below && decreasing && newton_failures == 0;

  nlohmann::json j;
  j["space"] = spec.space.to_string();
  j["n"] = spec.space.n;
  j["level"] = format_complex(config.level);
  j["h"] = hs;
  j["rows"] = rows;
  j["max_norm"] = max_norm;
  j["threshold"] = tol;
  j["floor"] = kCurvatureFloor;
  j["decreasing"] = decreasing;
  j["newton_failures"] = newton_failures;
  j["config"] = config.to_json();
  j["pass"] = pass;
  emit(config, j.dump(2) + "\n", out);
  if (!pass) {
    err << "curvature: max |H| " << *std::max_element(max_norm.begin(), max_norm.end())
        << " (threshold " << tol << "), decreasing=" << (decreasing ? "yes" : "no")
        << ", newton failures " << newton_failures << "\n";
  }
  return pass ? kExitPass : kExitFail;
}

int cmd_duality(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.points < 1) throw ParameterError("--points must be at least 1");
  const EigenSpec spec = config.spec();
  if (!spec.eigen_conditions_met) throw ParameterError(spec.violation(ConditionRole::Eigen));
  const double tol = config.tol.value_or(kDualityTol);

  const auto fitted = duality_sweep(spec, config.points, config.seed);
  const DualExpectation expected = dual_expectations(spec);
  const auto table = compact_table_values(expected.space);
  const bool lambda_ok =
      std::any_of(expected.lambda_candidates.begin(), expected.lambda_candidates.end(),
                  [&](double l) { return close_rel(fitted.first, l, tol); });
  const bool mu_ok = close_rel(fitted.second, expected.mu, tol);
  const bool table_ok = close_rel(fitted.first, table.first, tol) && close_rel(fitted.second, table.second, tol);
  const bool pass = lambda_ok && mu_ok && table_ok;

  nlohmann::json j;
  j["space"] = spec.space.to_string();
  j["dual_space"] = expected.space.to_string();
  j["dual_lambda"] = fitted.first;
  j["dual_mu"] = fitted.second;
  j["expected_lambda_candidates"] = expected.lambda_candidates;
  j["expected_mu"] = expected.mu;
  j["table_lambda"] = table.first;
  j["table_mu"] = table.second;
  j["tol"] = tol;
  j["config"] = config.to_json();
  j["pass"] = pass;
  emit(config, j.dump(2) + "\n", out);
  if (!pass) err << "duality: compact dual values disagree with the expected ones\n";
  return pass ? kExitPass : kExitFail;
}

int cmd_list_spaces(std::ostream& out) {
  struct Row {
    const char* example;  // id with the smallest valid n
    const char* name;
  };
  static constexpr Row kRows[] = {
      {"slr-so:3", "SL(n,R)/SO(n)"}, {"spr-u:2", "Sp(n,R)/U(n)"}, {"sostar-u:2", "SO*(2n)/U(n)"},
      {"sustar-sp:2", "SU*(2n)/Sp(n)"}, {"su-so:3", "SU(n)/SO(n)"}, {"sp-u:2", "Sp(n)/U(n)"},
      {"so2n-u:2", "SO(2n)/U(n)"}, {"su2n-sp:2", "SU(2n)/Sp(n)"},
  };
  out << "id\tspace\tmin_n\ttype\tdual\n";
  for (const auto& r : kRows) {
    const SpaceId id = SpaceId::parse(r.example);
    const std::string full = id.to_string();
    const std::string dual = dual_space(id).to_string();
    out << full.substr(0, full.find(':')) << '\t' << r.name << '\t' << id.n << '\t'
        << (id.compact() ? "compact" : "non-compact") << '\t' << dual.substr(0, dual.find(':')) << '\n';
  }
  return kExitPass;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimal submanifolds of symmetric spaces from complex eigenfunctions"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig flags;
  std::string config_path;
  std::string level_text;
  std::uint64_t seed = 0;
  int n = 0;
  double tol = 0.0;
  std::string a_text;
  std::string b_text;

  auto* o_space = app.add_option("--space", flags.space, "space id, e.g. slr-so:3");
  auto* o_n = app.add_option("--n", n, "matrix parameter n");
  auto* o_a = app.add_option("--a", a_text, "complex vector a, e.g. 1,1i,0");
  auto* o_b = app.add_option("--b", b_text, "complex vector b");
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  auto* o_points = app.add_option("--points", flags.points, "number of sample points");
  auto* o_steps = app.add_option("--steps", flags.steps, "fibre walk steps");
  auto* o_step = app.add_option("--step-size", flags.step_size, "fibre walk step size");
  auto* o_h = app.add_option("--h", flags.h, "mean-curvature stencil step");
  auto* o_tol = app.add_option("--tol", tol, "pass/fail threshold override");
  auto* o_out = app.add_option("--out", flags.out, "output file");
  auto* o_level = app.add_option("--level", level_text, "level value for curvature, e.g. 0.5");
  app.add_option("--config", config_path, "JSON config file; flags take precedence");

  auto* verify = app.add_subcommand("verify", "eigen and duality sweep");
  auto* fiber = app.add_subcommand("fiber", "constructive zero and fibre walk samples");
  auto* curvature = app.add_subcommand("curvature", "mean curvature convergence table");
  auto* duality = app.add_subcommand("duality", "fit on the compact dual");
  auto* list = app.add_subcommand("list-spaces", "list supported spaces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (list->parsed()) return cmd_list_spaces(out);

    RunConfig config;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ParameterError("cannot read config file '" + config_path + "'");
      nlohmann::json j;
      try {
        f >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ParameterError("config file '" + config_path + "' is not valid JSON: " + e.what());
      }
      apply_json(config, j);
    }
    if (o_space->count()) config.space = flags.space;
    if (o_n->count()) config.n = n;
    if (o_a->count()) config.a = a_text;
    if (o_b->count()) config.b = b_text;
    if (o_seed->count()) config.seed = seed;
    if (o_points->count()) config.points = flags.points;
    if (o_steps->count()) config.steps = flags.steps;
    if (o_step->count()) config.step_size = flags.step_size;
    if (o_h->count()) config.h = flags.h;
    if (o_tol->count()) config.tol = tol;
    if (o_out->count()) config.out = flags.out;
    if (o_level->count()) config.level = parse_complex(level_text);

    if (verify->parsed()) return cmd_verify(config, out, err);
    if (fiber->parsed()) return cmd_fiber(config, out, err);
    if (curvature->parsed()) return cmd_curvature(config, out, err);
    if (duality->parsed()) return cmd_duality(config, out, err);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "failure: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace minsub::cli
