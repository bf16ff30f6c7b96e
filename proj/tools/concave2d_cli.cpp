// concave2d command-line front end.
//
// Exit codes: 0 success, 2 check failed or computation infeasible, 1 IO/spec/usage error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "CLI11.hpp"

#include "concave2d/concavity.hpp"
#include "concave2d/contact.hpp"
#include "concave2d/io.hpp"
#include "concave2d/pde.hpp"
#include "concave2d/perturb.hpp"
#include "concave2d/triangle.hpp"

namespace fs = std::filesystem;
using namespace concave2d;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kFailed = 2;

// Errors in the inputs rather than in the computation.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string domain, config, out;
  double grid_h = 0.0, gamma = 0.0, t_p = 0.0, a = 0.0, f_c = 0.0, epsilon = 0.0, tol = 0.0, tol_b = 0.0;
  int points = 0, f_k = 0;
  std::vector<double> c;
};

void add_flags(CLI::App* cmd, Flags& fl) {
  cmd->add_option("--domain", fl.domain, "domain-spec JSON file");
  cmd->add_option("--config", fl.config, "run-config JSON file (flags override its values)");
  cmd->add_option("--out", fl.out, "output directory");
  cmd->add_option("--grid-h", fl.grid_h, "grid spacing");
  cmd->add_option("--points", fl.points, "number of boundary points");
  cmd->add_option("--gamma", fl.gamma, "Hoelder exponent for deviation norms");
  cmd->add_option("--c", fl.c, "perturbation widths")->expected(1, -1);
  cmd->add_option("--t-p", fl.t_p, "contact parameter of the perturbation");
  cmd->add_option("--a", fl.a, "perturbation amplitude (default: automatic)");
  cmd->add_option("--f-c", fl.f_c, "nonlinearity f(u) = 1 - c u^k: c");
  cmd->add_option("--f-k", fl.f_k, "nonlinearity f(u) = 1 - c u^k: k");
  cmd->add_option("--epsilon", fl.epsilon, "level as a fraction of max u (demo-nonconcave)");
  cmd->add_option("--tol", fl.tol, "concavity tolerance");
  cmd->add_option("--tol-b", fl.tol_b, "boundary Hessian tolerance");
}

RunConfig resolve_config(const CLI::App* cmd, const Flags& fl) {
  RunConfig cfg;
  if (cmd->count("--config")) cfg = run_config_from_json(read_json(fl.config));
  cfg.command = cmd->get_name();
  if (const char* env = std::getenv("CONCAVE2D_OUT_DIR"); env && *env) cfg.output_dir = env;
  if (cmd->count("--out")) cfg.output_dir = fl.out;
  if (cmd->count("--domain")) cfg.domain = fl.domain;
  if (cmd->count("--grid-h")) cfg.grid_h = fl.grid_h;
  if (cmd->count("--points")) cfg.points = fl.points;
  if (cmd->count("--gamma")) cfg.gamma = fl.gamma;
  if (cmd->count("--c")) cfg.c = fl.c;
  if (cmd->count("--t-p")) cfg.t_p = fl.t_p;
  if (cmd->count("--a")) cfg.amplitude = fl.a;
  if (cmd->count("--f-c")) cfg.f_c = fl.f_c;
  if (cmd->count("--f-k")) cfg.f_k = fl.f_k;
  if (cmd->count("--epsilon")) cfg.epsilon_fraction = fl.epsilon;
  if (cmd->count("--tol")) cfg.tol = fl.tol;
  if (cmd->count("--tol-b")) cfg.tol_b = fl.tol_b;
  cfg.validate();
  return cfg;
}

BoundaryCurve load_domain(const RunConfig& cfg) {
  if (cfg.domain.empty()) throw InputError("--domain is required for " + cfg.command);
  try {
    return curve_from_spec(read_domain_spec(cfg.domain));
  } catch (const GeometryError& e) {
    throw InputError(cfg.domain + ": " + e.what());
  }
}

Nonlinearity load_f(const RunConfig& cfg) {
  try {
    return nonlinearity_power(cfg.f_c, cfg.f_k);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

fs::path out_path(const RunConfig& cfg, const std::string& name) { return fs::path(cfg.output_dir) / name; }

void save_config(const RunConfig& cfg) { write_json(out_path(cfg, cfg.command + "_config.json"), run_config_to_json(cfg)); }

AnalyzeOptions analyze_options(const RunConfig& cfg) {
  AnalyzeOptions o;
  o.tol = cfg.tol;
  o.tol_b = cfg.tol_b;
  return o;
}

int cmd_check_cec(const RunConfig& cfg) {
  const BoundaryCurve curve = load_domain(cfg);
  const CecDomainReport cec = cec_check_domain(curve, cfg.points, cfg.search);
  const CpcDomainReport cpc = cpc_check_domain(curve, cfg.points);
  write_json(out_path(cfg, "cec_report.json"), cec_report_json(cec, cpc));
  std::printf("cec: %zu/%zu points certified, min margin %.6g\n", cec.points.size() - cec.not_certified.size(),
              cec.points.size(), cec.min_margin);
  return cec.all_feasible() ? kOk : kFailed;
}

int cmd_check_cpc(const RunConfig& cfg) {
  const BoundaryCurve curve = load_domain(cfg);
  const CpcDomainReport cpc = cpc_check_domain(curve, cfg.points);
  write_json(out_path(cfg, "cpc_report.json"), cpc_report_json(cpc));
  std::printf("cpc: %s, max violation %.6g\n", cpc.holds() ? "holds" : "fails", cpc.max_violation);
  return cpc.holds() ? kOk : kFailed;
}

SolveConfig solve_config(const RunConfig& cfg, double default_h) {
  SolveConfig s;
  s.h = cfg.grid_h_or(default_h);
  s.tol_fix = cfg.tol_fix;
  s.max_iter = cfg.max_iter;
  return s;
}

int cmd_solve(const RunConfig& cfg) {
  const BoundaryCurve curve = load_domain(cfg);
  const GridSolution sol = solve_dirichlet(curve, load_f(cfg), solve_config(cfg, 1.0 / 64.0));
  write_solution_csv(out_path(cfg, "solution.csv"), sol);
  write_json(out_path(cfg, "solution.json"), solution_metadata_json(sol));
  std::printf("solve: %zu unknowns, %d iterations, max u %.10g\n", sol.unknowns(), sol.iterations, sol.max_u);
  return sol.positive ? kOk : kFailed;
}

int write_analysis(const RunConfig& cfg, const GridSolution& sol, const BoundaryCurve& curve, Json extra = {}) {
  const ConcavityReport rep = analyze_solution(sol, curve, analyze_options(cfg));
  Json j = concavity_report_json(rep);
  j["solution"] = solution_metadata_json(sol);
  for (auto& [k, v] : extra.items()) j[k] = v;
  write_json(out_path(cfg, "concavity_report.json"), j);
  write_field_csv(out_path(cfg, "field.csv"), rep.field);
  std::printf("verdict: %s (max lambda_max %.6g at (%.6g, %.6g)); boundary hypothesis check: %s\n",
              to_string(rep.verdict.verdict).c_str(), rep.verdict.max_lmax, rep.verdict.point.x(),
              rep.verdict.point.y(), to_string(rep.theorem2.status).c_str());
  if (rep.sqrt_check) std::printf("sqrt(u): %s\n", rep.sqrt_check->concave ? "concave" : "not concave");
  return rep.theorem2.status == Theorem2Status::Violation ? kFailed : kOk;
}

int cmd_analyze(const RunConfig& cfg) {
  const BoundaryCurve curve = load_domain(cfg);
  const GridSolution sol = solve_dirichlet(curve, load_f(cfg), solve_config(cfg, 1.0 / 64.0));
  return write_analysis(cfg, sol, curve);
}

int cmd_perturb(const RunConfig& cfg) {
  const BoundaryCurve base = load_domain(cfg);
  Json report;
  report["schema"] = 1;
  report["t_p"] = cfg.t_p;
  report["gamma"] = cfg.gamma;
  Json entries = Json::array();
  bool ok = true;
  for (std::size_t i = 0; i < cfg.c.size(); ++i) {
    const double c = cfg.c[i];
    Json e;
    e["c"] = c;
    try {
      const double a = cfg.amplitude ? *cfg.amplitude : auto_amplitude(base, cfg.t_p, c);
      e["a"] = a;
      const PerturbedDomain pd = perturb_domain(base, cfg.t_p, c, a);
      const PerturbationVerification v = verify_perturbation(pd, cfg.gamma, cfg.points, cfg.search);
      const std::string name = "perturbed_" + std::to_string(i) + ".json";
      write_json(out_path(cfg, name), domain_spec_to_json(pd.curve.spec()));
      e = verification_json(pd, v);
      e["spec"] = name;
      e["cpc_bound"] = 0.5 * a * std::pow(0.5 * c, 4);
      ok = ok && v.convex && v.contains_base && v.cpc_violated_at_tp && v.cec_feasible;
      std::printf("c=%g a=%.6g: convex %d, cpc violation %.3g, cec %s (min margin %.4g), sup|d'''| %.4g\n", c, a,
                  v.convex, v.cpc_violation, v.cec_feasible ? "feasible" : "infeasible", v.cec_min_margin,
                  v.distances.sup[3]);
    } catch (const GeometryError& ex) {
      e["error"] = ex.what();
      ok = false;
      std::printf("c=%g: %s\n", c, ex.what());
    }
    entries.push_back(std::move(e));
  }
  report["entries"] = std::move(entries);
  write_json(out_path(cfg, "perturb_report.json"), report);
  return ok ? kOk : kFailed;
}

int cmd_demo_nonconcave(const RunConfig& cfg) {
  TriangleLevelsetConfig tc;
  tc.epsilon_fraction = cfg.epsilon_fraction;
  const TriangleLevelset ls = triangle_levelset_domain(tc);
  write_json(out_path(cfg, "levelset_domain.json"), domain_spec_to_json(ls.curve.spec()));
  std::printf("level set: epsilon %.6g (max u on triangle %.6g), min curvature %.4g\n", ls.epsilon, ls.triangle_max_u,
              ls.min_curvature);
  const GridSolution sol = solve_dirichlet(ls.curve, load_f(cfg), solve_config(cfg, 1.0 / 128.0));
  Json extra;
  extra["levelset"] = {{"epsilon_fraction", cfg.epsilon_fraction},
                       {"epsilon", ls.epsilon},
                       {"triangle_max_u", ls.triangle_max_u},
                       {"min_curvature", ls.min_curvature},
                       {"domain", "levelset_domain.json"}};
  return write_analysis(cfg, sol, ls.curve, extra);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concavity of solutions of -Laplace(u) = f(u) on convex planar domains"};
  app.require_subcommand(1);
  Flags fl;
  struct Command {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Command commands[] = {
      {"check-cec", "contact-ellipse condition at boundary points", cmd_check_cec},
      {"check-cpc", "contact-parabola containment at boundary points", cmd_check_cpc},
      {"solve", "solve the Dirichlet problem on a grid", cmd_solve},
      {"analyze", "solve and analyze concavity of the solution", cmd_analyze},
      {"perturb", "build and verify quartic boundary perturbations", cmd_perturb},
      {"demo-nonconcave", "superlevel set of the triangle torsion function", cmd_demo_nonconcave},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    subs.push_back(app.add_subcommand(c.name, c.help));
    add_flags(subs.back(), fl);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    RunConfig cfg;
    try {
      cfg = resolve_config(subs[i], fl);
      save_config(cfg);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return kInputError;
    }
    try {
      return commands[i].run(cfg);
    } catch (const InputError& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return kInputError;
    } catch (const IoError& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return kInputError;
    } catch (const fs::filesystem_error& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return kInputError;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "failed: %s\n", e.what());
      return kFailed;
    }
  }
  return kInputError;
}
