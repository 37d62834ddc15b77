// Command-line driver: winfty, solve, evolve, spectrum, sweep, verify.
//
// Precedence: built-in defaults < --config JSON file < explicit flags.
// Exit codes: 0 success, 2 config/I/O, 3 convergence, 4 numeric.
// Errors are printed to stdout as {"error": kind, "message": ...}.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "burgers/errors.hpp"
#include "burgers/io.hpp"
#include "burgers/stability.hpp"
#include "burgers/verify.hpp"
#include "burgers/vortex.hpp"
#include "burgers/winfty.hpp"

using namespace burgers;
using io::Json;

namespace {

struct RunConfig {
  SpectralConfig grid;
  double alpha = 1.0;
  double lambda = 0.05;
  std::vector<double> alphas;
  std::vector<double> lambdas;
  std::string out = "out";
  std::uint64_t seed = 1;
  std::string check;           // lambda2 | largeR | smallR
  std::string perturb = "random";  // d1 | d2 | random
  std::optional<double> dt;
  std::optional<double> t_final;
  int k = 6;
  bool basin = false;

  void validate() const {
    grid.validate();
    if (!check.empty() && check != "lambda2" && check != "largeR" && check != "smallR")
      throw ConfigError("check", "expected lambda2, largeR or smallR");
    if (perturb != "d1" && perturb != "d2" && perturb != "random")
      throw ConfigError("perturb", "expected d1, d2 or random");
    if (dt && !(*dt > 0.0)) throw ConfigError("dt", "dt must be positive");
    if (t_final && !(*t_final > 0.0)) throw ConfigError("tfinal", "tfinal must be positive");
    if (k < 4) throw ConfigError("k", "need k >= 4");
  }
};

void load_config_file(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  try {
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("lambda")) c.lambda = j["lambda"].get<double>();
    if (j.contains("alphas")) c.alphas = j["alphas"].get<std::vector<double>>();
    if (j.contains("lambdas")) c.lambdas = j["lambdas"].get<std::vector<double>>();
    if (j.contains("rmax")) c.grid.r_max = j["rmax"].get<double>();
    if (j.contains("nr")) c.grid.n_r = j["nr"].get<int>();
    if (j.contains("nmodes")) c.grid.n_modes = j["nmodes"].get<int>();
    if (j.contains("tol")) c.grid.picard_tol = j["tol"].get<double>();
    if (j.contains("dt")) c.dt = j["dt"].get<double>();
    if (j.contains("tfinal")) c.t_final = j["tfinal"].get<double>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("check")) c.check = j["check"].get<std::string>();
    if (j.contains("perturb")) c.perturb = j["perturb"].get<std::string>();
    if (j.contains("k")) c.k = j["k"].get<int>();
  } catch (const Json::exception& e) {
    throw ConfigError("config", std::string("wrong value type: ") + e.what());
  }
}

// Flag values, applied on top of the config file only when given.
struct Flags {
  std::map<std::string, CLI::Option*> opts;
  double alpha = 0, lambda = 0, rmax = 0, tol = 0, dt = 0, tfinal = 0;
  int nr = 0, nmodes = 0, k = 0;
  std::uint64_t seed = 0;
  std::string out, check, perturb, alphas, lambdas, config;
  bool basin = false;

  bool given(const std::string& name) const {
    auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }
};

std::vector<double> parse_list(const std::string& s, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(field, "cannot parse '" + item + "' as a number");
    }
  }
  if (out.empty()) throw ConfigError(field, "empty list");
  return out;
}

RunConfig resolve(const Flags& f) {
  RunConfig c;
  if (f.given("config")) load_config_file(f.config, c);
  if (f.given("alpha")) c.alpha = f.alpha;
  if (f.given("lambda")) c.lambda = f.lambda;
  if (f.given("rmax")) c.grid.r_max = f.rmax;
  if (f.given("nr")) c.grid.n_r = f.nr;
  if (f.given("nmodes")) c.grid.n_modes = f.nmodes;
  if (f.given("tol")) c.grid.picard_tol = f.tol;
  if (f.given("dt")) c.dt = f.dt;
  if (f.given("tfinal")) c.t_final = f.tfinal;
  if (f.given("out")) c.out = f.out;
  if (f.given("seed")) c.seed = f.seed;
  if (f.given("check")) c.check = f.check;
  if (f.given("perturb")) c.perturb = f.perturb;
  if (f.given("alphas")) c.alphas = parse_list(f.alphas, "alphas");
  if (f.given("lambdas")) c.lambdas = parse_list(f.lambdas, "lambdas");
  if (f.given("k")) c.k = f.k;
  if (f.given("basin")) c.basin = f.basin;
  c.validate();
  return c;
}

EvolutionConfig evolution_config(const RunConfig& c) {
  EvolutionConfig e;
  if (c.dt) e.dt = *c.dt;
  if (c.t_final) {
    e.t_final = *c.t_final;
    e.fit_end = std::min(e.fit_end, e.t_final);
    e.fit_start = std::min(e.fit_start, 0.25 * e.fit_end);
  }
  e.validate();
  return e;
}

void emit(const Json& j) { std::cout << j.dump(2) << std::endl; }

io::fs::path output_dir(const RunConfig& c) {
  io::ensure_writable_dir(c.out);
  return c.out;
}

int run_winfty(const RunConfig& c) {
  const io::fs::path dir = output_dir(c);
  const WInfty w = compute_w_infty(make_grid(c.grid));
  io::write_winfty_csv(dir / "winfty_profile.csv", w.profile);
  Json j = io::winfty_summary(w.profile);
  j["grid"] = io::grid_json(c.grid);
  io::write_json(dir / "winfty_summary.json", j);
  emit(j);
  return 0;
}

Json check_json(const RunConfig& c, const GridPtr& g) {
  Json j;
  if (c.check == "lambda2") {
    const auto r = expansion_check_lambda(g, c.alpha, c.lambda);
    j = {{"check", "lambda2"}, {"alpha", r.alpha},   {"lambda", r.lambda},
         {"d_full", r.d_full}, {"d_half", r.d_half}, {"ratio", r.ratio},
         {"quadratic", r.quadratic}};
  } else if (c.check == "largeR") {
    const auto alphas = c.alphas.empty() ? std::vector<double>{10.0, 30.0, 100.0} : c.alphas;
    const auto r = large_R_check(g, c.lambda, alphas);
    Json rows = Json::array();
    for (const auto& row : r.rows)
      rows.push_back({{"alpha", row.alpha}, {"deviation", row.deviation}, {"direction", row.direction}});
    j = {{"check", "largeR"},
         {"lambda", r.lambda},
         {"rows", rows},
         {"deviation_decreasing", r.deviation_decreasing},
         {"direction_ratio", r.direction_ratio}};
  } else if (c.check == "smallR") {
    const auto alphas = c.alphas.empty() ? std::vector<double>{0.5, 0.25} : c.alphas;
    const auto r = small_R_check(g, c.lambda, alphas);
    Json rows = Json::array();
    for (const auto& row : r.rows)
      rows.push_back(
          {{"alpha", row.alpha}, {"deviation", row.deviation}, {"first_order", row.first_order}});
    j = {{"check", "smallR"}, {"lambda", r.lambda}, {"rows", rows}, {"ratios", r.ratios}};
  }
  return j;
}

int run_solve(const RunConfig& c) {
  const io::fs::path dir = output_dir(c);
  const GridPtr g = make_grid(c.grid);
  const VortexSolution s = picard_solve(g, c.alpha, c.lambda);
  io::write_profile_csv(dir / "solution_profile.csv", s.w);
  io::write_field_csv(dir / "solution_contour.csv", s.omega);
  Json j = io::solution_summary(s);
  if (!c.check.empty()) j["check"] = check_json(c, g);
  io::write_json(dir / "solution_summary.json", j);
  emit(j);
  return 0;
}

int run_evolve(const RunConfig& c) {
  const io::fs::path dir = output_dir(c);
  const EvolutionConfig e = evolution_config(c);
  const GridPtr g = make_grid(c.grid);
  const VortexSolution v = picard_solve(g, c.alpha, c.lambda);
  ModeField direction = BandLimitedField::random(std::min(6, g->n_modes()), c.seed).sample(g);
  if (c.perturb != "random") {
    // At alpha = 0 the vortex is G itself (omega stores only alpha G + w).
    const ModeField base = c.alpha == 0.0 ? gaussian_profile(g) : v.omega;
    direction = c.perturb == "d1" ? partial_x1(base) : partial_x2(base);
  }
  const double eps = 1e-3 * (1.0 + std::abs(c.alpha));
  const ModeField w0 = (eps / norm_X(direction)) * direction;

  const StabilityReport r = evolve_perturbation(v, w0, e);
  const double basin = c.basin ? estimate_basin(v, direction, e)
                               : std::numeric_limits<double>::quiet_NaN();
  io::write_trajectory_csv(dir / "trajectory.csv", r.energy_series);
  Json j = io::stability_summary(r, basin);
  io::write_json(dir / "stability_report.json", j);
  emit(j);
  return 0;
}

int run_spectrum(const RunConfig& c) {
  const io::fs::path dir = output_dir(c);
  const GridPtr g = make_grid(c.grid);
  const VortexSolution v = picard_solve(g, c.alpha, c.lambda);
  const double dt = c.dt.value_or(2e-2);
  const auto ev = leading_eigenvalues(v, c.k, 2.0, dt);
  Json list = Json::array();
  std::vector<double> real_parts;
  for (const auto& e : ev) {
    list.push_back({{"re", e.real()}, {"im", e.imag()}});
    real_parts.push_back(-e.real());
  }
  Json groups = Json::array();
  for (const auto& grp : group_eigenvalues(real_parts, 1e-4))
    groups.push_back({{"real_part", -grp.value}, {"multiplicity", grp.multiplicity}});
  Json j = {{"alpha", c.alpha}, {"lambda", c.lambda}, {"eigenvalues", list}, {"groups", groups}};
  io::write_json(dir / "spectrum.json", j);
  emit(j);
  return 0;
}

int run_sweep(const RunConfig& c) {
  const io::fs::path dir = output_dir(c);
  const auto alphas = c.alphas.empty() ? std::vector<double>{1.0, 10.0, 100.0} : c.alphas;
  const auto lambdas = c.lambdas.empty() ? std::vector<double>{0.01, 0.05, 0.1} : c.lambdas;
  const GridPtr g = make_grid(c.grid);
  // Translation eigenpairs are checked with at least 10 modes: the derivative
  // of omega loses its top mode, and at lambda = 0.1 that costs 2.6e-5 with 8.
  SpectralConfig eig_cfg = c.grid;
  eig_cfg.n_modes = std::max(10, c.grid.n_modes);
  const GridPtr ge = make_grid(eig_cfg);

  Json rows = Json::array();
  std::ofstream csv(dir / "sweep.csv");
  if (!csv) throw IoError("cannot open " + (dir / "sweep.csv").string());
  csv.precision(17);
  csv << "alpha,lambda,residual,iterations,contraction_max,norm_Y,mean_error,odd_modes,"
         "min_over_max,eigen_residual_1,eigen_residual_2,all_pass\n";
  for (double a : alphas) {
    const VortexProblem p(g, a), pe(ge, a);
    for (double l : lambdas) {
      const VortexSolution s = p.solve(l);
      const auto [e1, e2] = translation_residuals(pe.solve(l));
      const Eigen::MatrixXd vals = synthesize(s.omega, 64);
      const double hi = vals.maxCoeff();
      const double min_over_max = hi > 0.0 ? vals.minCoeff() / hi : 0.0;
      const double mean_error = std::abs(mean(s.omega) - a);
      const double odd = odd_mode_size(s.w);
      const bool pass = s.residual_X <= c.grid.picard_tol && s.max_contraction() < 1.0 &&
                        mean_error <= 1e-9 * std::max(1.0, std::abs(a)) && odd <= 1e-12 &&
                        (a <= 0.0 || l > 0.1 || min_over_max >= -1e-12) && e1 < 1e-5 && e2 < 1e-5;
      rows.push_back({{"alpha", a},
                      {"lambda", l},
                      {"residual", s.residual_X},
                      {"iterations", s.iterations},
                      {"contraction_max", s.max_contraction()},
                      {"norm_Y", s.norm_Y()},
                      {"mean_error", mean_error},
                      {"odd_modes", odd},
                      {"min_over_max", min_over_max},
                      {"eigen_residual_1", e1},
                      {"eigen_residual_2", e2},
                      {"all_pass", pass}});
      csv << a << "," << l << "," << s.residual_X << "," << s.iterations << ","
          << s.max_contraction() << "," << s.norm_Y() << "," << mean_error << "," << odd << ","
          << min_over_max << "," << e1 << "," << e2 << "," << (pass ? 1 : 0) << "\n";
    }
  }
  if (!csv.flush()) throw IoError("write to sweep.csv failed");
  io::write_json(dir / "sweep.json", rows);
  emit(rows);
  return 0;
}

int run_verify(const RunConfig& c) {
  int failed = 0;
  Json rows = Json::array();
  run_acceptance(c.grid, [&](const CriterionResult& r) {
    std::cerr << format_result(r) << std::endl;
    rows.push_back({{"id", r.id},
                    {"title", r.title},
                    {"passed", r.passed},
                    {"measured", r.measured}});
    if (!r.passed) ++failed;
  });
  const io::fs::path dir = output_dir(c);
  io::write_json(dir / "verify.json", rows);
  emit(rows);
  return failed == 0 ? 0 : 1;
}

int exit_code(const Error& e) {
  const std::string kind = e.kind();
  if (kind == "convergence") return 3;
  if (kind == "numeric") return 4;
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymmetric Burgers vortices: stationary solutions and stability"};
  app.require_subcommand(1);
  Flags f;

  auto add_grid = [&](CLI::App* sub) {
    f.opts["config"] = sub->add_option("--config", f.config, "JSON file with run parameters");
    f.opts["rmax"] = sub->add_option("--rmax", f.rmax, "outer radius");
    f.opts["nr"] = sub->add_option("--nr", f.nr, "radial nodes");
    f.opts["nmodes"] = sub->add_option("--nmodes", f.nmodes, "azimuthal modes");
    f.opts["tol"] = sub->add_option("--tol", f.tol, "Picard tolerance");
    f.opts["out"] = sub->add_option("--out", f.out, "output directory");
    f.opts["seed"] = sub->add_option("--seed", f.seed, "seed for random test fields");
  };
  auto add_params = [&](CLI::App* sub) {
    f.opts["alpha"] = sub->add_option("--alpha", f.alpha, "circulation");
    f.opts["lambda"] = sub->add_option("--lambda", f.lambda, "strain asymmetry");
  };

  CLI::App* winfty = app.add_subcommand("winfty", "large-circulation limit profile");
  CLI::App* solve = app.add_subcommand("solve", "stationary vortex by Picard iteration");
  CLI::App* evolve = app.add_subcommand("evolve", "evolve a perturbation of the vortex");
  CLI::App* spectrum = app.add_subcommand("spectrum", "rightmost eigenvalues of the linearization");
  CLI::App* sweep = app.add_subcommand("sweep", "invariant table over (alpha, lambda)");
  CLI::App* verify = app.add_subcommand("verify", "run all acceptance criteria");
  // Each option map entry is overwritten per subcommand; only the parsed
  // subcommand's options can have a nonzero count, so look them up there.
  std::map<CLI::App*, std::map<std::string, CLI::Option*>> per_sub;
  for (CLI::App* sub : {winfty, solve, evolve, spectrum, sweep, verify}) {
    f.opts.clear();
    add_grid(sub);
    if (sub != winfty && sub != verify) add_params(sub);
    if (sub == solve) {
      f.opts["check"] = sub->add_option("--check", f.check, "lambda2 | largeR | smallR");
      f.opts["alphas"] = sub->add_option("--alphas", f.alphas, "comma-separated alphas for --check");
    }
    if (sub == evolve || sub == spectrum) f.opts["dt"] = sub->add_option("--dt", f.dt, "time step");
    if (sub == evolve) {
      f.opts["tfinal"] = sub->add_option("--tfinal", f.tfinal, "final time");
      f.opts["perturb"] = sub->add_option("--perturb", f.perturb, "d1 | d2 | random");
      f.opts["basin"] = sub->add_flag("--basin", f.basin, "also estimate the basin by doubling");
    }
    if (sub == spectrum) f.opts["k"] = sub->add_option("--k", f.k, "number of eigenvalues (>= 4)");
    if (sub == sweep) {
      f.opts["alphas"] = sub->add_option("--alphas", f.alphas, "comma-separated alphas");
      f.opts["lambdas"] = sub->add_option("--lambdas", f.lambdas, "comma-separated lambdas");
    }
    per_sub[sub] = f.opts;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit(io::error_json("config", e.what()));
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  f.opts = per_sub[chosen];
  try {
    const RunConfig c = resolve(f);
    if (chosen == winfty) return run_winfty(c);
    if (chosen == solve) return run_solve(c);
    if (chosen == evolve) return run_evolve(c);
    if (chosen == spectrum) return run_spectrum(c);
    if (chosen == sweep) return run_sweep(c);
    return run_verify(c);
  } catch (const ConvergenceError& e) {
    emit(io::error_json(e.kind(), e.what(), e.residual_history()));
    return 3;
  } catch (const Error& e) {
    emit(io::error_json(e.kind(), e.what()));
    return exit_code(e);
  } catch (const std::exception& e) {
    emit(io::error_json("numeric", e.what()));
    return 4;
  }
}
