#include "carlson/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "carlson/ergodic.hpp"
#include "carlson/io.hpp"
#include "carlson/kronecker.hpp"
#include "carlson/measure.hpp"
#include "carlson/polynomial.hpp"
#include "json.hpp"

namespace carlson {
namespace {

using ordered = nlohmann::ordered_json;

constexpr const char* kKinds[] = {"verify-sigma", "build-measure", "verify-boundary", "nested-build", "moments",
                                  "kronecker"};
constexpr std::uint64_t kMaxBudget = 10'000'000'000ULL;

bool known_kind(std::string_view kind) {
  for (const char* k : kKinds) {
    if (kind == k) return true;
  }
  return false;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

double tolerance(const ExperimentConfig& c, double fallback) { return c.tol >= 0.0 ? c.tol : fallback; }

void write_text_artifact(const std::string& path, const std::string& text) {
  write_atomically(path, [&](std::ostream& o) { o << text; });
}

ordered index_json(const MultiIndex& alpha) {
  const auto e = alpha.exponents();
  return ordered(std::vector<std::uint32_t>(e.begin(), e.end()));
}

bool mass_recursion_holds(const AtomicLineMeasure& lambda) {
  const auto& masses = lambda.total_mass_by_level();
  for (int k = 1; k <= lambda.levels(); ++k) {
    const double expected =
        k == 1 ? static_cast<double>(lambda.growth()(1))
               : static_cast<double>(lambda.growth()(k) + 1) * masses[static_cast<std::size_t>(k) - 2];
    const double got = masses[static_cast<std::size_t>(k) - 1];
    if (std::abs(got - expected) > 1e-9 * std::max(1.0, expected)) return false;
  }
  return true;
}

struct Outcome {
  ordered metrics = ordered::object();
  bool pass = true;
  ordered extra = ordered::object();
};

Outcome verify_sigma(const ExperimentConfig& c) {
  const DirichletPolynomial f = parse_dirichlet(read_file(c.poly));
  const double target = carlson_limit(f, c.sigma);
  const double sup = std::pow(coefficient_l1(f), 2);
  const ConvergenceRecord record = convergence_sweep(f, LebesgueLine{c.sigma}, target, c.t_grid);
  if (!c.out.empty()) write_atomically(c.out, [&](std::ostream& o) { write_csv(record, o); });

  Outcome r;
  bool within_envelope = true;
  for (const ConvergenceRow& row : record.rows) {
    const double envelope = lebesgue_mean_envelope(f, c.sigma, row.T);
    within_envelope = within_envelope && row.abs_error <= envelope + 1e-12 * std::max(1.0, sup);
    within_envelope = within_envelope && row.time_mean >= -1e-12 && row.time_mean <= sup * (1.0 + 1e-12);
  }
  const double final_error = record.rows.empty() ? 0.0 : record.rows.back().abs_error;
  r.metrics["target"] = target;
  r.metrics["final_abs_error"] = final_error;
  r.metrics["rows"] = record.rows.size();
  r.metrics["within_envelope"] = within_envelope;
  r.pass = within_envelope && final_error < tolerance(c, 1e-2);

  if (c.mc_samples > 0) {
    DirichletPolynomial::Terms scaled;
    for (const auto& [n, a] : f.terms()) scaled.emplace(n, a * std::pow(static_cast<double>(n), -c.sigma));
    const TorusPolynomial F = bohr_lift(DirichletPolynomial(std::move(scaled), f.basis_dim()));
    const MonteCarloEstimate mc = monte_carlo_space_average(F, c.mc_samples, c.seed);
    const bool agrees = std::abs(mc.mean - target) <= 3.0 * mc.std_error + 1e-12;
    r.metrics["mc_mean"] = mc.mean;
    r.metrics["mc_std_error"] = mc.std_error;
    r.metrics["mc_within_3_sigma"] = agrees;
    r.pass = r.pass && agrees;
  }
  return r;
}

BuildOptions build_options(const ExperimentConfig& c) {
  BuildOptions o;
  o.growth = GrowthSchedule::parse(c.growth);
  o.solver_budget = c.budget;
  o.threads = c.threads;
  return o;
}

Outcome build_measure(const ExperimentConfig& c) {
  const TorusPointMassMeasure mu = parse_mu(read_file(c.mu));
  const AtomicLineMeasure lambda = build_point_mass_lambda(mu, c.levels, build_options(c));
  if (!c.out.empty()) write_atomically(c.out, [&](std::ostream& o) { save_atoms(lambda, o); });

  const PrimeBasis basis(mu.dimension());
  bool residuals_ok = true;
  double worst_ratio = 0.0;
  for (const LineAtom& a : lambda.atoms()) {
    const std::size_t active = std::min<std::size_t>(static_cast<std::size_t>(a.level), mu.dimension());
    const auto angles = mu.atoms()[static_cast<std::size_t>(a.source) - 1].omega.angles();
    const std::vector<double> targets(angles.begin(), angles.begin() + static_cast<std::ptrdiff_t>(active));
    const double eps = std::ldexp(1.0, -a.level);
    for (double res : residuals(basis, active, a.t, targets)) {
      residuals_ok = residuals_ok && res < eps;
      worst_ratio = std::max(worst_ratio, res / eps);
    }
  }
  Outcome r;
  r.metrics["atoms"] = lambda.atoms().size();
  r.metrics["masses"] = lambda.total_mass_by_level();
  r.metrics["boundaries"] = lambda.level_boundaries();
  r.metrics["worst_residual_ratio"] = worst_ratio;
  const bool recursion = mass_recursion_holds(lambda);
  r.metrics["mass_recursion"] = recursion;
  r.pass = recursion && residuals_ok;
  return r;
}

Outcome verify_boundary(const ExperimentConfig& c) {
  const DirichletPolynomial f = parse_dirichlet(read_file(c.poly));
  const TorusPointMassMeasure mu = parse_mu(read_file(c.mu));
  const AtomicLineMeasure lambda = load_atoms_text(read_file(c.atoms));
  require(lambda.levels() >= 1, "atom file holds no construction levels");
  for (const LineAtom& a : lambda.atoms()) {
    require(a.source >= 1 && static_cast<std::size_t>(a.source) <= mu.size(),
            "atom file references source " + std::to_string(a.source) + " outside the measure");
  }
  const TorusPolynomial F = bohr_lift(f, PrimeBasis(mu.dimension()));
  const double target = point_mass_space_average(F, mu);
  const double sup = std::pow(coefficient_l1(F), 2);
  const ConvergenceRecord record = convergence_sweep(
      f, std::cref(lambda), target, std::span<const double>(lambda.level_boundaries()));
  if (!c.out.empty()) write_atomically(c.out, [&](std::ostream& o) { write_csv(record, o); });

  Outcome r;
  ordered bounds = ordered::array();
  bool ok = true;
  for (std::size_t i = 0; i < record.rows.size(); ++i) {
    const BoundaryBound b = boundary_error_bound(F, lambda, mu.dimension(), static_cast<int>(i) + 1);
    bounds.push_back(b.total);
    const ConvergenceRow& row = record.rows[i];
    ok = ok && row.abs_error <= b.total && row.time_mean >= -1e-12 && row.time_mean <= sup * (1.0 + 1e-12);
  }
  r.metrics["target"] = target;
  r.metrics["final_abs_error"] = record.rows.back().abs_error;
  r.metrics["bounds"] = bounds;
  r.pass = ok;
  return r;
}

Outcome nested_build(const ExperimentConfig& c) {
  const NestedConstructionPlan plan = parse_nested_plan(read_file(c.plan));
  const NestedBuild built = build_nested_lambda(plan, c.levels, build_options(c));
  if (!c.out.empty()) write_atomically(c.out, [&](std::ostream& o) { save_atoms(built.lambda, o); });

  Outcome r;
  bool ok = true;
  double worst_ratio = 0.0;
  for (const WindowRecord& w : built.windows) {
    const double ratio = w.estimate / std::ldexp(1.0, -w.level);
    worst_ratio = std::max(worst_ratio, ratio);
    ok = ok && ratio < 1.0;
  }
  const bool recursion = mass_recursion_holds(built.lambda);
  r.metrics["atoms"] = built.lambda.atoms().size();
  r.metrics["windows"] = built.windows.size();
  r.metrics["masses"] = built.lambda.total_mass_by_level();
  r.metrics["worst_estimate_ratio"] = worst_ratio;
  r.metrics["mass_recursion"] = recursion;
  r.pass = ok && recursion;
  return r;
}

Outcome moments(const ExperimentConfig& c) {
  std::vector<std::pair<MultiIndex, MultiIndex>> pairs;
  for (auto& [a, b] : parse_pairs(c.pairs)) pairs.emplace_back(MultiIndex(std::move(a)), MultiIndex(std::move(b)));

  std::optional<TorusPointMassMeasure> mu;
  if (!c.mu.empty()) mu = parse_mu(read_file(c.mu));
  std::optional<AtomicLineMeasure> lambda;
  double horizon = c.t_max;
  if (c.lebesgue) {
    if (horizon == 0.0) horizon = 1e5;
  } else {
    lambda = load_atoms_text(read_file(c.atoms));
    require(lambda->levels() >= 1, "atom file holds no construction levels");
    if (horizon == 0.0) horizon = lambda->level_boundaries().back();
  }
  const LineMeasure measure = c.lebesgue ? LineMeasure(LebesgueLine{0.0}) : LineMeasure(std::cref(*lambda));
  const auto result = recover_moments(measure, pairs, horizon, mu ? &*mu : nullptr);

  const double tol = tolerance(c, 0.2);
  Outcome r;
  double worst = 0.0;
  std::ostringstream lines;
  for (const MomentPair& m : result) {
    std::optional<Complex> reference = m.reference;
    if (!reference && c.lebesgue) reference = Complex(m.alpha == m.beta ? 1.0 : 0.0, 0.0);
    ordered line;
    line["alpha"] = index_json(m.alpha);
    line["beta"] = index_json(m.beta);
    line["re"] = m.empirical.real();
    line["im"] = m.empirical.imag();
    if (reference) {
      const double error = std::abs(m.empirical - *reference);
      worst = std::max(worst, error);
      line["ref_re"] = reference->real();
      line["ref_im"] = reference->imag();
      line["abs_error"] = error;
    }
    lines << line.dump() << '\n';
  }
  if (!c.out.empty()) write_text_artifact(c.out, lines.str());
  r.metrics["pairs"] = result.size();
  r.metrics["t_max"] = horizon;
  r.metrics["worst_abs_error"] = worst;
  r.pass = worst < tol;
  return r;
}

Outcome kronecker(const ExperimentConfig& c) {
  const KroneckerProblem problem(PrimeBasis(c.dim), c.dim, c.theta, c.eps, c.t_min);
  static const ReferenceScan reference;
  const KroneckerSolver& solver = c.solver == "reference" ? static_cast<const KroneckerSolver&>(reference)
                                                           : default_solver();
  const KroneckerSolution s = solver.solve(problem, c.budget);
  Outcome r;
  r.extra["t"] = s.t;
  r.extra["residuals"] = s.residuals;
  r.extra["q"] = s.q;
  r.metrics["steps"] = s.steps;
  r.metrics["max_residual"] = *std::max_element(s.residuals.begin(), s.residuals.end());
  if (!c.out.empty()) {
    ordered line;
    line["t"] = s.t;
    line["residuals"] = s.residuals;
    line["q"] = s.q;
    write_text_artifact(c.out, line.dump() + "\n");
  }
  for (double res : s.residuals) r.pass = r.pass && res < c.eps;
  return r;
}

std::vector<std::uint32_t> parse_exponents(const std::string& text) {
  std::vector<std::uint32_t> out;
  for (double v : parse_list(text)) {
    require(v >= 0.0 && v == std::floor(v) && v <= 4294967295.0, "exponents must be non-negative integers");
    out.push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    require(!item.empty(), "empty entry in list '" + text + "'");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == item.size() && std::isfinite(v), "not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> parse_pairs(const std::string& text) {
  std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    require(colon != std::string::npos && item.find(':', colon + 1) == std::string::npos,
            "moment pair '" + item + "' must look like a1,a2:b1,b2");
    out.emplace_back(parse_exponents(item.substr(0, colon)), parse_exponents(item.substr(colon + 1)));
  }
  require(!out.empty(), "no moment pairs given");
  return out;
}

void validate(const ExperimentConfig& c) {
  require(known_kind(c.kind), "unknown experiment kind '" + c.kind + "'");
  require(c.budget >= 1 && c.budget <= kMaxBudget, "budget must lie in [1, 1e10]");
  require(c.threads >= 1 && c.threads <= 256, "threads must lie in [1, 256]");
  const bool builds = c.kind == "build-measure" || c.kind == "nested-build";
  if (builds) {
    require(c.levels >= 1 && c.levels <= 8, "levels must lie in [1, 8]");
    try {
      (void)GrowthSchedule::parse(c.growth);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  if (c.kind == "verify-sigma") {
    require(!c.poly.empty(), "verify-sigma needs --poly");
    require(c.sigma >= 0.0 && std::isfinite(c.sigma), "sigma must be finite and >= 0");
    require(!c.t_grid.empty(), "T grid is empty");
    for (std::size_t i = 0; i < c.t_grid.size(); ++i) {
      require(c.t_grid[i] > 0.0, "T grid must be positive");
      require(i == 0 || c.t_grid[i] > c.t_grid[i - 1], "T grid must be increasing");
    }
  }
  if (c.kind == "build-measure") require(!c.mu.empty(), "build-measure needs --mu");
  if (c.kind == "nested-build") require(!c.plan.empty(), "nested-build needs --plan");
  if (c.kind == "verify-boundary") {
    require(!c.poly.empty() && !c.atoms.empty() && !c.mu.empty(), "verify-boundary needs --poly, --atoms and --mu");
  }
  if (c.kind == "moments") {
    require(c.lebesgue != !c.atoms.empty(), "moments needs exactly one of --atoms and --lebesgue");
    require(c.t_max >= 0.0 && std::isfinite(c.t_max), "t-max must be finite and positive");
    (void)parse_pairs(c.pairs);
  }
  if (c.kind == "kronecker") {
    require(c.dim >= 1 && c.dim <= 64, "dim must lie in [1, 64]");
    require(c.theta.size() == c.dim, "kronecker needs exactly --dim target angles");
    require(c.eps > 1e-6 && c.eps < std::numbers::pi, "eps must lie in (1e-6, pi)");
    require(c.t_min >= 0.0 && std::isfinite(c.t_min), "t-min must be finite and >= 0");
    require(c.solver == "windowed" || c.solver == "reference", "solver must be windowed or reference");
  }
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    validate(config);
    if (config.kind == "verify-sigma") outcome = verify_sigma(config);
    else if (config.kind == "build-measure") outcome = build_measure(config);
    else if (config.kind == "verify-boundary") outcome = verify_boundary(config);
    else if (config.kind == "nested-build") outcome = nested_build(config);
    else if (config.kind == "moments") outcome = moments(config);
    else outcome = kronecker(config);
  } catch (const ConstructionError& e) {
    ordered d;
    d["kind"] = config.kind;
    d["error"] = "construction";
    d["message"] = e.what();
    d["level"] = e.level;
    d["source"] = e.source;
    d["repetition"] = e.repetition;
    d["pass"] = false;
    out << d.dump() << '\n';
    return kConstructionFailure;
  } catch (const BudgetError& e) {
    ordered d;
    d["kind"] = config.kind;
    d["error"] = "budget";
    d["message"] = e.what();
    d["best_residuals"] = e.best_residuals;
    d["steps"] = e.steps;
    d["pass"] = false;
    out << d.dump() << '\n';
    return kConstructionFailure;
  } catch (const CapacityError& e) {
    ordered d;
    d["kind"] = config.kind;
    d["error"] = "capacity";
    d["message"] = e.what();
    d["pass"] = false;
    out << d.dump() << '\n';
    return kConstructionFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  ordered summary;
  summary["kind"] = config.kind;
  summary["wall_time"] = wall;
  summary["key_metrics"] = outcome.metrics;
  summary["pass"] = outcome.pass;
  for (const auto& [key, value] : outcome.extra.items()) summary[key] = value;
  out << summary.dump() << '\n';
  return outcome.pass ? kPass : kToleranceFailure;
}

namespace {

// Turn a JSON config object into flag tokens. Arrays become comma lists,
// true booleans become bare flags.
std::vector<std::string> config_tokens(const nlohmann::json& j, std::string& kind) {
  require(j.is_object(), "config file must hold a JSON object");
  std::vector<std::string> tokens;
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") {
      require(value.is_string(), "config kind must be a string");
      kind = value.get<std::string>();
      continue;
    }
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back(flag);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!joined.empty()) joined += ',';
        joined += item.is_string() ? item.get<std::string>() : item.dump();
      }
      tokens.push_back(flag);
      tokens.push_back(joined);
    } else {
      tokens.push_back(flag);
      tokens.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  return tokens;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);

  // Locate --config and the experiment kind before CLI11 sees anything, so
  // file entries can be placed ahead of the explicit flags.
  std::string config_path;
  std::string kind;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config") {
      if (i + 1 >= args.size()) {
        err << "error: --config needs a path\n";
        return kUsageError;
      }
      config_path = args[++i];
    } else if (a.starts_with("--config=")) {
      config_path = a.substr(9);
    } else if (kind.empty() && known_kind(a)) {
      kind = a;
    } else {
      rest.push_back(a);
    }
  }
  std::vector<std::string> tokens;
  try {
    if (!config_path.empty()) {
      std::string file_kind;
      const auto j = nlohmann::json::parse(read_file(config_path));
      tokens = config_tokens(j, file_kind);
      if (kind.empty()) kind = file_kind;
    }
  } catch (const std::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return kUsageError;
  }

  ExperimentConfig c;
  std::string t_grid;
  std::string theta;
  CLI::App app{"Carlson-type ergodic identities: measure constructions and numerical verification", "carlson"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1, 1);
  app.add_option("--seed", c.seed, "Seed for every random draw");
  app.add_option("--threads", c.threads, "Worker threads for per-repetition solves");
  app.add_option("--out", c.out, "Artifact path (written atomically)");
  app.add_option("--config", config_path, "JSON config; explicit flags override it");

  auto* sigma = app.add_subcommand("verify-sigma", "Closed-form vertical-line means against sum |a_n|^2 n^{-2 sigma}");
  sigma->add_option("--poly", c.poly, "Dirichlet polynomial JSON");
  sigma->add_option("--sigma", c.sigma, "Real part of the vertical line");
  sigma->add_option("--t-grid", t_grid, "Comma list of increasing T values");
  sigma->add_option("--tol", c.tol, "Required final absolute error (default 1e-2)");
  sigma->add_option("--mc-samples", c.mc_samples, "Also check a seeded Monte Carlo torus average");

  auto* build = app.add_subcommand("build-measure", "Atomic line measure from a point-mass torus measure");
  build->add_option("--mu", c.mu, "Point-mass measure JSON");
  build->add_option("--levels", c.levels, "Construction levels (1-8)");
  build->add_option("--growth", c.growth, "default | 2^k | const:<n>");
  build->add_option("--budget", c.budget, "Kronecker scan budget per solve (<= 1e10)");

  auto* boundary = app.add_subcommand("verify-boundary", "Atomic time means against the point-mass space average");
  boundary->add_option("--poly", c.poly, "Dirichlet polynomial JSON");
  boundary->add_option("--atoms", c.atoms, "Atom file (JSON Lines)");
  boundary->add_option("--mu", c.mu, "Point-mass measure JSON the atoms were built from");

  auto* nested = app.add_subcommand("nested-build", "Nested construction over a sequence of point-mass measures");
  nested->add_option("--plan", c.plan, "Plan JSON with mu_sequence and test_polynomials");
  nested->add_option("--levels", c.levels, "Construction levels (1-8)");
  nested->add_option("--growth", c.growth, "default | 2^k | const:<n>");
  nested->add_option("--budget", c.budget, "Kronecker scan budget per solve (<= 1e10)");

  auto* mom = app.add_subcommand("moments", "Torus moments recovered from a line measure");
  mom->add_option("--atoms", c.atoms, "Atom file (JSON Lines)");
  mom->add_flag("--lebesgue", c.lebesgue, "Use Lebesgue measure on the line");
  mom->add_option("--pairs", c.pairs, "a1,a2:b1,b2;... moment exponent pairs");
  mom->add_option("--t-max", c.t_max, "Horizon T");
  mom->add_option("--mu", c.mu, "Reference point-mass measure JSON");
  mom->add_option("--tol", c.tol, "Required moment accuracy (default 0.2)");

  auto* kron = app.add_subcommand("kronecker", "Simultaneous approximation of target angles by the prime flow");
  kron->add_option("--dim", c.dim, "Number of active primes k");
  kron->add_option("--theta", theta, "Comma list of k target angles");
  kron->add_option("--eps", c.eps, "Tolerance in (1e-6, pi)");
  kron->add_option("--t-min", c.t_min, "Solutions satisfy t > t-min");
  kron->add_option("--budget", c.budget, "Scan budget (<= 1e10)");
  kron->add_option("--solver", c.solver, "windowed | reference");

  for (auto* sub : {sigma, build, boundary, nested, mom, kron}) sub->fallthrough();

  std::vector<std::string> ordered_args;
  if (!kind.empty()) ordered_args.push_back(kind);
  ordered_args.insert(ordered_args.end(), tokens.begin(), tokens.end());
  ordered_args.insert(ordered_args.end(), rest.begin(), rest.end());
  std::reverse(ordered_args.begin(), ordered_args.end());  // CLI11 consumes from the back

  try {
    app.parse(ordered_args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  c.kind = app.get_subcommands().front()->get_name();
  try {
    if (!t_grid.empty()) c.t_grid = parse_list(t_grid);
    if (!theta.empty()) c.theta = parse_list(theta);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return run(c, out, err);
}

}  // namespace carlson
