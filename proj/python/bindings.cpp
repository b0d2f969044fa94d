#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <functional>
#include <string>
#include <vector>

#include "carlson/ergodic.hpp"
#include "carlson/errors.hpp"
#include "carlson/io.hpp"
#include "carlson/kronecker.hpp"
#include "carlson/measure.hpp"
#include "carlson/polynomial.hpp"

namespace py = pybind11;
using namespace carlson;

namespace {

using IndexTerms = std::map<std::vector<std::uint32_t>, Complex>;

TorusPolynomial make_torus(const IndexTerms& terms, std::size_t basis_dim) {
  TorusPolynomial::Terms out;
  for (const auto& [alpha, a] : terms) {
    if (!out.emplace(MultiIndex(alpha), a).second) throw InvariantError("duplicate multi-index");
  }
  return TorusPolynomial(std::move(out), PrimeBasis(basis_dim));
}

py::dict torus_terms(const TorusPolynomial& F) {
  py::dict out;
  for (const auto& [alpha, a] : F.terms()) {
    const auto e = alpha.exponents();
    out[py::tuple(py::cast(std::vector<std::uint32_t>(e.begin(), e.end())))] = a;
  }
  return out;
}

std::vector<std::uint32_t> exponents(const MultiIndex& alpha) {
  const auto e = alpha.exponents();
  return {e.begin(), e.end()};
}

TorusPointMassMeasure make_mu(const std::vector<std::pair<std::vector<double>, double>>& atoms, std::size_t dim) {
  std::vector<TorusAtom> out;
  out.reserve(atoms.size());
  for (const auto& [theta, c] : atoms) out.push_back({TorusPoint(theta), c});
  return TorusPointMassMeasure(std::move(out), dim);
}

BuildOptions options(const std::string& growth, std::uint64_t budget, std::size_t threads) {
  BuildOptions o;
  o.growth = GrowthSchedule::parse(growth);
  o.solver_budget = budget;
  o.threads = threads;
  return o;
}

std::vector<std::pair<MultiIndex, MultiIndex>> make_pairs(
    const std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>>& pairs) {
  std::vector<std::pair<MultiIndex, MultiIndex>> out;
  for (const auto& [a, b] : pairs) out.emplace_back(MultiIndex(a), MultiIndex(b));
  return out;
}

py::list moments_list(const std::vector<MomentPair>& moments) {
  py::list out;
  for (const MomentPair& m : moments) {
    py::dict d;
    d["alpha"] = exponents(m.alpha);
    d["beta"] = exponents(m.beta);
    d["empirical"] = m.empirical;
    d["reference"] = m.reference ? py::cast(*m.reference) : py::none();
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_carlson, m) {
  m.doc() = "Dirichlet polynomials, Kronecker approximation and atomic line measures.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", base);
  py::register_exception<OverflowError>(m, "OverflowError", base);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<InvariantError>(m, "InvariantError", base);
  py::register_exception<BudgetError>(m, "BudgetError", base);
  py::register_exception<ConstructionError>(m, "ConstructionError", base);
  py::register_exception<CapacityError>(m, "CapacityError", base);
  py::register_exception<RepresentationError>(m, "RepresentationError", base);
  py::register_exception<EmptyMeasureError>(m, "EmptyMeasureError", base);
  py::register_exception<PlanError>(m, "PlanError", base);
  py::register_exception<IoError>(m, "IoError", base);
  py::register_exception<ParseError>(m, "ParseError", base);

  py::class_<PrimeBasis>(m, "PrimeBasis")
      .def(py::init<std::size_t>(), py::arg("dimension"))
      .def_property_readonly("dimension", &PrimeBasis::dimension)
      .def_property_readonly("primes", [](const PrimeBasis& b) { return std::vector<std::uint64_t>(b.primes().begin(), b.primes().end()); })
      .def_property_readonly("logs", [](const PrimeBasis& b) { return std::vector<double>(b.logs().begin(), b.logs().end()); });

  py::class_<DirichletPolynomial>(m, "DirichletPolynomial")
      .def(py::init<DirichletPolynomial::Terms, std::size_t>(), py::arg("terms"), py::arg("basis_dim"))
      .def_property_readonly("terms", &DirichletPolynomial::terms)
      .def_property_readonly("basis_dim", &DirichletPolynomial::basis_dim)
      .def("to_json", [](const DirichletPolynomial& f) { return to_json(f); })
      .def_static("from_json", [](const std::string& text) { return parse_dirichlet(text); })
      .def(py::self == py::self)
      .def("__repr__", [](const DirichletPolynomial& f) { return "DirichletPolynomial(" + to_json(f) + ")"; });

  py::class_<TorusPolynomial>(m, "TorusPolynomial")
      .def(py::init(&make_torus), py::arg("terms"), py::arg("basis_dim"))
      .def_property_readonly("terms", &torus_terms)
      .def_property_readonly("basis_dim", [](const TorusPolynomial& F) { return F.basis().dimension(); })
      .def_property_readonly("support_dim", &TorusPolynomial::support_dim)
      .def("to_json", [](const TorusPolynomial& F) { return to_json(F); })
      .def_static("from_json", [](const std::string& text) { return parse_torus(text); })
      .def(py::self == py::self)
      .def("__repr__", [](const TorusPolynomial& F) { return "TorusPolynomial(" + to_json(F) + ")"; });

  m.def("bohr_lift", py::overload_cast<const DirichletPolynomial&>(&bohr_lift), py::arg("f"));
  m.def("bohr_unlift", &bohr_unlift, py::arg("F"));
  m.def("eval_dirichlet", &eval_dirichlet, py::arg("f"), py::arg("sigma"), py::arg("t"));
  m.def("eval_torus", [](const TorusPolynomial& F, const std::vector<double>& angles) {
    return eval_torus(F, TorusPoint(angles));
  }, py::arg("F"), py::arg("angles"));
  m.def("flow_point", [](std::size_t d, double t) {
    const TorusPoint z = flow_point(PrimeBasis(d), t);
    return std::vector<double>(z.angles().begin(), z.angles().end());
  }, py::arg("dimension"), py::arg("t"));
  m.def("lebesgue_line_mean", &lebesgue_line_mean, py::arg("f"), py::arg("sigma"), py::arg("T"));
  m.def("carlson_limit", &carlson_limit, py::arg("f"), py::arg("sigma"));
  m.def("lebesgue_mean_envelope", &lebesgue_mean_envelope, py::arg("f"), py::arg("sigma"), py::arg("T"));

  py::class_<KroneckerSolution>(m, "KroneckerSolution")
      .def_readonly("t", &KroneckerSolution::t)
      .def_readonly("residuals", &KroneckerSolution::residuals)
      .def_readonly("q", &KroneckerSolution::q)
      .def_readonly("steps", &KroneckerSolution::steps);

  m.def(
      "solve_kronecker",
      [](const std::vector<double>& targets, double eps, double t_min, std::uint64_t budget, const std::string& solver) {
        const KroneckerProblem problem(PrimeBasis(targets.size()), targets.size(), targets, eps, t_min);
        static const ReferenceScan reference;
        if (solver == "reference") return reference.solve(problem, budget);
        if (solver != "windowed") throw DomainError("solver must be windowed or reference");
        return default_solver().solve(problem, budget);
      },
      py::arg("targets"), py::arg("eps"), py::arg("t_min") = 0.0, py::arg("budget") = 100'000'000,
      py::arg("solver") = "windowed", py::call_guard<py::gil_scoped_release>());
  m.def("residuals", [](double t, const std::vector<double>& targets) {
    return residuals(PrimeBasis(targets.size()), targets.size(), t, targets);
  }, py::arg("t"), py::arg("targets"));

  py::class_<TorusPointMassMeasure>(m, "TorusPointMassMeasure")
      .def(py::init(&make_mu), py::arg("atoms"), py::arg("dim"))
      .def_property_readonly("dim", &TorusPointMassMeasure::dimension)
      .def_property_readonly("atoms", [](const TorusPointMassMeasure& mu) {
        std::vector<std::pair<std::vector<double>, double>> out;
        for (const TorusAtom& a : mu.atoms()) {
          out.emplace_back(std::vector<double>(a.omega.angles().begin(), a.omega.angles().end()), a.c);
        }
        return out;
      })
      .def("to_json", [](const TorusPointMassMeasure& mu) { return to_json(mu); })
      .def_static("from_json", [](const std::string& text) { return parse_mu(text); })
      .def("__len__", &TorusPointMassMeasure::size);

  py::class_<LineAtom>(m, "LineAtom")
      .def_readonly("t", &LineAtom::t)
      .def_readonly("w", &LineAtom::w)
      .def_readonly("level", &LineAtom::level)
      .def_readonly("source", &LineAtom::source)
      .def_readonly("repetition", &LineAtom::repetition);

  py::class_<AtomicLineMeasure>(m, "AtomicLineMeasure")
      .def_property_readonly("atoms", &AtomicLineMeasure::atoms)
      .def_property_readonly("level_boundaries", &AtomicLineMeasure::level_boundaries)
      .def_property_readonly("masses", &AtomicLineMeasure::total_mass_by_level)
      .def_property_readonly("levels", &AtomicLineMeasure::levels)
      .def_property_readonly("growth", [](const AtomicLineMeasure& l) { return l.growth().name(); })
      .def("mass_up_to", &AtomicLineMeasure::mass_up_to, py::arg("T"))
      .def("times", [](const AtomicLineMeasure& l) {
        std::vector<double> out;
        out.reserve(l.atoms().size());
        for (const LineAtom& a : l.atoms()) out.push_back(a.t);
        return out;
      })
      .def("save", [](const AtomicLineMeasure& l) { return save_atoms(l); })
      .def_static("load", [](const std::string& text) { return load_atoms_text(text); })
      .def("__len__", [](const AtomicLineMeasure& l) { return l.atoms().size(); })
      .def(py::self == py::self);

  m.def("nominal_masses", [](const std::string& growth, int levels) {
    return nominal_masses(GrowthSchedule::parse(growth), levels);
  }, py::arg("growth"), py::arg("levels"));

  m.def(
      "build_point_mass_lambda",
      [](const TorusPointMassMeasure& mu, int levels, const std::string& growth, std::uint64_t budget,
         std::size_t threads) { return build_point_mass_lambda(mu, levels, options(growth, budget, threads)); },
      py::arg("mu"), py::arg("levels"), py::arg("growth") = "default", py::arg("budget") = 1'000'000'000,
      py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());

  py::class_<WindowRecord>(m, "WindowRecord")
      .def_readonly("level", &WindowRecord::level)
      .def_readonly("window", &WindowRecord::window)
      .def_readonly("t_lo", &WindowRecord::t_lo)
      .def_readonly("t_hi", &WindowRecord::t_hi)
      .def_readonly("estimate", &WindowRecord::estimate)
      .def_readonly("precision", &WindowRecord::precision);

  m.def(
      "build_nested_lambda",
      [](const std::vector<TorusPointMassMeasure>& mu_sequence, const std::vector<TorusPolynomial>& tests, int levels,
         const std::string& growth, std::uint64_t budget) {
        NestedConstructionPlan plan{mu_sequence, tests};
        NestedBuild built = build_nested_lambda(plan, levels, options(growth, budget, 1));
        return std::make_pair(std::move(built.lambda), std::move(built.windows));
      },
      py::arg("mu_sequence"), py::arg("test_polynomials"), py::arg("levels"), py::arg("growth") = "default",
      py::arg("budget") = 1'000'000'000, py::call_guard<py::gil_scoped_release>());

  m.def("window_check", [](const AtomicLineMeasure& lambda, double lo, double hi,
                           const std::vector<TorusPolynomial>& polys, const TorusPointMassMeasure& mu, double eps) {
    const WindowCheck r = window_check(lambda, lo, hi, polys, mu, eps);
    return std::make_pair(r.pass, r.errors);
  }, py::arg("lambda_"), py::arg("lo"), py::arg("hi"), py::arg("polys"), py::arg("mu"), py::arg("eps"));

  m.def("atomic_time_mean", &atomic_time_mean, py::arg("f"), py::arg("lambda_"), py::arg("T"));
  m.def("point_mass_space_average", &point_mass_space_average, py::arg("F"), py::arg("mu"));
  m.def("lebesgue_space_average", &lebesgue_space_average, py::arg("F"));
  m.def("monte_carlo_space_average", [](const TorusPolynomial& F, std::uint64_t samples, std::uint64_t seed) {
    const MonteCarloEstimate e = monte_carlo_space_average(F, samples, seed);
    return std::make_pair(e.mean, e.std_error);
  }, py::arg("F"), py::arg("samples"), py::arg("seed"));

  m.def("convergence_sweep", [](const DirichletPolynomial& f, const AtomicLineMeasure& lambda, double target,
                                const std::vector<double>& grid) {
    std::vector<std::tuple<double, double, double, double>> out;
    for (const ConvergenceRow& r : convergence_sweep(f, std::cref(lambda), target, grid).rows) {
      out.emplace_back(r.T, r.time_mean, r.target, r.abs_error);
    }
    return out;
  }, py::arg("f"), py::arg("lambda_"), py::arg("target"), py::arg("T_grid"));
  m.def("lebesgue_sweep", [](const DirichletPolynomial& f, double sigma, double target,
                             const std::vector<double>& grid) {
    std::vector<std::tuple<double, double, double, double>> out;
    for (const ConvergenceRow& r : convergence_sweep(f, LebesgueLine{sigma}, target, grid).rows) {
      out.emplace_back(r.T, r.time_mean, r.target, r.abs_error);
    }
    return out;
  }, py::arg("f"), py::arg("sigma"), py::arg("target"), py::arg("T_grid"));

  using Pairs = std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>>;
  m.def("recover_moments", [](const AtomicLineMeasure& lambda, const Pairs& pairs, double T,
                              const TorusPointMassMeasure* mu) {
    return moments_list(recover_moments(std::cref(lambda), make_pairs(pairs), T, mu));
  }, py::arg("lambda_"), py::arg("pairs"), py::arg("T"), py::arg("mu") = nullptr);
  m.def("lebesgue_moments", [](const Pairs& pairs, double T) {
    return moments_list(recover_moments(LebesgueLine{}, make_pairs(pairs), T));
  }, py::arg("pairs"), py::arg("T"));

  m.def("lipschitz_constant", &lipschitz_constant, py::arg("F"));
  m.def("boundary_error_bound", [](const TorusPolynomial& F, const AtomicLineMeasure& lambda, std::size_t mu_dim,
                                   int K) {
    const BoundaryBound b = boundary_error_bound(F, lambda, mu_dim, K);
    py::dict d;
    d["top_level"] = b.top_level;
    d["early_mass"] = b.early_mass;
    d["prior_slack"] = b.prior_slack;
    d["total"] = b.total;
    return d;
  }, py::arg("F"), py::arg("lambda_"), py::arg("mu_dim"), py::arg("K"));
}
