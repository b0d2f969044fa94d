#include "carlson/measure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <string>

#include "carlson/errors.hpp"
#include "carlson/summation.hpp"

namespace carlson {
namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw CapacityError(std::string(what) + " overflows 64 bits");
  return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw CapacityError(std::string(what) + " overflows 64 bits");
  return out;
}

// Mean of |F(z(t))|^2 against the given weights minus the mu space average, per polynomial.
template <typename Atoms>
std::vector<double> windowed_errors(const Atoms& atoms, std::span<const TorusPolynomial> polys,
                                    const TorusPointMassMeasure& mu) {
  std::vector<double> errors;
  errors.reserve(polys.size());
  for (const TorusPolynomial& F : polys) {
    CompensatedSum target;
    for (const TorusAtom& a : mu.atoms()) target += a.c * std::norm(eval_torus(F, a.omega));
    CompensatedSum weighted;
    CompensatedSum mass;
    for (const auto& atom : atoms) {
      weighted += atom.w * std::norm(eval_torus(F, flow_point(F.basis(), atom.t)));
      mass += atom.w;
    }
    errors.push_back(std::abs(weighted.value() / mass.value() - target.value()));
  }
  return errors;
}

struct Placed {
  double t;
  int source;  // 1-based index into mu's atoms
};

// One repetition: an atom per omega_j, each solved independently from t_min.
// Exact ties (possible when two omega_j agree on the active coordinates) are
// broken by re-solving the later source strictly past the tie.
std::vector<Placed> place_repetition(const TorusPointMassMeasure& mu, const PrimeBasis& basis, std::size_t active,
                                     double eps, double t_min, const BuildOptions& options, int level,
                                     std::int64_t repetition) {
  const KroneckerSolver& solver = options.solver ? *options.solver : default_solver();
  const std::size_t n = mu.size();

  auto solve_one = [&](std::size_t j, double from) {
    const auto angles = mu.atoms()[j].omega.angles();
    std::vector<double> targets(angles.begin(), angles.begin() + static_cast<std::ptrdiff_t>(active));
    try {
      return solver.solve(KroneckerProblem(basis, active, std::move(targets), eps, from), options.solver_budget).t;
    } catch (const BudgetError& e) {
      throw ConstructionError("level " + std::to_string(level) + ", source " + std::to_string(j + 1) +
                                  ", repetition " + std::to_string(repetition) + ": " + e.what(),
                              level, static_cast<int>(j + 1), repetition);
    }
  };

  std::vector<Placed> placed(n);
  if (options.threads > 1 && n > 1) {
    std::vector<std::future<double>> pending;
    pending.reserve(n);
    for (std::size_t j = 0; j < n; ++j) pending.push_back(std::async(std::launch::async, solve_one, j, t_min));
    for (std::size_t j = 0; j < n; ++j) placed[j] = {pending[j].get(), static_cast<int>(j + 1)};
  } else {
    for (std::size_t j = 0; j < n; ++j) placed[j] = {solve_one(j, t_min), static_cast<int>(j + 1)};
  }

  auto by_time = [](const Placed& a, const Placed& b) { return a.t < b.t || (a.t == b.t && a.source < b.source); };
  std::sort(placed.begin(), placed.end(), by_time);
  for (std::size_t i = 1; i < placed.size(); ++i) {
    if (placed[i].t == placed[i - 1].t) {
      placed[i].t = solve_one(static_cast<std::size_t>(placed[i].source - 1), placed[i - 1].t);
      std::sort(placed.begin() + static_cast<std::ptrdiff_t>(i), placed.end(), by_time);
      --i;
    }
  }
  return placed;
}

double step_for(const PrimeBasis& basis, std::size_t active, double eps) { return eps / (2.0 * basis.log(active - 1)); }

}  // namespace

TorusPointMassMeasure::TorusPointMassMeasure(std::vector<TorusAtom> atoms, std::size_t dimension)
    : atoms_(std::move(atoms)), dimension_(dimension) {
  if (dimension_ == 0) throw InvariantError("point-mass measure needs dimension >= 1");
  if (atoms_.empty()) throw InvariantError("point-mass measure needs at least one atom");
  CompensatedSum total;
  for (std::size_t j = 0; j < atoms_.size(); ++j) {
    const TorusAtom& a = atoms_[j];
    if (a.omega.dimension() != dimension_) {
      throw DimensionError("atom " + std::to_string(j + 1) + " has " + std::to_string(a.omega.dimension()) +
                           " angles, expected " + std::to_string(dimension_));
    }
    if (!(a.c > 0.0) || !std::isfinite(a.c)) {
      throw InvariantError("atom " + std::to_string(j + 1) + " has non-positive weight c_j");
    }
    total += a.c;
  }
  if (std::abs(total.value() - 1.0) > kWeightTolerance) {
    throw InvariantError("weights must satisfy sum c_j = 1 within 1e-12 (got " + std::to_string(total.value()) + ")");
  }
}

GrowthSchedule GrowthSchedule::constant(std::uint64_t factor) {
  if (factor == 0) throw DomainError("growth factor must be >= 1");
  return GrowthSchedule(factor);
}

GrowthSchedule GrowthSchedule::parse(std::string_view text) {
  if (text == "default" || text == "2^k") return powers_of_two();
  constexpr std::string_view prefix = "const:";
  if (text.starts_with(prefix)) {
    std::uint64_t value = 0;
    const auto digits = text.substr(prefix.size());
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec == std::errc{} && end == digits.data() + digits.size() && value >= 1) return constant(value);
  }
  throw DomainError("unknown growth schedule '" + std::string(text) + "' (expected default, 2^k or const:<n>)");
}

std::uint64_t GrowthSchedule::operator()(int level) const {
  if (level < 1) throw DomainError("levels are numbered from 1");
  if (constant_ != 0) return constant_;
  if (level > 62) throw CapacityError("growth 2^k overflows at level " + std::to_string(level));
  return std::uint64_t{1} << level;
}

std::string GrowthSchedule::name() const { return constant_ == 0 ? "2^k" : "const:" + std::to_string(constant_); }

std::vector<std::uint64_t> nominal_masses(const GrowthSchedule& growth, int levels) {
  std::vector<std::uint64_t> out;
  std::uint64_t mass = 0;
  for (int k = 1; k <= levels; ++k) {
    mass = k == 1 ? growth(1) : checked_mul(growth(k) + 1, mass, "nominal mass");
    out.push_back(mass);
  }
  return out;
}

AtomicLineMeasure::AtomicLineMeasure(std::vector<LineAtom> atoms, std::vector<double> boundaries,
                                     std::vector<double> masses, GrowthSchedule growth)
    : atoms_(std::move(atoms)), boundaries_(std::move(boundaries)), masses_(std::move(masses)), growth_(growth) {
  if (boundaries_.size() != masses_.size()) throw InvariantError("one mass per level boundary is required");
  for (std::size_t k = 1; k < boundaries_.size(); ++k) {
    if (!(boundaries_[k] > boundaries_[k - 1])) throw InvariantError("level boundaries must strictly increase");
  }
  std::vector<CompensatedSum> level_mass(boundaries_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const LineAtom& a = atoms_[i];
    if (!(a.t >= 0.0) || !std::isfinite(a.t)) throw InvariantError("atom times must be finite and >= 0");
    if (i > 0 && !(a.t > atoms_[i - 1].t)) throw InvariantError("atom times must strictly increase");
    if (!(a.w > 0.0) || !std::isfinite(a.w)) throw InvariantError("atom weights must be positive");
    if (a.level < 1 || a.level > levels()) {
      throw InvariantError("atom level " + std::to_string(a.level) + " outside 1.." + std::to_string(levels()));
    }
    const double lower = a.level == 1 ? 0.0 : boundaries_[static_cast<std::size_t>(a.level) - 2];
    const double upper = boundaries_[static_cast<std::size_t>(a.level) - 1];
    const bool inside = a.level == 1 ? (a.t >= lower && a.t <= upper) : (a.t > lower && a.t <= upper);
    if (!inside) throw InvariantError("atom at t = " + std::to_string(a.t) + " lies outside its level interval");
    level_mass[static_cast<std::size_t>(a.level) - 1] += a.w;
  }
  double cumulative = 0.0;
  for (std::size_t k = 0; k < masses_.size(); ++k) {
    cumulative += level_mass[k].value();
    if (std::abs(cumulative - masses_[k]) > 1e-9 * std::max(1.0, cumulative)) {
      throw InvariantError("recorded mass of level " + std::to_string(k + 1) + " disagrees with its atoms");
    }
  }
}

double AtomicLineMeasure::mass_up_to(double T) const {
  CompensatedSum mass;
  for (const LineAtom& a : atoms_) {
    if (a.t > T) break;
    mass += a.w;
  }
  return mass.value();
}

std::span<const LineAtom> AtomicLineMeasure::window(double lo, double hi) const {
  auto by_t = [](const LineAtom& a, double t) { return a.t <= t; };
  const auto first = std::partition_point(atoms_.begin(), atoms_.end(), [&](const LineAtom& a) { return by_t(a, lo); });
  const auto last = std::partition_point(first, atoms_.end(), [&](const LineAtom& a) { return by_t(a, hi); });
  return {first, last};
}

AtomicLineMeasure build_point_mass_lambda(const TorusPointMassMeasure& mu, int levels, const BuildOptions& options) {
  if (levels < 1) throw DomainError("number of levels must be >= 1");

  const auto nominal = nominal_masses(options.growth, levels);
  std::uint64_t repetitions_total = 0;
  for (int k = 1; k <= levels; ++k) {
    const std::uint64_t reps = k == 1 ? nominal[0] : checked_mul(options.growth(k), nominal[k - 2], "repetitions");
    repetitions_total = checked_add(repetitions_total, reps, "repetition count");
  }
  const std::uint64_t atom_count = checked_mul(repetitions_total, mu.size(), "atom count");
  if (atom_count > options.atom_cap) {
    throw CapacityError("construction needs " + std::to_string(atom_count) + " atoms, cap is " +
                        std::to_string(options.atom_cap));
  }

  const PrimeBasis basis(mu.dimension());
  std::vector<LineAtom> atoms;
  atoms.reserve(static_cast<std::size_t>(atom_count));
  std::vector<double> boundaries;
  std::vector<double> masses;
  CompensatedSum mass;
  double cursor = 0.0;

  for (int k = 1; k <= levels; ++k) {
    const std::uint64_t reps = k == 1 ? nominal[0] : options.growth(k) * nominal[k - 2];
    const std::size_t active = std::min<std::size_t>(static_cast<std::size_t>(k), mu.dimension());
    const double eps = std::ldexp(1.0, -k);
    const double step = step_for(basis, active, eps);
    for (std::uint64_t m = 1; m <= reps; ++m) {
      const auto placed =
          place_repetition(mu, basis, active, eps, cursor, options, k, static_cast<std::int64_t>(m));
      for (const Placed& p : placed) {
        const double c = mu.atoms()[static_cast<std::size_t>(p.source - 1)].c;
        atoms.push_back({p.t, c, k, p.source, static_cast<std::int64_t>(m)});
        mass += c;
      }
      cursor = placed.back().t + step;
    }
    boundaries.push_back(cursor);
    masses.push_back(mass.value());
  }
  return AtomicLineMeasure(std::move(atoms), std::move(boundaries), std::move(masses), options.growth);
}

WindowCheck window_check(const AtomicLineMeasure& lambda, double lo, double hi, std::span<const TorusPolynomial> polys,
                         const TorusPointMassMeasure& mu, double eps) {
  if (!(lo < hi)) throw DomainError("window needs T_lo < T_hi");
  const auto atoms = lambda.window(lo, hi);
  if (atoms.empty()) throw RepresentationError("window holds no atoms");
  std::vector<std::size_t> per_source(mu.size(), 0);
  for (const LineAtom& a : atoms) {
    if (a.source < 1 || static_cast<std::size_t>(a.source) > mu.size()) {
      throw RepresentationError("atom source " + std::to_string(a.source) + " does not index the measure");
    }
    ++per_source[static_cast<std::size_t>(a.source) - 1];
  }
  for (std::size_t j = 0; j < per_source.size(); ++j) {
    if (per_source[j] == 0) {
      throw RepresentationError("point mass " + std::to_string(j + 1) + " has no representative in the window");
    }
  }

  WindowCheck out;
  out.errors = windowed_errors(atoms, polys, mu);
  for (std::size_t m = 0; m < out.errors.size(); ++m) {
    if (out.errors[m] > out.worst_error || m == 0) {
      out.worst_error = out.errors[m];
      out.worst_poly = m;
    }
  }
  out.pass = out.worst_error < eps;
  return out;
}

NestedBuild build_nested_lambda(const NestedConstructionPlan& plan, int levels, const BuildOptions& options) {
  // Sharpening past this many halvings means the solver budget, not the
  // tolerance, is the binding constraint.
  constexpr int kMaxSharpening = 24;

  if (levels < 1) throw DomainError("number of levels must be >= 1");
  if (plan.test_polynomials.empty()) throw PlanError("nested construction needs at least one test polynomial");
  std::uint64_t max_sources = 0;
  for (int k = 1; k <= levels; ++k) max_sources = std::max(max_sources, options.growth(k));
  if (plan.mu_sequence.size() < max_sources) {
    throw PlanError("plan supplies " + std::to_string(plan.mu_sequence.size()) + " measures but level " +
                    std::to_string(levels) + " needs " + std::to_string(max_sources));
  }
  std::size_t max_atoms = 0;
  for (std::size_t j = 0; j < max_sources; ++j) {
    const auto& mu = plan.mu_sequence[j];
    max_atoms = std::max(max_atoms, mu.size());
    for (const auto& F : plan.test_polynomials) {
      if (F.support_dim() > mu.dimension()) {
        throw DimensionError("test polynomial uses " + std::to_string(F.support_dim()) +
                             " variables but source measure " + std::to_string(j + 1) + " lives on T^" +
                             std::to_string(mu.dimension()));
      }
    }
  }

  const auto nominal = nominal_masses(options.growth, levels);
  std::uint64_t blocks = 0;
  for (int k = 1; k <= levels; ++k) {
    const std::uint64_t windows = k == 1 ? 1 : nominal[k - 2];
    blocks = checked_add(blocks, checked_mul(windows, options.growth(k), "block count"), "block count");
  }
  if (checked_mul(blocks, max_atoms, "atom count") > options.atom_cap) {
    throw CapacityError("nested construction would exceed the atom cap of " + std::to_string(options.atom_cap));
  }

  NestedBuild out;
  std::vector<LineAtom> atoms;
  std::vector<double> boundaries;
  std::vector<double> masses;
  CompensatedSum mass;
  double cursor = 0.0;

  for (int k = 1; k <= levels; ++k) {
    const std::uint64_t windows = k == 1 ? 1 : nominal[k - 2];
    const std::uint64_t sources = options.growth(k);
    const double tolerance = std::ldexp(1.0, -k);

    for (std::uint64_t ell = 1; ell <= windows; ++ell) {
      WindowRecord record{k, static_cast<std::int64_t>(ell), cursor, cursor, 0.0, {}};
      for (std::uint64_t j = 1; j <= sources; ++j) {
        const TorusPointMassMeasure& mu = plan.mu_sequence[j - 1];
        const PrimeBasis basis(mu.dimension());

        for (int precision = k;; ++precision) {
          if (precision > k + kMaxSharpening) {
            throw ConstructionError("level " + std::to_string(k) + ", window " + std::to_string(ell) + ", source " +
                                        std::to_string(j) + ": window estimate stayed above 2^-" +
                                        std::to_string(k),
                                    k, static_cast<int>(j), static_cast<std::int64_t>(ell));
          }
          const std::size_t active = std::min<std::size_t>(static_cast<std::size_t>(precision), mu.dimension());
          const double eps = std::ldexp(1.0, -precision);
          const auto placed = place_repetition(mu, basis, active, eps, cursor, options, k,
                                               static_cast<std::int64_t>(ell));

          CompensatedSum block_mass;
          for (const Placed& p : placed) block_mass += mu.atoms()[static_cast<std::size_t>(p.source - 1)].c;
          std::vector<LineAtom> block;
          block.reserve(placed.size());
          for (const Placed& p : placed) {
            const double w = mu.atoms()[static_cast<std::size_t>(p.source - 1)].c / block_mass.value();
            block.push_back({p.t, w, k, static_cast<int>(j), static_cast<std::int64_t>(ell)});
          }
          const auto errors = windowed_errors(block, plan.test_polynomials, mu);
          const double estimate = *std::max_element(errors.begin(), errors.end());
          if (estimate >= tolerance) continue;

          for (const LineAtom& a : block) {
            atoms.push_back(a);
            mass += a.w;
          }
          cursor = placed.back().t + step_for(basis, active, eps);
          record.estimate = std::max(record.estimate, estimate);
          record.precision.push_back(precision);
          break;
        }
      }
      record.t_hi = cursor;
      out.windows.push_back(std::move(record));
    }
    boundaries.push_back(cursor);
    masses.push_back(mass.value());
  }
  out.lambda = AtomicLineMeasure(std::move(atoms), std::move(boundaries), std::move(masses), options.growth);
  return out;
}

}  // namespace carlson
