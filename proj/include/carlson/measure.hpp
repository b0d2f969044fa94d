#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carlson/kronecker.hpp"
#include "carlson/polynomial.hpp"
#include "carlson/torus.hpp"

namespace carlson {

struct TorusAtom {
  TorusPoint omega;
  double c;

  bool operator==(const TorusAtom&) const = default;
};

/// mu = sum_j c_j delta_{omega_j} on T^d with c_j > 0 and sum c_j = 1 (to 1e-12).
class TorusPointMassMeasure {
 public:
  static constexpr double kWeightTolerance = 1e-12;

  TorusPointMassMeasure(std::vector<TorusAtom> atoms, std::size_t dimension);

  const std::vector<TorusAtom>& atoms() const noexcept { return atoms_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return atoms_.size(); }

  bool operator==(const TorusPointMassMeasure&) const = default;

 private:
  std::vector<TorusAtom> atoms_;
  std::size_t dimension_;
};

/// How many copies of the previous mass level k adds: 2^k (default) or a constant.
class GrowthSchedule {
 public:
  static GrowthSchedule powers_of_two() noexcept { return GrowthSchedule(0); }
  static GrowthSchedule constant(std::uint64_t factor);
  /// Accepts "default", "2^k" and "const:<n>".
  static GrowthSchedule parse(std::string_view text);

  std::uint64_t operator()(int level) const;
  std::string name() const;

  bool operator==(const GrowthSchedule&) const = default;

 private:
  explicit GrowthSchedule(std::uint64_t constant) : constant_(constant) {}
  std::uint64_t constant_;  // 0 encodes 2^k
};

/// Nominal ||lambda_k|| for k = 1..levels when every source measure has unit
/// mass: ||lambda_1|| = growth(1), ||lambda_k|| = (growth(k) + 1) ||lambda_{k-1}||.
std::vector<std::uint64_t> nominal_masses(const GrowthSchedule& growth, int levels);

/// One weighted atom of a line measure with its construction coordinates
/// (level k, source j, repetition or window m; all 1-based).
struct LineAtom {
  double t;
  double w;
  int level;
  int source;
  std::int64_t repetition;

  bool operator==(const LineAtom&) const = default;
};

/// Atomic measure on [0, inf) with its construction trace.
///
/// Invariants checked on construction: t strictly increasing and >= 0,
/// weights positive, boundaries strictly increasing, level-k atoms inside
/// (T_{k-1}, T_k] (T_0 = 0, closed at 0), and masses[k] equal to the weight
/// of all atoms up to level k within 1e-9 relative.
class AtomicLineMeasure {
 public:
  AtomicLineMeasure() = default;
  AtomicLineMeasure(std::vector<LineAtom> atoms, std::vector<double> boundaries, std::vector<double> masses,
                    GrowthSchedule growth);

  const std::vector<LineAtom>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& level_boundaries() const noexcept { return boundaries_; }
  const std::vector<double>& total_mass_by_level() const noexcept { return masses_; }
  const GrowthSchedule& growth() const noexcept { return growth_; }
  int levels() const noexcept { return static_cast<int>(boundaries_.size()); }
  bool empty() const noexcept { return atoms_.empty(); }

  /// lambda([0, T]).
  double mass_up_to(double T) const;
  /// Atoms with lo < t <= hi.
  std::span<const LineAtom> window(double lo, double hi) const;

  bool operator==(const AtomicLineMeasure&) const = default;

 private:
  std::vector<LineAtom> atoms_;
  std::vector<double> boundaries_;
  std::vector<double> masses_;
  GrowthSchedule growth_ = GrowthSchedule::powers_of_two();
};

struct BuildOptions {
  GrowthSchedule growth = GrowthSchedule::powers_of_two();
  /// Per-solve scan budget handed to the Kronecker solver.
  std::uint64_t solver_budget = 1'000'000'000;
  /// Refuse constructions with more atoms than this, before doing any work.
  std::uint64_t atom_cap = 50'000'000;
  /// Parallel solves per repetition; results are merged in (m, j) order.
  unsigned threads = 1;
  /// nullptr selects default_solver().
  const KroneckerSolver* solver = nullptr;
};

/// Point-mass construction: level k places growth(k) * ||lambda_{k-1}||
/// repetitions, each holding one atom per omega_j (weight c_j) whose
/// Kronecker residuals on the first min(k, d) primes are < 2^{-k}.
AtomicLineMeasure build_point_mass_lambda(const TorusPointMassMeasure& mu, int levels, const BuildOptions& options = {});

struct WindowCheck {
  bool pass = false;
  double worst_error = 0.0;
  std::size_t worst_poly = 0;
  std::vector<double> errors;
};

/// Compare the lambda-mean of |F|^2 over atoms in (lo, hi] with the mu space
/// average for every polynomial. Every source j of mu must own an atom in
/// the window, otherwise RepresentationError.
WindowCheck window_check(const AtomicLineMeasure& lambda, double lo, double hi, std::span<const TorusPolynomial> polys,
                         const TorusPointMassMeasure& mu, double eps);

/// Inputs of the nested construction. Level k uses mu_sequence[0 .. growth(k))
/// as its sources; the test family stands in for a dense set of polynomials,
/// so guarantees hold relative to it.
struct NestedConstructionPlan {
  std::vector<TorusPointMassMeasure> mu_sequence;
  std::vector<TorusPolynomial> test_polynomials;
};

struct WindowRecord {
  int level;
  std::int64_t window;
  double t_lo;
  double t_hi;
  /// Worst |windowed mean - space average| over sources and test polynomials.
  double estimate;
  /// Kronecker precision exponent finally used for each source.
  std::vector<int> precision;
};

struct NestedBuild {
  AtomicLineMeasure lambda;
  std::vector<WindowRecord> windows;
};

/// Nested construction for a measure approximated by `plan.mu_sequence`.
/// Level k holds ||lambda^{(k-1)}|| consecutive windows; in each window every
/// source gets one unit-mass block of atoms whose windowed error is < 2^{-k}
/// on the test family. Blocks are sharpened (Kronecker tolerance halved)
/// until that holds.
NestedBuild build_nested_lambda(const NestedConstructionPlan& plan, int levels, const BuildOptions& options = {});

}  // namespace carlson
