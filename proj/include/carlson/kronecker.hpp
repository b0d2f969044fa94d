#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "carlson/prime_basis.hpp"

namespace carlson {

/// Find t > t_min with (-t log p_r) mod 2*pi within eps of targets[r] for
/// r < active_dim. Targets are canonicalized to [0, 2*pi) on construction.
struct KroneckerProblem {
  KroneckerProblem(PrimeBasis basis, std::size_t active_dim, std::vector<double> targets, double eps,
                   double t_min);

  PrimeBasis basis;
  std::size_t active_dim;
  std::vector<double> targets;
  double eps;
  double t_min;

  /// Grid spacing eps / (2 max_r log p_r); no (eps/2)-solution can fall between grid points.
  double scan_step() const noexcept;
};

struct KroneckerSolution {
  double t = 0.0;
  std::vector<double> residuals;
  /// q_r with -t log p_r - theta_r ~= 2*pi*q_r, kept for audit.
  std::vector<std::int64_t> q;
  /// Index of the grid point that located the solution.
  std::uint64_t steps = 0;
};

/// Circle distance between (-t log p_r) mod 2*pi and targets[r], r < k.
std::vector<double> residuals(const PrimeBasis& basis, std::size_t k, double t, const std::vector<double>& targets);

/// Search backend. Every backend walks the same grid t_min + i * scan_step()
/// (i >= 1) and must return the same answer as ReferenceScan:
///
///  1. take the first grid point whose residuals are all < eps;
///  2. polish it to the minimax point of the qualifying interval around it;
///  3. accept if that point is > t_min, otherwise keep walking.
///
/// `budget` caps the grid index; exceeding it raises BudgetError.
class KroneckerSolver {
 public:
  virtual ~KroneckerSolver() = default;
  virtual KroneckerSolution solve(const KroneckerProblem& problem, std::uint64_t budget) const = 0;
};

/// Step-by-step scan; the auditable reference and the test oracle.
class ReferenceScan final : public KroneckerSolver {
 public:
  KroneckerSolution solve(const KroneckerProblem& problem, std::uint64_t budget) const override;
};

/// Jumps between the arcs where the first coordinate is within eps of its
/// target and intersects the other coordinates' arcs exactly; only grid points
/// inside those intersections are evaluated.
class WindowedScan final : public KroneckerSolver {
 public:
  KroneckerSolution solve(const KroneckerProblem& problem, std::uint64_t budget) const override;
};

/// Solve with the default backend (WindowedScan).
KroneckerSolution solve(const KroneckerProblem& problem, std::uint64_t budget);

const KroneckerSolver& default_solver();

}  // namespace carlson
