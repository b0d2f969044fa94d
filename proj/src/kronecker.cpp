#include "carlson/kronecker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "carlson/errors.hpp"
#include "carlson/torus.hpp"

namespace carlson {

KroneckerProblem::KroneckerProblem(PrimeBasis basis_, std::size_t active_dim_, std::vector<double> targets_,
                                   double eps_, double t_min_)
    : basis(std::move(basis_)), active_dim(active_dim_), targets(std::move(targets_)), eps(eps_), t_min(t_min_) {
  if (active_dim == 0 || active_dim > basis.dimension()) {
    throw DimensionError("active dimension " + std::to_string(active_dim) + " must lie in [1, " +
                         std::to_string(basis.dimension()) + "]");
  }
  if (targets.size() != active_dim) {
    throw DimensionError("expected " + std::to_string(active_dim) + " target angles, got " +
                         std::to_string(targets.size()));
  }
  if (!(eps > 0.0 && eps < std::numbers::pi)) throw DomainError("tolerance eps must lie in (0, pi)");
  if (!(t_min >= 0.0) || !std::isfinite(t_min)) throw DomainError("t_min must be finite and >= 0");
  for (double& theta : targets) {
    if (!std::isfinite(theta)) throw DomainError("target angle must be finite");
    theta = wrap_angle(theta);
  }
}

double KroneckerProblem::scan_step() const noexcept { return eps / (2.0 * basis.log(active_dim - 1)); }

std::vector<double> residuals(const PrimeBasis& basis, std::size_t k, double t, const std::vector<double>& targets) {
  if (k > basis.dimension()) throw DimensionError("residual dimension exceeds basis");
  if (targets.size() < k) throw DimensionError("fewer targets than residual coordinates");
  std::vector<double> out(k);
  for (std::size_t r = 0; r < k; ++r) out[r] = circle_distance(-t * basis.log(r), targets[r]);
  return out;
}

namespace {

double max_residual(const KroneckerProblem& p, double t) {
  double worst = 0.0;
  for (std::size_t r = 0; r < p.active_dim; ++r) {
    worst = std::max(worst, circle_distance(-t * p.basis.log(r), p.targets[r]));
    if (worst >= p.eps) break;
  }
  return worst;
}

// Centre of the coordinate-r arc containing t: the nearest exact preimage of targets[r].
double arc_centre(const KroneckerProblem& p, std::size_t r, double t) {
  const double w = p.basis.log(r);
  const double n = std::nearbyint((-t * w - p.targets[r]) / kTwoPi);
  return -(p.targets[r] + kTwoPi * n) / w;
}

// Minimiser of max_r log(p_r) |t - c_r| over the qualifying interval containing
// `hit`. The objective is convex piecewise linear, so the optimum sits at a
// centre or where two weighted distance lines cross.
double polish(const KroneckerProblem& p, double hit) {
  const std::size_t k = p.active_dim;
  std::vector<double> centres(k);
  for (std::size_t r = 0; r < k; ++r) centres[r] = arc_centre(p, r, hit);

  auto objective = [&](double t) {
    double g = 0.0;
    for (std::size_t r = 0; r < k; ++r) g = std::max(g, p.basis.log(r) * std::abs(t - centres[r]));
    return g;
  };

  double best_t = hit;
  double best_g = objective(hit);
  auto consider = [&](double t) {
    const double g = objective(t);
    if (g < best_g || (g == best_g && t < best_t)) {
      best_g = g;
      best_t = t;
    }
  };
  for (std::size_t r = 0; r < k; ++r) {
    consider(centres[r]);
    for (std::size_t s = r + 1; s < k; ++s) {
      const double wr = p.basis.log(r);
      const double ws = p.basis.log(s);
      consider((wr * centres[r] + ws * centres[s]) / (wr + ws));
    }
  }
  return best_t;
}

KroneckerSolution make_solution(const KroneckerProblem& p, double t, std::uint64_t steps) {
  KroneckerSolution s;
  s.t = t;
  s.steps = steps;
  s.residuals = residuals(p.basis, p.active_dim, t, p.targets);
  s.q.reserve(p.active_dim);
  for (std::size_t r = 0; r < p.active_dim; ++r) {
    s.q.push_back(static_cast<std::int64_t>(std::nearbyint((-t * p.basis.log(r) - p.targets[r]) / kTwoPi)));
  }
  return s;
}

// Shared tail of both backends: a grid point qualified, decide whether its
// polished optimum is an admissible answer.
bool accept(const KroneckerProblem& p, double hit, std::uint64_t index, KroneckerSolution& out) {
  const double t = polish(p, hit);
  if (!(t > p.t_min) || max_residual(p, t) >= p.eps) return false;
  out = make_solution(p, t, index);
  return true;
}

class BestSeen {
 public:
  explicit BestSeen(const KroneckerProblem& p) : p_(p) {}

  void observe(double t) {
    const auto res = residuals(p_.basis, p_.active_dim, t, p_.targets);
    const double worst = *std::max_element(res.begin(), res.end());
    if (worst < best_max_) {
      best_max_ = worst;
      best_ = res;
    }
  }

  [[noreturn]] void fail(std::uint64_t budget) {
    if (best_.empty()) observe(p_.t_min + p_.scan_step());
    std::ostringstream msg;
    msg << "Kronecker search exhausted its budget of " << budget << " scan steps (eps " << p_.eps
        << ", best max residual " << best_max_ << ")";
    throw BudgetError(msg.str(), best_, budget);
  }

 private:
  const KroneckerProblem& p_;
  double best_max_ = std::numeric_limits<double>::infinity();
  std::vector<double> best_;
};

struct Interval {
  double lo;
  double hi;
};

}  // namespace

KroneckerSolution ReferenceScan::solve(const KroneckerProblem& p, std::uint64_t budget) const {
  if (budget == 0) throw DomainError("budget must be positive");
  const double step = p.scan_step();
  BestSeen best(p);
  double best_max = std::numeric_limits<double>::infinity();
  KroneckerSolution out;
  for (std::uint64_t i = 1; i <= budget; ++i) {
    const double t = p.t_min + static_cast<double>(i) * step;
    const double worst = max_residual(p, t);
    if (worst < best_max) {
      best_max = worst;
      best.observe(t);
    }
    if (worst < p.eps && accept(p, t, i, out)) return out;
  }
  best.fail(budget);
}

KroneckerSolution WindowedScan::solve(const KroneckerProblem& p, std::uint64_t budget) const {
  if (budget == 0) throw DomainError("budget must be positive");
  const double step = p.scan_step();
  const double eps = p.eps;
  const double w0 = p.basis.log(0);
  const double theta0 = p.targets[0];
  const double horizon = static_cast<double>(budget) * step;

  BestSeen best(p);
  KroneckerSolution out;
  std::vector<Interval> current;
  std::vector<Interval> next;

  for (double m = std::floor((p.t_min * w0 + theta0 - eps) / kTwoPi) - 1.0;; m += 1.0) {
    const Interval window{(kTwoPi * m - theta0 - eps) / w0, (kTwoPi * m - theta0 + eps) / w0};
    if (window.hi < p.t_min) continue;
    if (window.lo - p.t_min > horizon + step) best.fail(budget);

    current.assign(1, window);
    for (std::size_t r = 1; r < p.active_dim && !current.empty(); ++r) {
      const double w = p.basis.log(r);
      const double theta = p.targets[r];
      next.clear();
      for (const Interval& iv : current) {
        const double first = std::floor((iv.lo * w + theta - eps) / kTwoPi);
        const double last = std::ceil((iv.hi * w + theta + eps) / kTwoPi);
        for (double n = first; n <= last; n += 1.0) {
          const Interval arc{(kTwoPi * n - theta - eps) / w, (kTwoPi * n - theta + eps) / w};
          const Interval cut{std::max(iv.lo, arc.lo), std::min(iv.hi, arc.hi)};
          if (cut.lo < cut.hi) next.push_back(cut);
        }
      }
      current.swap(next);
    }

    for (const Interval& iv : current) {
      // Widen by the rounding slack of the phase products so no grid point the
      // reference scan would accept falls outside the enumerated range.
      const double slack = 1e-9 + 1e-14 * std::abs(iv.hi);
      const double first = std::max(1.0, std::ceil((iv.lo - slack - p.t_min) / step));
      const double last = std::floor((iv.hi + slack - p.t_min) / step);
      if (first > static_cast<double>(budget)) best.fail(budget);
      for (double i = first; i <= last && i <= static_cast<double>(budget); i += 1.0) {
        const double t = p.t_min + i * step;
        best.observe(t);
        if (max_residual(p, t) < eps && accept(p, t, static_cast<std::uint64_t>(i), out)) return out;
      }
    }
  }
}

const KroneckerSolver& default_solver() {
  static const WindowedScan solver;
  return solver;
}

KroneckerSolution solve(const KroneckerProblem& problem, std::uint64_t budget) {
  return default_solver().solve(problem, budget);
}

}  // namespace carlson
