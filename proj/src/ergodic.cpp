#include "carlson/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "carlson/errors.hpp"
#include "carlson/summation.hpp"

namespace carlson {
namespace {

Complex averaged_character(double omega, double T) {
  const double half = 0.5 * omega * T;
  const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
  return std::polar(sinc, -half);
}

std::vector<int> exponent_difference(const MultiIndex& alpha, const MultiIndex& beta, std::size_t dim) {
  std::vector<int> diff(dim);
  for (std::size_t r = 0; r < dim; ++r) diff[r] = static_cast<int>(alpha[r]) - static_cast<int>(beta[r]);
  return diff;
}

}  // namespace

double atomic_time_mean(const DirichletPolynomial& f, const AtomicLineMeasure& lambda, double T) {
  CompensatedSum weighted;
  CompensatedSum mass;
  for (const LineAtom& a : lambda.atoms()) {
    if (a.t > T) break;
    weighted += a.w * std::norm(eval_dirichlet(f, 0.0, a.t));
    mass += a.w;
  }
  if (!(mass.value() > 0.0)) throw EmptyMeasureError("lambda([0, T]) = 0; no time mean exists");
  return weighted.value() / mass.value();
}

double point_mass_space_average(const TorusPolynomial& F, const TorusPointMassMeasure& mu) {
  CompensatedSum sum;
  for (const TorusAtom& a : mu.atoms()) sum += a.c * std::norm(eval_torus(F, a.omega));
  return sum.value();
}

double lebesgue_space_average(const TorusPolynomial& F) {
  CompensatedSum sum;
  for (const auto& [alpha, a] : F.terms()) sum += std::norm(a);
  return sum.value();
}

MonteCarloEstimate monte_carlo_space_average(const TorusPolynomial& F, std::uint64_t samples, std::uint64_t seed) {
  if (samples < 2) throw DomainError("Monte Carlo needs at least two samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  const std::size_t dim = std::max<std::size_t>(1, F.support_dim());
  std::vector<double> theta(dim);
  // Welford running mean and variance.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 1; i <= samples; ++i) {
    for (double& a : theta) a = angle(rng);
    const double x = std::norm(eval_torus(F, TorusPoint(theta)));
    const double delta = x - mean;
    mean += delta / static_cast<double>(i);
    m2 += delta * (x - mean);
  }
  const double variance = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(variance / static_cast<double>(samples))};
}

ConvergenceRecord convergence_sweep(const DirichletPolynomial& f, const LineMeasure& measure, double target,
                                    std::span<const double> T_grid) {
  for (std::size_t i = 0; i < T_grid.size(); ++i) {
    if (!(T_grid[i] > 0.0)) throw DomainError("T grid must be positive");
    if (i > 0 && !(T_grid[i] > T_grid[i - 1])) throw DomainError("T grid must be increasing");
  }
  ConvergenceRecord record;
  record.rows.reserve(T_grid.size());
  for (double T : T_grid) {
    const double mean = std::visit(
        [&](const auto& m) -> double {
          if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LebesgueLine>) {
            return lebesgue_line_mean(f, m.sigma, T);
          } else {
            return atomic_time_mean(f, m.get(), T);
          }
        },
        measure);
    record.rows.push_back({T, mean, target, std::abs(mean - target)});
  }
  return record;
}

std::vector<MomentPair> recover_moments(const LineMeasure& measure,
                                        std::span<const std::pair<MultiIndex, MultiIndex>> pairs, double T,
                                        const TorusPointMassMeasure* mu) {
  if (!(T > 0.0)) throw DomainError("moment horizon T must be positive");
  std::size_t dim = 1;
  for (const auto& [alpha, beta] : pairs) dim = std::max({dim, alpha.length(), beta.length()});
  if (mu != nullptr && mu->dimension() < dim) {
    throw DimensionError("reference measure lives on T^" + std::to_string(mu->dimension()) + " but moments need " +
                         std::to_string(dim) + " coordinates");
  }
  const PrimeBasis basis(dim);

  std::vector<std::vector<int>> diffs;
  diffs.reserve(pairs.size());
  for (const auto& [alpha, beta] : pairs) diffs.push_back(exponent_difference(alpha, beta, dim));

  std::vector<Complex> empirical(pairs.size());
  if (const auto* line = std::get_if<LebesgueLine>(&measure)) {
    (void)line;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      double omega = 0.0;
      for (std::size_t r = 0; r < dim; ++r) omega += diffs[i][r] * basis.log(r);
      empirical[i] = averaged_character(omega, T);
    }
  } else {
    const AtomicLineMeasure& lambda = std::get<std::reference_wrapper<const AtomicLineMeasure>>(measure).get();
    std::vector<CompensatedComplexSum> sums(pairs.size());
    CompensatedSum mass;
    for (const LineAtom& a : lambda.atoms()) {
      if (a.t > T) break;
      const TorusPoint z = flow_point(basis, a.t);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        double phase = 0.0;
        for (std::size_t r = 0; r < dim; ++r) phase += diffs[i][r] * z.angle(r);
        sums[i] += a.w * std::polar(1.0, phase);
      }
      mass += a.w;
    }
    if (!(mass.value() > 0.0)) throw EmptyMeasureError("lambda([0, T]) = 0; no moments exist");
    for (std::size_t i = 0; i < pairs.size(); ++i) empirical[i] = sums[i].value() / mass.value();
  }

  std::vector<MomentPair> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    MomentPair pair{pairs[i].first, pairs[i].second, empirical[i], std::nullopt};
    if (mu != nullptr) {
      CompensatedComplexSum ref;
      for (const TorusAtom& a : mu->atoms()) {
        double phase = 0.0;
        for (std::size_t r = 0; r < dim; ++r) phase += diffs[i][r] * a.omega.angle(r);
        ref += a.c * std::polar(1.0, phase);
      }
      pair.reference = ref.value();
    }
    out.push_back(std::move(pair));
  }
  return out;
}

double lipschitz_constant(const TorusPolynomial& F) {
  CompensatedSum weighted;
  for (const auto& [alpha, a] : F.terms()) weighted += std::abs(a) * static_cast<double>(alpha.total_degree());
  return 2.0 * coefficient_l1(F) * weighted.value();
}

BoundaryBound boundary_error_bound(const TorusPolynomial& F, const AtomicLineMeasure& lambda, std::size_t mu_dim,
                                   int K) {
  if (K < 1 || K > lambda.levels()) throw DomainError("bound level outside the measure's construction levels");
  const double S = coefficient_l1(F);
  const double S2 = S * S;
  const double L = lipschitz_constant(F);
  const double root_d = std::sqrt(static_cast<double>(mu_dim));
  const auto controls = [&](int k) { return std::min<std::size_t>(static_cast<std::size_t>(k), mu_dim) >= F.support_dim(); };
  const auto& masses = lambda.total_mass_by_level();
  const double total = masses[static_cast<std::size_t>(K) - 1];

  BoundaryBound b{};
  b.top_level = controls(K) ? L * root_d * std::ldexp(2.0, -K) : S2;
  b.early_mass = S2 / (std::ldexp(1.0, K) + 1.0);
  CompensatedSum prior;
  for (int k = 1; k < K; ++k) {
    const double level_mass = masses[static_cast<std::size_t>(k) - 1] - (k == 1 ? 0.0 : masses[static_cast<std::size_t>(k) - 2]);
    const double slack = controls(k) ? std::min(S2, L * root_d * std::ldexp(2.0, -k)) : S2;
    prior += level_mass / total * slack;
  }
  b.prior_slack = prior.value();
  b.total = b.top_level + b.early_mass + b.prior_slack;
  return b;
}

}  // namespace carlson
