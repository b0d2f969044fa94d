#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "carlson/measure.hpp"
#include "carlson/polynomial.hpp"

namespace carlson {

/// Lebesgue measure on the vertical line Re s = sigma.
struct LebesgueLine {
  double sigma = 0.0;
};

/// Either the Lebesgue line or a (non-owning) atomic measure on the imaginary axis.
using LineMeasure = std::variant<LebesgueLine, std::reference_wrapper<const AtomicLineMeasure>>;

/// (sum_{t_i <= T} w_i |f(i t_i)|^2) / lambda([0, T]), one compensated pass in increasing t.
double atomic_time_mean(const DirichletPolynomial& f, const AtomicLineMeasure& lambda, double T);

/// sum_j c_j |F(omega_j)|^2.
double point_mass_space_average(const TorusPolynomial& F, const TorusPointMassMeasure& mu);

/// sum_alpha |a_alpha|^2 (Parseval for Haar measure on the torus).
double lebesgue_space_average(const TorusPolynomial& F);

struct MonteCarloEstimate {
  double mean;
  double std_error;
};

/// Seeded Monte Carlo estimate of the Haar average of |F|^2.
MonteCarloEstimate monte_carlo_space_average(const TorusPolynomial& F, std::uint64_t samples, std::uint64_t seed);

struct ConvergenceRow {
  double T;
  double time_mean;
  double target;
  double abs_error;
};

struct ConvergenceRecord {
  std::vector<ConvergenceRow> rows;
  std::string poly_id;
  std::string measure_id;
};

/// One row per T in the (increasing, positive) grid. Atomic measures are
/// evaluated on the imaginary axis; the Lebesgue line at its own sigma.
ConvergenceRecord convergence_sweep(const DirichletPolynomial& f, const LineMeasure& measure, double target,
                                    std::span<const double> T_grid);

struct MomentPair {
  MultiIndex alpha;
  MultiIndex beta;
  Complex empirical;
  std::optional<Complex> reference;
};

/// Empirical moments of z^alpha conj(z)^beta along the flow up to time T:
/// the lambda-weighted mean of prod p_r^{-i t (alpha_r - beta_r)} (or its
/// exact Lebesgue-line average). With `mu`, the reference is
/// sum_j c_j omega_j^alpha conj(omega_j)^beta.
std::vector<MomentPair> recover_moments(const LineMeasure& measure,
                                        std::span<const std::pair<MultiIndex, MultiIndex>> pairs, double T,
                                        const TorusPointMassMeasure* mu = nullptr);

/// 2 (sum |a_alpha|)(sum |a_alpha| |alpha|_1): Lipschitz constant of |F|^2 in
/// the Euclidean chord metric of the torus.
double lipschitz_constant(const TorusPolynomial& F);

/// Explicit bound on |full-support mean at level K - sum_j c_j |F(omega_j)|^2|
/// for a point-mass construction on T^d:
///
///   top_level   = L_F sqrt(d) 2^{-K+1}  (S^2 if level K leaves a variable of F free)
///   early_mass  = S^2 / (2^K + 1)
///   prior_slack = sum_{k<K} (mass of level k / lambda[0, T_K]) * slack_k
///
/// with S = sum |a_alpha| and slack_k = min(S^2, L_F sqrt(d) 2^{-k+1}) when
/// level k controls every variable of F, S^2 otherwise.
struct BoundaryBound {
  double top_level;
  double early_mass;
  double prior_slack;
  double total;
};

BoundaryBound boundary_error_bound(const TorusPolynomial& F, const AtomicLineMeasure& lambda, std::size_t mu_dim,
                                   int K);

}  // namespace carlson
