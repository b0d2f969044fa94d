#include <cmath>
#include <numbers>
#include <random>

#include "carlson/ergodic.hpp"
#include "carlson/errors.hpp"
#include "doctest.h"
#include "random_poly.hpp"

using namespace carlson;
using carlson::testing::random_dirichlet;
using std::numbers::pi;

namespace {

TorusPointMassMeasure dirac(std::vector<double> theta) {
  const std::size_t d = theta.size();
  return TorusPointMassMeasure({{TorusPoint(std::move(theta)), 1.0}}, d);
}

TorusPointMassMeasure random_mu(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<TorusAtom> atoms;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> theta(d);
    for (double& x : theta) x = angle(rng);
    atoms.push_back({TorusPoint(theta), 1.0 / static_cast<double>(n)});
  }
  return TorusPointMassMeasure(std::move(atoms), d);
}

AtomicLineMeasure one_atom(double t, double w) {
  return AtomicLineMeasure({{t, w, 1, 1, 1}}, {t + 1.0}, {w}, GrowthSchedule::powers_of_two());
}

}  // namespace

TEST_CASE("atomic_time_mean examples") {
  const DirichletPolynomial f({{1, 1.0}, {2, Complex(0.5, 1.0)}, {3, -2.0}}, 2);
  CHECK(atomic_time_mean(f, one_atom(5.0, 1.0), 10.0) == doctest::Approx(std::norm(eval_dirichlet(f, 0.0, 5.0))));
  CHECK_THROWS_AS(atomic_time_mean(f, one_atom(5.0, 1.0), 4.0), EmptyMeasureError);
  CHECK_THROWS_AS(atomic_time_mean(f, AtomicLineMeasure(), 4.0), EmptyMeasureError);

  const auto lambda = build_point_mass_lambda(dirac({0.0}), 4);
  const DirichletPolynomial one({{1, 1.0}}, 1);
  for (double T : lambda.level_boundaries()) CHECK(atomic_time_mean(one, lambda, T) == doctest::Approx(1.0));

  const DirichletPolynomial g({{1, 1.0}, {2, 1.0}}, 1);
  CHECK(std::abs(atomic_time_mean(g, lambda, lambda.level_boundaries().back()) - 4.0) < 0.15);
}

TEST_CASE("space averages") {
  const PrimeBasis b(2);
  CHECK(point_mass_space_average(TorusPolynomial({{MultiIndex{1}, 1.0}}, b), dirac({2.5})) ==
        doctest::Approx(1.0));
  const TorusPointMassMeasure half({{TorusPoint({0.0}), 0.5}, {TorusPoint({pi}), 0.5}}, 1);
  CHECK(point_mass_space_average(TorusPolynomial({{MultiIndex{}, 1.0}, {MultiIndex{1}, 1.0}}, b), half) ==
        doctest::Approx(2.0));
  const Complex c(1.0, -2.0);
  CHECK(point_mass_space_average(TorusPolynomial({{MultiIndex{}, c}}, b), half) == doctest::Approx(5.0));
  CHECK_THROWS_AS(point_mass_space_average(TorusPolynomial({{MultiIndex{0, 1}, 1.0}}, b), half), DimensionError);

  CHECK(lebesgue_space_average(
            TorusPolynomial({{MultiIndex{}, 1.0}, {MultiIndex{1}, 1.0}, {MultiIndex{1, 1}, 1.0}}, b)) == 3.0);
  CHECK(lebesgue_space_average(TorusPolynomial(b)) == 0.0);
}

TEST_CASE("Monte Carlo agrees with Parseval within three standard errors") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 3; ++i) {
    const TorusPolynomial F = bohr_lift(random_dirichlet(rng, 3, 5, 2, 2));
    const auto mc = monte_carlo_space_average(F, 1'000'000, 1000 + i);
    CHECK(std::abs(mc.mean - lebesgue_space_average(F)) <= 3.0 * mc.std_error);
    const auto again = monte_carlo_space_average(F, 1'000'000, 1000 + i);
    CHECK(mc.mean == again.mean);
    CHECK(mc.std_error == again.std_error);
  }
  CHECK_THROWS_AS(monte_carlo_space_average(TorusPolynomial(PrimeBasis(1)), 1, 0), DomainError);
}

TEST_CASE("convergence_sweep on the Lebesgue line") {
  const DirichletPolynomial f({{1, 1.0}, {2, 1.0}}, 1);
  const std::vector<double> grid{1e2, 1e3, 1e4};
  const auto record = convergence_sweep(f, LebesgueLine{1.0}, 1.25, grid);
  REQUIRE(record.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(record.rows[i].T == grid[i]);
    CHECK(record.rows[i].abs_error == std::abs(record.rows[i].time_mean - 1.25));
    if (i > 0) CHECK(record.rows[i].abs_error < record.rows[i - 1].abs_error);
  }
  CHECK(record.rows.back().abs_error < 1e-2);

  const DirichletPolynomial c({{1, Complex(0.0, 3.0)}}, 1);
  for (const auto& row : convergence_sweep(c, LebesgueLine{0.0}, 9.0, grid).rows) CHECK(row.abs_error == 0.0);

  const std::vector<double> bad{10.0, 5.0};
  CHECK_THROWS_AS(convergence_sweep(f, LebesgueLine{1.0}, 1.25, bad), DomainError);
  const std::vector<double> negative{-1.0};
  CHECK_THROWS_AS(convergence_sweep(f, LebesgueLine{1.0}, 1.25, negative), DomainError);
}

TEST_CASE("convergence_sweep on a constructed measure stays inside the bound") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 4; ++trial) {
    const std::size_t d = 1 + static_cast<std::size_t>(trial % 3);
    const auto mu = random_mu(rng, 1 + static_cast<std::size_t>(trial % 2), d);
    const auto lambda = build_point_mass_lambda(mu, 4);
    const DirichletPolynomial f = random_dirichlet(rng, d, 5, 2);
    const TorusPolynomial F = bohr_lift(f, PrimeBasis(d));
    const double target = point_mass_space_average(F, mu);
    const auto record = convergence_sweep(f, std::cref(lambda), target, lambda.level_boundaries());
    const double sup = std::pow(coefficient_l1(f), 2);
    for (std::size_t k = 1; k <= record.rows.size(); ++k) {
      const auto& row = record.rows[k - 1];
      CHECK(row.time_mean >= 0.0);
      CHECK(row.time_mean <= sup * (1 + 1e-12));
      CHECK(row.abs_error <= boundary_error_bound(F, lambda, d, static_cast<int>(k)).total);
    }
  }
}

TEST_CASE("moment recovery") {
  SUBCASE("Lebesgue line") {
    const std::vector<std::pair<MultiIndex, MultiIndex>> pairs{
        {MultiIndex{1}, MultiIndex{}}, {MultiIndex{0, 1}, MultiIndex{1}}, {MultiIndex{1, 1}, MultiIndex{1, 1}}};
    const auto m = recover_moments(LebesgueLine{}, pairs, 1e5);
    CHECK(std::abs(m[0].empirical) < 1e-4);
    CHECK(std::abs(m[1].empirical) < 1e-4);
    CHECK(m[2].empirical == Complex(1.0));
    CHECK_FALSE(m[0].reference.has_value());
    // Exact character average against a direct formula.
    const double w = std::log(2.0);
    const double T = 7.0;
    const Complex direct = (std::exp(Complex(0.0, -w * T)) - 1.0) / Complex(0.0, -w * T);
    const auto single = recover_moments(LebesgueLine{}, std::vector<std::pair<MultiIndex, MultiIndex>>{pairs[0]}, T);
    CHECK(std::abs(single[0].empirical - direct) < 1e-14);
  }
  SUBCASE("constructed measure from a Dirac mass") {
    const auto mu = dirac({1.0, 2.5});
    const auto lambda = build_point_mass_lambda(mu, 4);
    const std::vector<std::pair<MultiIndex, MultiIndex>> pairs{
        {MultiIndex{1}, MultiIndex{}}, {MultiIndex{1, 1}, MultiIndex{2}}, {MultiIndex{0, 2}, MultiIndex{0, 2}}};
    const auto m = recover_moments(std::cref(lambda), pairs, lambda.level_boundaries().back(), &mu);
    CHECK(std::abs(m[0].empirical - std::polar(1.0, 1.0)) < 0.2);
    CHECK(std::abs(*m[0].reference - std::polar(1.0, 1.0)) < 1e-14);
    CHECK(std::abs(*m[1].reference - std::polar(1.0, 2.5 - 1.0)) < 1e-14);
    CHECK(std::abs(m[1].empirical - *m[1].reference) < 0.2);
    CHECK(std::abs(m[2].empirical - 1.0) < 1e-14);
    CHECK_THROWS_AS(recover_moments(std::cref(lambda), pairs, 0.5, &mu), EmptyMeasureError);
    CHECK_THROWS_AS(recover_moments(std::cref(lambda), pairs, -1.0, &mu), DomainError);
    const auto narrow = dirac({1.0});
    CHECK_THROWS_AS(recover_moments(std::cref(lambda), pairs, 100.0, &narrow), DimensionError);
  }
  SUBCASE("moment errors do not grow with the level") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 3; ++trial) {
      const auto mu = random_mu(rng, 2, 2);
      const std::vector<std::pair<MultiIndex, MultiIndex>> pairs{
          {MultiIndex{1}, MultiIndex{}}, {MultiIndex{0, 1}, MultiIndex{}}, {MultiIndex{1}, MultiIndex{0, 1}}};
      const auto lambda = build_point_mass_lambda(mu, 5, BuildOptions{GrowthSchedule::constant(2)});
      double previous = INFINITY;
      for (int K = 3; K <= 5; ++K) {
        const auto m = recover_moments(std::cref(lambda), pairs, lambda.level_boundaries()[K - 1], &mu);
        double worst = 0.0;
        for (const auto& p : m) worst = std::max(worst, std::abs(p.empirical - *p.reference));
        CHECK(worst <= previous + 0.05);
        previous = worst;
      }
    }
  }
}

TEST_CASE("Lipschitz constant") {
  const TorusPolynomial F({{MultiIndex{}, 1.0}, {MultiIndex{2, 1}, Complex(0.0, -0.5)}}, PrimeBasis(2));
  CHECK(lipschitz_constant(F) == doctest::Approx(2.0 * 1.5 * (0.5 * 3)));

  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int i = 0; i < 200; ++i) {
    const TorusPolynomial G = bohr_lift(random_dirichlet(rng, 3, 5, 2));
    const TorusPoint x({angle(rng), angle(rng), angle(rng)});
    const TorusPoint y({angle(rng), angle(rng), angle(rng)});
    const double lhs = std::abs(std::norm(eval_torus(G, x)) - std::norm(eval_torus(G, y)));
    CHECK(lhs <= lipschitz_constant(G) * chord_distance(x, y, 3) + 1e-12);
  }
}

TEST_CASE("boundary bound components") {
  const auto lambda = build_point_mass_lambda(dirac({0.0, 0.0}), 3);
  const TorusPolynomial F({{MultiIndex{}, 1.0}, {MultiIndex{0, 1}, 1.0}}, PrimeBasis(2));
  const double S2 = 4.0;
  const double L = 2.0 * 2.0 * 1.0;
  const auto b3 = boundary_error_bound(F, lambda, 2, 3);
  CHECK(b3.top_level == doctest::Approx(L * std::sqrt(2.0) * 0.25));
  CHECK(b3.early_mass == doctest::Approx(S2 / 9.0));
  // Level 1 leaves z_2 free (slack S^2); level 2 controls it.
  const double prior = (2.0 / 90.0) * S2 + (8.0 / 90.0) * std::min(S2, L * std::sqrt(2.0) * 0.5);
  CHECK(b3.prior_slack == doctest::Approx(prior));
  CHECK(b3.total == doctest::Approx(b3.top_level + b3.early_mass + b3.prior_slack));
  CHECK(boundary_error_bound(F, lambda, 2, 1).top_level == doctest::Approx(S2));
  CHECK_THROWS_AS(boundary_error_bound(F, lambda, 2, 4), DomainError);
  CHECK_THROWS_AS(boundary_error_bound(F, lambda, 2, 0), DomainError);
}
