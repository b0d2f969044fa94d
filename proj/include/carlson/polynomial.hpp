#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>

#include "carlson/prime_basis.hpp"
#include "carlson/torus.hpp"

namespace carlson {

using Complex = std::complex<double>;

/// Finite Dirichlet polynomial f(s) = sum a_n n^{-s}.
///
/// Every frequency must factor over the first `basis_dim` primes; zero
/// coefficients are rejected rather than silently dropped.
class DirichletPolynomial {
 public:
  using Terms = std::map<std::uint64_t, Complex>;

  DirichletPolynomial() = default;
  DirichletPolynomial(Terms terms, std::size_t basis_dim);

  const Terms& terms() const noexcept { return terms_; }
  std::size_t basis_dim() const noexcept { return basis_dim_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  bool operator==(const DirichletPolynomial&) const = default;

 private:
  Terms terms_;
  std::size_t basis_dim_ = 0;
};

/// Finite power series F(z) = sum a_alpha z^alpha on the polytorus.
class TorusPolynomial {
 public:
  using Terms = std::map<MultiIndex, Complex>;

  explicit TorusPolynomial(PrimeBasis basis) : basis_(std::move(basis)) {}
  TorusPolynomial(Terms terms, PrimeBasis basis);

  const Terms& terms() const noexcept { return terms_; }
  const PrimeBasis& basis() const noexcept { return basis_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  /// Largest multi-index length among the terms (number of coordinates F depends on).
  std::size_t support_dim() const noexcept;

  bool operator==(const TorusPolynomial& other) const {
    return terms_ == other.terms_ && basis_ == other.basis_;
  }

 private:
  Terms terms_;
  PrimeBasis basis_;
};

/// Exponent vector of n over the basis; throws DimensionError naming n when
/// n has a prime factor outside it.
MultiIndex factor_over(std::uint64_t n, const PrimeBasis& basis);

/// prod p_j^{alpha_j} in checked 64-bit arithmetic; throws OverflowError.
std::uint64_t frequency_of(const MultiIndex& alpha, const PrimeBasis& basis);

TorusPolynomial bohr_lift(const DirichletPolynomial& f);
TorusPolynomial bohr_lift(const DirichletPolynomial& f, const PrimeBasis& basis);
DirichletPolynomial bohr_unlift(const TorusPolynomial& F);

/// f(sigma + i t) = sum a_n n^{-sigma} e^{-i t log n}.
Complex eval_dirichlet(const DirichletPolynomial& f, double sigma, double t);

/// F(omega) = sum a_alpha prod e^{i theta_j alpha_j}.
Complex eval_torus(const TorusPolynomial& F, const TorusPoint& omega);

/// Exact (1/T) int_0^T |f(sigma + i t)|^2 dt from the closed-form expansion.
double lebesgue_line_mean(const DirichletPolynomial& f, double sigma, double T);

/// sum |a_n|^2 n^{-2 sigma}: the limit of lebesgue_line_mean as T grows.
double carlson_limit(const DirichletPolynomial& f, double sigma);

/// Rigorous bound C/T on |lebesgue_line_mean(f, sigma, T) - carlson_limit(f, sigma)|.
double lebesgue_mean_envelope(const DirichletPolynomial& f, double sigma, double T);

/// sum |a_n|, an upper bound for the sup norm of f on the closed half-plane.
double coefficient_l1(const DirichletPolynomial& f);
double coefficient_l1(const TorusPolynomial& F);

}  // namespace carlson
