#include "carlson/polynomial.hpp"

#include <cmath>
#include <string>

#include "carlson/errors.hpp"
#include "carlson/summation.hpp"

namespace carlson {
namespace {

void check_coefficient(const Complex& a, const std::string& where) {
  if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
    throw InvariantError("non-finite coefficient at " + where);
  }
  if (a == Complex{}) throw InvariantError("zero coefficient stored at " + where);
}

// log(n / m) without the cancellation of log(n) - log(m) for close n, m.
double log_ratio(std::uint64_t n, std::uint64_t m) {
  if (n >= m) return std::log1p(static_cast<double>(n - m) / static_cast<double>(m));
  return -std::log1p(static_cast<double>(m - n) / static_cast<double>(n));
}

// (1/T) int_0^T e^{-i omega t} dt = e^{-i omega T / 2} sinc(omega T / 2).
Complex averaged_character(double omega, double T) {
  const double half = 0.5 * omega * T;
  const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
  return std::polar(sinc, -half);
}

}  // namespace

DirichletPolynomial::DirichletPolynomial(Terms terms, std::size_t basis_dim)
    : terms_(std::move(terms)), basis_dim_(basis_dim) {
  if (basis_dim_ == 0) throw DomainError("Dirichlet polynomial needs a basis dimension >= 1");
  const PrimeBasis basis(basis_dim_);
  for (const auto& [n, a] : terms_) {
    if (n == 0) throw InvariantError("frequency must be >= 1");
    check_coefficient(a, "frequency " + std::to_string(n));
    (void)factor_over(n, basis);
  }
}

TorusPolynomial::TorusPolynomial(Terms terms, PrimeBasis basis)
    : terms_(std::move(terms)), basis_(std::move(basis)) {
  for (const auto& [alpha, a] : terms_) {
    if (alpha.length() > basis_.dimension()) {
      throw DimensionError("multi-index of length " + std::to_string(alpha.length()) +
                           " exceeds basis dimension " + std::to_string(basis_.dimension()));
    }
    check_coefficient(a, "a multi-index of degree " + std::to_string(alpha.total_degree()));
  }
}

std::size_t TorusPolynomial::support_dim() const noexcept {
  std::size_t dim = 0;
  for (const auto& [alpha, a] : terms_) dim = std::max(dim, alpha.length());
  return dim;
}

MultiIndex factor_over(std::uint64_t n, const PrimeBasis& basis) {
  if (n == 0) throw DomainError("cannot factor 0");
  std::vector<std::uint32_t> exponents(basis.dimension(), 0);
  std::uint64_t rest = n;
  for (std::size_t j = 0; j < basis.dimension() && rest > 1; ++j) {
    const std::uint64_t p = basis.prime(j);
    while (rest % p == 0) {
      rest /= p;
      ++exponents[j];
    }
  }
  if (rest != 1) {
    throw DimensionError("frequency " + std::to_string(n) + " has a prime factor outside the first " +
                         std::to_string(basis.dimension()) + " primes");
  }
  return MultiIndex(std::move(exponents));
}

std::uint64_t frequency_of(const MultiIndex& alpha, const PrimeBasis& basis) {
  if (alpha.length() > basis.dimension()) throw DimensionError("multi-index longer than basis");
  std::uint64_t n = 1;
  for (std::size_t j = 0; j < alpha.length(); ++j) {
    for (std::uint32_t e = 0; e < alpha[j]; ++e) {
      if (__builtin_mul_overflow(n, basis.prime(j), &n)) {
        throw OverflowError("frequency of a multi-index of degree " + std::to_string(alpha.total_degree()) +
                            " overflows 64 bits");
      }
    }
  }
  return n;
}

TorusPolynomial bohr_lift(const DirichletPolynomial& f) { return bohr_lift(f, PrimeBasis(f.basis_dim())); }

TorusPolynomial bohr_lift(const DirichletPolynomial& f, const PrimeBasis& basis) {
  TorusPolynomial::Terms terms;
  for (const auto& [n, a] : f.terms()) terms.emplace(factor_over(n, basis), a);
  return TorusPolynomial(std::move(terms), basis);
}

DirichletPolynomial bohr_unlift(const TorusPolynomial& F) {
  DirichletPolynomial::Terms terms;
  for (const auto& [alpha, a] : F.terms()) terms.emplace(frequency_of(alpha, F.basis()), a);
  return DirichletPolynomial(std::move(terms), F.basis().dimension());
}

Complex eval_dirichlet(const DirichletPolynomial& f, double sigma, double t) {
  CompensatedComplexSum sum;
  for (const auto& [n, a] : f.terms()) {
    if (n == 1) {
      sum += a;
      continue;
    }
    const double log_n = std::log(static_cast<double>(n));
    sum += a * std::polar(std::exp(-sigma * log_n), -t * log_n);
  }
  return sum.value();
}

Complex eval_torus(const TorusPolynomial& F, const TorusPoint& omega) {
  if (F.support_dim() > omega.dimension()) {
    throw DimensionError("torus point of dimension " + std::to_string(omega.dimension()) +
                         " cannot evaluate a polynomial in " + std::to_string(F.support_dim()) + " variables");
  }
  CompensatedComplexSum sum;
  for (const auto& [alpha, a] : F.terms()) {
    double phase = 0.0;
    for (std::size_t j = 0; j < alpha.length(); ++j) phase += alpha[j] * omega.angle(j);
    sum += a * std::polar(1.0, phase);
  }
  return sum.value();
}

double carlson_limit(const DirichletPolynomial& f, double sigma) {
  CompensatedSum sum;
  for (const auto& [n, a] : f.terms()) sum += std::norm(a) * std::pow(static_cast<double>(n), -2.0 * sigma);
  return sum.value();
}

double lebesgue_line_mean(const DirichletPolynomial& f, double sigma, double T) {
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("mean length T must be positive and finite");
  if (!(sigma >= 0.0)) throw DomainError("sigma must be >= 0");

  CompensatedComplexSum sum;
  double scale = 0.0;
  for (const auto& [n, a] : f.terms()) {
    const double damp_n = std::pow(static_cast<double>(n), -sigma);
    scale += std::abs(a) * damp_n;
    for (const auto& [m, b] : f.terms()) {
      const double damp = damp_n * std::pow(static_cast<double>(m), -sigma);
      if (n == m) {
        sum += std::norm(a) * damp;
      } else {
        sum += a * std::conj(b) * damp * averaged_character(log_ratio(n, m), T);
      }
    }
  }
  const Complex mean = sum.value();
  if (std::abs(mean.imag()) > 1e-10 * std::max(scale * scale, 1e-300)) {
    throw Error("closed-form line mean has imaginary residue " + std::to_string(mean.imag()));
  }
  return mean.real();
}

double lebesgue_mean_envelope(const DirichletPolynomial& f, double sigma, double T) {
  if (!(T > 0.0)) throw DomainError("mean length T must be positive");
  CompensatedSum sum;
  for (const auto& [n, a] : f.terms()) {
    for (const auto& [m, b] : f.terms()) {
      if (n == m) continue;
      const double weight = std::abs(a) * std::abs(b) * std::pow(static_cast<double>(n) * static_cast<double>(m), -sigma);
      sum += weight * std::min(1.0, 2.0 / (T * std::abs(log_ratio(n, m))));
    }
  }
  return sum.value();
}

double coefficient_l1(const DirichletPolynomial& f) {
  CompensatedSum sum;
  for (const auto& [n, a] : f.terms()) sum += std::abs(a);
  return sum.value();
}

double coefficient_l1(const TorusPolynomial& F) {
  CompensatedSum sum;
  for (const auto& [alpha, a] : F.terms()) sum += std::abs(a);
  return sum.value();
}

}  // namespace carlson
