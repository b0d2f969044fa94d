#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <numbers>
#include <span>
#include <vector>

#include "carlson/prime_basis.hpp"

namespace carlson {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce an angle to its canonical representative in [0, 2*pi).
double wrap_angle(double theta) noexcept;

/// Arc distance between two angles on the unit circle, in [0, pi].
double circle_distance(double a, double b) noexcept;

/// Finitely supported exponent vector (alpha_1, ..., alpha_d, 0, ...).
///
/// Trailing zeros are stripped on construction, so two spellings of the same
/// monomial compare and hash equal.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<std::uint32_t> exponents);
  MultiIndex(std::initializer_list<std::uint32_t> exponents)
      : MultiIndex(std::vector<std::uint32_t>(exponents)) {}

  /// Number of coordinates up to the last nonzero exponent.
  std::size_t length() const noexcept { return exponents_.size(); }
  std::uint32_t operator[](std::size_t j) const noexcept {
    return j < exponents_.size() ? exponents_[j] : 0u;
  }
  std::span<const std::uint32_t> exponents() const noexcept { return exponents_; }
  std::uint64_t total_degree() const noexcept;
  bool is_zero() const noexcept { return exponents_.empty(); }

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

 private:
  std::vector<std::uint32_t> exponents_;
};

/// omega = (e^{i theta_1}, ..., e^{i theta_d}), angles kept in [0, 2*pi).
class TorusPoint {
 public:
  TorusPoint() = default;
  explicit TorusPoint(std::vector<double> angles);

  std::size_t dimension() const noexcept { return angles_.size(); }
  std::span<const double> angles() const noexcept { return angles_; }
  double angle(std::size_t j) const { return angles_.at(j); }

  bool operator==(const TorusPoint&) const = default;

 private:
  std::vector<double> angles_;
};

/// Point reached at time t by the vertical-line flow started at the origin
/// of the torus: angle_j = (-t log p_j) mod 2*pi.
TorusPoint flow_point(const PrimeBasis& basis, double t);

/// Euclidean chord distance ||omega - z|| over the first `coords` coordinates.
double chord_distance(const TorusPoint& a, const TorusPoint& b, std::size_t coords);

}  // namespace carlson

template <>
struct std::hash<carlson::MultiIndex> {
  std::size_t operator()(const carlson::MultiIndex& alpha) const noexcept;
};
