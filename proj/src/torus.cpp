#include "carlson/torus.hpp"

#include <cmath>

#include "carlson/errors.hpp"

namespace carlson {

double wrap_angle(double theta) noexcept {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a tiny negative value can round back up to exactly 2*pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double circle_distance(double a, double b) noexcept {
  const double diff = wrap_angle(wrap_angle(a) - wrap_angle(b));
  return diff > std::numbers::pi ? kTwoPi - diff : diff;
}

MultiIndex::MultiIndex(std::vector<std::uint32_t> exponents) : exponents_(std::move(exponents)) {
  while (!exponents_.empty() && exponents_.back() == 0) exponents_.pop_back();
}

std::uint64_t MultiIndex::total_degree() const noexcept {
  std::uint64_t total = 0;
  for (std::uint32_t e : exponents_) total += e;
  return total;
}

TorusPoint::TorusPoint(std::vector<double> angles) : angles_(std::move(angles)) {
  for (double& a : angles_) {
    if (!std::isfinite(a)) throw DomainError("torus angle must be finite");
    a = wrap_angle(a);
  }
}

TorusPoint flow_point(const PrimeBasis& basis, double t) {
  std::vector<double> angles;
  angles.reserve(basis.dimension());
  for (double log_p : basis.logs()) angles.push_back(-t * log_p);
  return TorusPoint(std::move(angles));
}

double chord_distance(const TorusPoint& a, const TorusPoint& b, std::size_t coords) {
  if (coords > a.dimension() || coords > b.dimension()) {
    throw DimensionError("chord distance over more coordinates than the points carry");
  }
  double sum = 0.0;
  for (std::size_t r = 0; r < coords; ++r) {
    const double chord = 2.0 * std::sin(0.5 * circle_distance(a.angle(r), b.angle(r)));
    sum += chord * chord;
  }
  return std::sqrt(sum);
}

}  // namespace carlson

std::size_t std::hash<carlson::MultiIndex>::operator()(const carlson::MultiIndex& alpha) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (std::uint32_t e : alpha.exponents()) {
    h ^= e + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}
