#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace carlson {

/// The first d primes together with their natural logarithms.
///
/// Logs are computed once at construction in double precision and shared by
/// every flow, residual and evaluation routine, so all of them see the same
/// frequencies bit for bit.
class PrimeBasis {
 public:
  explicit PrimeBasis(std::size_t dimension);

  std::size_t dimension() const noexcept { return primes_.size(); }
  std::span<const std::uint64_t> primes() const noexcept { return primes_; }
  std::span<const double> logs() const noexcept { return logs_; }

  std::uint64_t prime(std::size_t j) const { return primes_.at(j); }
  double log(std::size_t j) const { return logs_.at(j); }

  bool operator==(const PrimeBasis& other) const noexcept { return primes_ == other.primes_; }

 private:
  std::vector<std::uint64_t> primes_;
  std::vector<double> logs_;
};

/// The first `count` primes in increasing order (trial division; counts here are tiny).
std::vector<std::uint64_t> first_primes(std::size_t count);

}  // namespace carlson
