#include "carlson/prime_basis.hpp"

#include <cmath>

#include "carlson/errors.hpp"

namespace carlson {

std::vector<std::uint64_t> first_primes(std::size_t count) {
  std::vector<std::uint64_t> primes;
  primes.reserve(count);
  for (std::uint64_t candidate = 2; primes.size() < count; ++candidate) {
    bool is_prime = true;
    for (std::uint64_t p : primes) {
      if (p * p > candidate) break;
      if (candidate % p == 0) {
        is_prime = false;
        break;
      }
    }
    if (is_prime) primes.push_back(candidate);
  }
  return primes;
}

PrimeBasis::PrimeBasis(std::size_t dimension) : primes_(first_primes(dimension)) {
  if (dimension == 0) throw DomainError("prime basis dimension must be positive");
  logs_.reserve(primes_.size());
  for (std::uint64_t p : primes_) logs_.push_back(std::log(static_cast<double>(p)));
}

}  // namespace carlson
