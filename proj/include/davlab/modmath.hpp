#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "davlab/errors.hpp"

namespace davlab {

// Modular arithmetic helpers. All moduli fit in int64 (callers keep n below
// 2^31, so products of two residues fit in int64 without overflow).

inline std::int64_t mod_reduce(std::int64_t a, std::int64_t mod) {
  std::int64_t r = a % mod;
  return r < 0 ? r + mod : r;
}

inline std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t mod) {
  if (mod <= 0) throw ParamOutOfRange("pow_mod: modulus must be positive");
  if (mod == 1) return 0;
  std::int64_t result = 1;
  std::int64_t b = mod_reduce(base, mod);
  while (exp > 0) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return result;
}

// Distinct prime divisors in ascending order, by trial division.
inline std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> primes;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      primes.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) primes.push_back(n);
  return primes;
}

inline std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> small, large;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d != n / d) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

// True iff the multiplicative order of s modulo `mod` is exactly m.
// Decided with O(log) power computations: s^m == 1 and s^(m/p) != 1 for
// every prime p dividing m. For mod == 1 every residue behaves as the
// identity, so the order is 1.
inline bool has_order_mod(std::int64_t s, std::int64_t m, std::int64_t mod) {
  if (m < 1 || mod < 1) return false;
  if (mod == 1) return m == 1;
  if (std::gcd(mod_reduce(s, mod), mod) != 1) return false;
  if (pow_mod(s, m, mod) != 1) return false;
  for (std::int64_t p : prime_factors(m)) {
    if (pow_mod(s, m / p, mod) == 1) return false;
  }
  return true;
}

// Multiplicative order by iteration; intended for moderate moduli.
inline std::int64_t multiplicative_order(std::int64_t s, std::int64_t mod) {
  if (mod < 1) throw ParamOutOfRange("multiplicative_order: modulus must be positive");
  if (mod == 1) return 1;
  std::int64_t r = mod_reduce(s, mod);
  if (std::gcd(r, mod) != 1) throw ParamOutOfRange("multiplicative_order: gcd(s, mod) != 1");
  std::int64_t t = r, order = 1;
  while (t != 1) {
    t = t * r % mod;
    ++order;
  }
  return order;
}

}  // namespace davlab
