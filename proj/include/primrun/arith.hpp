#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace primrun::arith {

// Complete factorization of a positive integer. Primes are strictly
// increasing and every exponent is >= 1; the empty list represents 1.
struct Factorization {
  mpz_class value{1};
  std::vector<std::pair<mpz_class, unsigned>> factors;

  unsigned omega() const { return static_cast<unsigned>(factors.size()); }
  mpz_class radical() const;
  mpz_class euler_phi() const;
  bool contains(const mpz_class& p) const;

  // Recomposes prime^exponent products and checks it against value.
  bool consistent() const;
};

struct FactorBudgetError : std::runtime_error {
  explicit FactorBudgetError(const std::string& what) : std::runtime_error(what) {}
};

struct FactorOptions {
  std::uint64_t trial_bound = 100000;       // trial division by primes below this
  std::uint64_t rho_iterations = 100000000; // per-cofactor Brent budget
};

// Deterministic Miller-Rabin below 2^64; BPSW plus 20 extra strong
// pseudoprime rounds above. primality_policy() names the policy used
// for a given operand so reports can record it.
bool is_prime(const mpz_class& n);
bool is_prime_u64(std::uint64_t n);
std::string primality_policy(const mpz_class& n);

Factorization factorize(const mpz_class& n, const FactorOptions& opts = {});

// Process-wide cache in front of factorize(); safe for concurrent use.
Factorization factorize_cached(const mpz_class& n, const FactorOptions& opts = {});

unsigned omega(const mpz_class& n);
mpz_class radical(const mpz_class& n);
mpz_class euler_phi(const mpz_class& n);

mpz_class mod_pow(const mpz_class& base, const mpz_class& exponent, const mpz_class& modulus);
std::uint64_t mod_pow_u64(std::uint64_t base, std::uint64_t exponent, std::uint64_t modulus);

// First k primes, and their product (the k-th primorial).
std::vector<std::uint64_t> first_primes(unsigned k);
mpz_class primorial(unsigned k);

// All primes below `bound` (shared sieve, grown on demand).
const std::vector<std::uint64_t>& small_primes(std::uint64_t bound);

// Merge two factor lists (value = a.value * b.value).
Factorization merge(const Factorization& a, const Factorization& b);

}  // namespace primrun::arith
