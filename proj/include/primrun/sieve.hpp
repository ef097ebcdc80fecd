#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "primrun/arith.hpp"

namespace primrun::sieve {

// Which sieving inequality applies: the generic one, or the sharper
// variant valid when q = 3 (mod 4) (exactly 4x smaller bound).
enum class ResidueClass { Any, ThreeMod4 };

struct NonPositiveDelta : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// delta = 1 - n * sum 1/p over the sieved primes, exact.
mpq_class compute_delta(unsigned n, const std::vector<std::uint64_t>& sieved_primes);

// Right-hand side of the sieving inequality:
//   A * ((n*s - 1)/delta + 2) * 2^(n*(omega-s)), squared,
// with A = n-1 (Any) or (n-1)/2 (ThreeMod4). Exact rational.
mpq_class bound_rhs_exact(unsigned n, unsigned s, const mpq_class& delta,
                          unsigned omega, ResidueClass rc);
// Ceiling of the above; a run of n consecutive primitive elements exists
// for every q > bound with omega(q-1) = omega (and q = 3 mod 4 if rc says so).
mpz_class bound_rhs(unsigned n, unsigned s, const mpq_class& delta,
                    unsigned omega, ResidueClass rc);

// One (omega, s) sieving case: interval (lower, upper] of possible
// exceptions, empty (eliminated) when lower >= upper.
struct SieveCase {
  unsigned n = 0;
  unsigned omega = 0;
  unsigned s = 0;
  std::vector<std::uint64_t> sieved_primes;  // the s largest candidates
  mpq_class delta;
  ResidueClass residue_class = ResidueClass::ThreeMod4;
  mpz_class lower;  // product of the candidate primes, plus 1
  mpz_class upper;  // = bound_rhs
  bool eliminated = false;
};

// Best case for an explicit candidate prime set: sieve the s largest
// candidates, taking the s minimizing the bound (s >= 1 where delta > 0;
// falls back to s = 0, delta = 1 when no s qualifies).
SieveCase best_case(unsigned n, const std::vector<std::uint64_t>& candidate_primes,
                    ResidueClass rc = ResidueClass::ThreeMod4);

// Rows of the bound table: best_case over the omega smallest primes for
// each omega in [omega_lo, omega_hi].
std::vector<SieveCase> scan_cases(unsigned n, unsigned omega_lo, unsigned omega_hi,
                                  ResidueClass rc = ResidueClass::ThreeMod4);

// One branch of the prime divisor tree at level k: assumptions
// "p | q-1" / "p does not divide q-1" over the k smallest odd primes.
struct TreeBranch {
  unsigned level = 0;
  unsigned mask = 0;  // bit i set = the i-th odd prime is assumed excluded
  std::vector<std::uint64_t> asserted;
  std::vector<std::uint64_t> excluded;
  std::vector<std::uint64_t> candidate_primes;  // omega smallest consistent primes
  SieveCase derived;   // bound recomputed from candidate_primes
  mpz_class D;         // forced divisor: product of the omega smallest primes / excluded
  mpz_class hunt_lower;  // base-case interval the branch's candidates live in
  mpz_class hunt_upper;
  bool surviving = false;
};

// All 2^level branches for the given omega, sorted by assumption mask
// (mask 0 = every level prime asserted). A branch survives when the base
// case does and some multiple of D lies in (hunt_lower, hunt_upper].
std::vector<TreeBranch> divisor_tree(unsigned n, unsigned omega, unsigned level,
                                     ResidueClass rc = ResidueClass::ThreeMod4);

// Smallest possible q with omega distinct prime factors of q-1 avoiding
// the excluded primes: product of the omega smallest consistent primes, +1.
mpz_class interval_lower(unsigned omega, const std::vector<std::uint64_t>& excluded = {});

// Display helpers ----------------------------------------------------

// Table rendering of delta: 1 - n * (nearest double of the exact sum
// of reciprocals), 15 significant digits, zero-padded on the right to
// `frac_width` digits after the decimal point.
std::string format_delta(unsigned n, const mpq_class& delta, int frac_width);
// Pads every column entry to the widest row (15 significant digits each).
std::vector<std::string> format_delta_column(unsigned n, const std::vector<mpq_class>& deltas);
// Scientific notation with the mantissa truncated to 4 digits: "3.057e9".
std::string format_sci(const mpz_class& v);

// Branch table export (input artifact for the hunt driver).
std::string cases_to_csv(const std::vector<SieveCase>& cases);
std::string branches_to_csv(const std::vector<TreeBranch>& branches);
std::string branches_to_json(const std::vector<TreeBranch>& branches);

}  // namespace primrun::sieve
