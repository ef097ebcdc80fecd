#include "primrun/arith.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace primrun::arith {

namespace {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

// Strong pseudoprime test to base a; n odd, n > 2, n - 1 = d * 2^s.
bool sprp_u64(std::uint64_t n, std::uint64_t a, std::uint64_t d, int s) {
  a %= n;
  if (a == 0) return true;
  std::uint64_t x = mod_pow_u64(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

bool sprp_mpz(const mpz_class& n, const mpz_class& a, const mpz_class& d, unsigned long s) {
  mpz_class x = mod_pow(a, d, n);
  mpz_class nm1 = n - 1;
  if (x == 1 || x == nm1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    x = (x * x) % n;
    if (x == nm1) return true;
  }
  return false;
}

// Strong Lucas test with Selfridge's parameter choice (method A).
bool strong_lucas_mpz(const mpz_class& n) {
  if (mpz_perfect_square_p(n.get_mpz_t())) return false;
  long d_abs = 5;
  for (;;) {
    mpz_class D(d_abs);
    int j = mpz_jacobi(D.get_mpz_t(), n.get_mpz_t());
    if (j == 0) return false;  // shared factor with a small |D|: composite here
    if (j == -1) break;
    d_abs = d_abs > 0 ? -(d_abs + 2) : -(d_abs - 2);
  }
  // P = 1, Q = (1 - D) / 4
  mpz_class Q = (1 - mpz_class(d_abs)) / 4;
  mpz_class delta = n + 1;
  unsigned long s = mpz_scan1(delta.get_mpz_t(), 0);
  mpz_class d = delta >> s;

  // Compute U_d, V_d mod n via the binary double-and-add chain.
  mpz_class U = 1, V = 1, Qk = Q % n;
  if (Qk < 0) Qk += n;
  long bits = static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2));
  mpz_class t;
  for (long i = bits - 2; i >= 0; --i) {
    // double: U_{2k} = U V, V_{2k} = V^2 - 2 Q^k
    U = (U * V) % n;
    V = (V * V - 2 * Qk) % n;
    Qk = (Qk * Qk) % n;
    if (mpz_tstbit(d.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) {
      // add one: U' = (P U + V)/2, V' = (D U + P V)/2 with P = 1
      t = U + V;
      if (mpz_odd_p(t.get_mpz_t())) t += n;
      mpz_class U2 = t / 2;
      t = mpz_class(d_abs) * U + V;
      t %= n;
      if (mpz_odd_p(t.get_mpz_t())) t += n;
      V = t / 2;
      U = U2;
      Qk = (Qk * Q) % n;
    }
    U %= n;
    V %= n;
  }
  U %= n;
  if (U < 0) U += n;
  V %= n;
  if (V < 0) V += n;
  if (U == 0 || V == 0) return true;
  for (unsigned long r = 1; r < s; ++r) {
    V = (V * V - 2 * Qk) % n;
    Qk = (Qk * Qk) % n;
    if (V == 0) return true;
  }
  return false;
}

constexpr std::uint64_t kDetBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

std::mutex g_sieve_mutex;
std::vector<std::uint64_t> g_primes;
std::uint64_t g_sieved_to = 0;

std::mutex g_cache_mutex;
std::map<mpz_class, Factorization> g_factor_cache;

// Brent's variant of Pollard rho; returns a nontrivial factor or 0.
mpz_class brent_rho(const mpz_class& n, unsigned long c, std::uint64_t budget) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  mpz_class y = 2, r = 1, q = 1, g = 1, x, ys;
  std::uint64_t used = 0;
  const unsigned long batch = 128;
  while (g == 1) {
    x = y;
    for (mpz_class i = 0; i < r; ++i) y = (y * y + c) % n;
    mpz_class k = 0;
    while (k < r && g == 1) {
      ys = y;
      unsigned long lim = batch;
      if (r - k < lim) lim = mpz_get_ui(mpz_class(r - k).get_mpz_t());
      for (unsigned long i = 0; i < lim; ++i) {
        y = (y * y + c) % n;
        mpz_class diff = x > y ? x - y : y - x;
        q = (q * diff) % n;
      }
      used += lim;
      if (used > budget) return 0;
      g = gcd(q, n);
      k += lim;
    }
    r *= 2;
  }
  if (g == n) {
    // backtrack one multiply at a time
    do {
      ys = (ys * ys + c) % n;
      mpz_class diff = x > ys ? x - ys : ys - x;
      g = gcd(diff, n);
    } while (g == 1);
  }
  if (g == n) return 0;
  return g;
}

void factor_recursive(mpz_class n, const FactorOptions& opts,
                      std::map<mpz_class, unsigned>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out[n] += 1;
    return;
  }
  // perfect powers reduce the problem before rho
  if (mpz_perfect_power_p(n.get_mpz_t())) {
    for (unsigned long e = 2; e <= mpz_sizeinbase(n.get_mpz_t(), 2); ++e) {
      mpz_class root;
      if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), e) != 0) {
        std::map<mpz_class, unsigned> sub;
        factor_recursive(root, opts, sub);
        for (auto& [p, k] : sub) out[p] += k * static_cast<unsigned>(e);
        return;
      }
    }
  }
  mpz_class f = 0;
  for (unsigned long c = 1; c <= 16 && f == 0; ++c)
    f = brent_rho(n, c, opts.rho_iterations);
  if (f == 0)
    throw FactorBudgetError("rho budget exhausted on cofactor " + n.get_str());
  factor_recursive(f, opts, out);
  factor_recursive(n / f, opts, out);
}

}  // namespace

const std::vector<std::uint64_t>& small_primes(std::uint64_t bound) {
  std::lock_guard lock(g_sieve_mutex);
  if (bound > g_sieved_to) {
    std::uint64_t lim = std::max<std::uint64_t>(bound, 100000);
    std::vector<bool> comp(lim, false);
    g_primes.clear();
    for (std::uint64_t i = 2; i < lim; ++i) {
      if (!comp[i]) {
        g_primes.push_back(i);
        for (std::uint64_t j = i * i; j < lim; j += i) comp[j] = true;
      }
    }
    g_sieved_to = lim;
  }
  return g_primes;
}

std::vector<std::uint64_t> first_primes(unsigned k) {
  std::uint64_t bound = 100000;
  for (;;) {
    const auto& ps = small_primes(bound);
    if (ps.size() >= k) return {ps.begin(), ps.begin() + k};
    bound *= 2;
  }
}

mpz_class primorial(unsigned k) {
  mpz_class r = 1;
  for (auto p : first_primes(k)) r *= p;
  return r;
}

std::uint64_t mod_pow_u64(std::uint64_t base, std::uint64_t exponent, std::uint64_t modulus) {
  std::uint64_t r = modulus == 1 ? 0 : 1;
  base %= modulus;
  while (exponent) {
    if (exponent & 1) r = mulmod_u64(r, base, modulus);
    base = mulmod_u64(base, base, modulus);
    exponent >>= 1;
  }
  return r;
}

mpz_class mod_pow(const mpz_class& base, const mpz_class& exponent, const mpz_class& modulus) {
  if (modulus < 2) throw std::invalid_argument("mod_pow: modulus must be >= 2");
  mpz_class r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                          29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  // {2,3,5,7} suffices below 3215031751; the full set is deterministic to 2^64.
  if (n < 3215031751ull) {
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull})
      if (!sprp_u64(n, a, d, s)) return false;
    return true;
  }
  for (std::uint64_t a : kDetBases)
    if (!sprp_u64(n, a, d, s)) return false;
  return true;
}

std::string primality_policy(const mpz_class& n) {
  if (n.fits_ulong_p() || mpz_sizeinbase(n.get_mpz_t(), 2) <= 64)
    return "deterministic miller-rabin (n < 2^64)";
  return "baillie-psw + 20 strong pseudoprime rounds";
}

bool is_prime(const mpz_class& n) {
  if (n < 2) return false;
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64 && n.fits_ulong_p())
    return is_prime_u64(n.get_ui());
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47})
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return n == p;

  mpz_class nm1 = n - 1;
  unsigned long s = mpz_scan1(nm1.get_mpz_t(), 0);
  mpz_class d = nm1 >> s;
  if (!sprp_mpz(n, 2, d, s)) return false;
  if (!strong_lucas_mpz(n)) return false;
  // 20 extra strong-pseudoprime rounds, bases derived deterministically from n.
  gmp_randstate_t st;
  gmp_randinit_mt(st);
  gmp_randseed(st, mpz_class(n % 1000000007).get_mpz_t());
  mpz_class a;
  for (int i = 0; i < 20; ++i) {
    mpz_urandomm(a.get_mpz_t(), st, mpz_class(n - 3).get_mpz_t());
    a += 2;
    if (!sprp_mpz(n, a, d, s)) {
      gmp_randclear(st);
      return false;
    }
  }
  gmp_randclear(st);
  return true;
}

Factorization factorize(const mpz_class& n, const FactorOptions& opts) {
  if (n < 1) throw std::invalid_argument("factorize: n must be >= 1");
  Factorization f;
  f.value = n;
  if (n == 1) return f;
  std::map<mpz_class, unsigned> acc;
  mpz_class rest = n;
  for (auto p : small_primes(opts.trial_bound)) {
    if (p >= opts.trial_bound) break;
    if (mpz_class(p) * p > rest) break;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      acc[mpz_class(p)] += 1;
      rest /= p;
    }
  }
  if (rest > 1) factor_recursive(rest, opts, acc);
  f.factors.assign(acc.begin(), acc.end());
  return f;
}

Factorization factorize_cached(const mpz_class& n, const FactorOptions& opts) {
  {
    std::lock_guard lock(g_cache_mutex);
    auto it = g_factor_cache.find(n);
    if (it != g_factor_cache.end()) return it->second;
  }
  Factorization f = factorize(n, opts);
  std::lock_guard lock(g_cache_mutex);
  g_factor_cache.emplace(n, f);
  return f;
}

mpz_class Factorization::radical() const {
  mpz_class r = 1;
  for (auto& [p, e] : factors) r *= p;
  return r;
}

mpz_class Factorization::euler_phi() const {
  mpz_class r = value;
  for (auto& [p, e] : factors) {
    r /= p;
    r *= p - 1;
  }
  return r;
}

bool Factorization::contains(const mpz_class& p) const {
  return std::any_of(factors.begin(), factors.end(),
                     [&](const auto& pe) { return pe.first == p; });
}

bool Factorization::consistent() const {
  mpz_class prod = 1;
  mpz_class prev = 0;
  for (auto& [p, e] : factors) {
    if (e < 1 || p <= prev || !is_prime(p)) return false;
    prev = p;
    for (unsigned i = 0; i < e; ++i) prod *= p;
  }
  return prod == value;
}

unsigned omega(const mpz_class& n) { return factorize_cached(n).omega(); }
mpz_class radical(const mpz_class& n) { return factorize_cached(n).radical(); }
mpz_class euler_phi(const mpz_class& n) { return factorize_cached(n).euler_phi(); }

Factorization merge(const Factorization& a, const Factorization& b) {
  Factorization r;
  r.value = a.value * b.value;
  std::map<mpz_class, unsigned> acc;
  for (auto& [p, e] : a.factors) acc[p] += e;
  for (auto& [p, e] : b.factors) acc[p] += e;
  r.factors.assign(acc.begin(), acc.end());
  return r;
}

}  // namespace primrun::arith
