#include "primrun/gfq.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>

namespace primrun::gfq {

namespace {

constexpr std::uint64_t kMaxExtensionP = 1ull << 31;  // coefficient products must fit

void trim(Poly& a) {
  while (a.size() > 1 && a.back() == 0) a.pop_back();
}

Poly poly_one(unsigned deg) {
  Poly r(deg, 0);
  r[0] = 1;
  return r;
}

// a * b mod (f, p); a and b have length deg, f length deg+1.
Poly mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t p) {
  unsigned deg = static_cast<unsigned>(f.size()) - 1;
  std::vector<unsigned __int128> acc(2 * deg - 1, 0);
  for (unsigned i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (unsigned j = 0; j < b.size(); ++j)
      acc[i + j] += static_cast<unsigned __int128>(a[i]) * b[j];
  }
  std::vector<std::uint64_t> r(acc.size());
  for (size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<std::uint64_t>(acc[i] % p);
  // reduce by the monic modulus
  for (size_t i = r.size(); i-- > deg;) {
    std::uint64_t c = r[i];
    if (c) {
      for (unsigned j = 0; j < deg; ++j) {
        std::uint64_t sub = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(c) * f[j]) % p);
        std::uint64_t& t = r[i - deg + j];
        t = (t + p - sub) % p;
      }
    }
    r[i] = 0;
  }
  r.resize(deg);
  return r;
}

Poly powmod(Poly a, mpz_class e, const Poly& f, std::uint64_t p) {
  unsigned deg = static_cast<unsigned>(f.size()) - 1;
  Poly r = poly_one(deg);
  a.resize(deg, 0);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = mulmod(r, a, f, p);
    a = mulmod(a, a, f, p);
    e >>= 1;
  }
  return r;
}

// gcd of polynomials over F_p (operands in ascending form, any length).
Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  auto is_zero = [](const Poly& x) { return x.size() == 1 && x[0] == 0; };
  while (!is_zero(b)) {
    // a mod b
    Poly r = a;
    std::uint64_t lead_inv = arith::mod_pow_u64(b.back(), p - 2, p);
    while (r.size() >= b.size() && !is_zero(r)) {
      std::uint64_t c = static_cast<std::uint64_t>(
          (static_cast<unsigned __int128>(r.back()) * lead_inv) % p);
      size_t shift = r.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i) {
        std::uint64_t sub = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(c) * b[i]) % p);
        r[shift + i] = (r[shift + i] + p - sub) % p;
      }
      trim(r);
      if (r.size() == 1 && r[0] == 0) break;
      if (r.size() < b.size()) break;
    }
    a = b;
    b = r;
    trim(b);
  }
  return a;
}

Poly poly_x(unsigned deg) {
  Poly x(deg, 0);
  if (deg >= 2) x[1] = 1;
  return x;
}

bool fits_u64(const mpz_class& v) {
  return mpz_sizeinbase(v.get_mpz_t(), 2) <= 63;
}

}  // namespace

bool poly_is_irreducible(const Poly& f, std::uint64_t p) {
  unsigned n = static_cast<unsigned>(f.size()) - 1;
  if (n == 0) return false;
  if (f.back() != 1) return false;
  if (n == 1) return true;
  // x^(p^n) == x mod f, and gcd(x^(p^(n/d)) - x, f) == 1 for prime d | n
  mpz_class P(static_cast<unsigned long>(p));
  Poly x = poly_x(n);
  mpz_class pn;
  mpz_pow_ui(pn.get_mpz_t(), P.get_mpz_t(), n);
  if (powmod(x, pn, f, p) != x) return false;
  for (unsigned d = 2; d <= n; ++d) {
    if (n % d != 0 || !arith::is_prime_u64(d)) continue;
    mpz_class pk;
    mpz_pow_ui(pk.get_mpz_t(), P.get_mpz_t(), n / d);
    Poly t = powmod(x, pk, f, p);
    // t - x
    t.resize(std::max<size_t>(t.size(), 2), 0);
    t[1] = (t[1] + p - 1) % p;
    trim(t);
    if (t.size() == 1 && t[0] == 0) return false;  // x^{p^k} == x: proper subfield
    Poly g = poly_gcd(f, t, p);
    if (g.size() > 1) return false;
  }
  return true;
}

bool poly_is_primitive(const Poly& f, std::uint64_t p,
                       const arith::Factorization& q_minus_1) {
  unsigned n = static_cast<unsigned>(f.size()) - 1;
  if (!poly_is_irreducible(f, p)) return false;
  Poly x = poly_x(n);
  Poly one = poly_one(n);
  for (const auto& [pi, e] : q_minus_1.factors) {
    mpz_class exp = q_minus_1.value / pi;
    if (powmod(x, exp, f, p) == one) return false;
  }
  return true;
}

FieldSpec make_prime_field(const mpz_class& p, arith::Factorization q_minus_1) {
  if (!arith::is_prime(p))
    throw FieldError(FieldErrorKind::NotPrime, "p = " + p.get_str() + " is not prime");
  if (q_minus_1.value != p - 1 || !q_minus_1.consistent())
    throw FieldError(FieldErrorKind::NotPrime, "bad q-1 factorization for p = " + p.get_str());
  FieldSpec fld;
  fld.p = p;
  fld.deg = 1;
  fld.q = p;
  fld.q_minus_1 = std::move(q_minus_1);
  return fld;
}

FieldSpec make_prime_field(const mpz_class& p) {
  if (!arith::is_prime(p))
    throw FieldError(FieldErrorKind::NotPrime, "p = " + p.get_str() + " is not prime");
  return make_prime_field(p, arith::factorize_cached(p - 1));
}

FieldSpec make_extension_field(std::uint64_t p, unsigned n, const Poly& modulus) {
  if (n < 2) throw std::invalid_argument("extension degree must be >= 2");
  if (p >= kMaxExtensionP) throw std::invalid_argument("extension field p too large");
  if (!arith::is_prime_u64(p))
    throw FieldError(FieldErrorKind::NotPrime, "p = " + std::to_string(p) + " is not prime");
  if (modulus.size() != n + 1 || modulus.back() != 1)
    throw std::invalid_argument("modulus must be monic of degree n");
  for (auto c : modulus)
    if (c >= p) throw std::invalid_argument("modulus coefficient out of range");
  FieldSpec fld;
  fld.p = static_cast<unsigned long>(p);
  fld.deg = n;
  mpz_pow_ui(fld.q.get_mpz_t(), fld.p.get_mpz_t(), n);
  fld.q_minus_1 = arith::factorize_cached(fld.q - 1);
  if (!poly_is_irreducible(modulus, p))
    throw FieldError(FieldErrorKind::NotIrreducible,
                     poly_to_string(modulus) + " is not irreducible over F_" + std::to_string(p));
  if (!poly_is_primitive(modulus, p, fld.q_minus_1))
    throw FieldError(FieldErrorKind::NotPrimitive,
                     poly_to_string(modulus) + " is not primitive over F_" + std::to_string(p));
  fld.modulus = modulus;
  return fld;
}

Poly find_primitive_polynomial(std::uint64_t p, unsigned n, std::uint64_t seed,
                               std::uint64_t budget) {
  if (n < 2) throw std::invalid_argument("degree-1 extension is the prime field");
  if (!arith::is_prime_u64(p))
    throw FieldError(FieldErrorKind::NotPrime, "p = " + std::to_string(p) + " is not prime");
  mpz_class q;
  mpz_class P(static_cast<unsigned long>(p));
  mpz_pow_ui(q.get_mpz_t(), P.get_mpz_t(), n);
  auto q1 = arith::factorize_cached(q - 1);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> coeff(0, p - 1);
  std::uniform_int_distribution<std::uint64_t> nonzero(1, p - 1);
  for (std::uint64_t tries = 0; tries < budget; ++tries) {
    Poly f(n + 1, 0);
    f[n] = 1;
    f[0] = nonzero(rng);  // zero constant term is never irreducible for n >= 2
    for (unsigned i = 1; i < n; ++i) f[i] = coeff(rng);
    if (!poly_is_irreducible(f, p)) continue;
    if (poly_is_primitive(f, p, q1)) return f;
  }
  throw std::runtime_error("primitive polynomial candidate budget exhausted");
}

Poly gf_mul(const FieldSpec& fld, const Poly& a, const Poly& b) {
  return mulmod(a, b, fld.modulus, fld.p_u64());
}

Poly gf_pow(const FieldSpec& fld, Poly a, mpz_class e) {
  return powmod(std::move(a), std::move(e), fld.modulus, fld.p_u64());
}

bool gf_is_zero(const Poly& a) {
  return std::all_of(a.begin(), a.end(), [](std::uint64_t c) { return c == 0; });
}

bool gf_is_one(const Poly& a) {
  if (a.empty() || a[0] != 1) return false;
  return std::all_of(a.begin() + 1, a.end(), [](std::uint64_t c) { return c == 0; });
}

bool gf_successor(const FieldSpec& fld, Poly& a, bool wrap) {
  std::uint64_t p = fld.p_u64();
  if (a[0] + 1 == p) {
    if (!wrap) return false;
    a[0] = 0;
    return true;
  }
  a[0] += 1;
  return true;
}

mpz_class gf_encode(const FieldSpec& fld, const Poly& a) {
  mpz_class v = 0;
  for (size_t i = a.size(); i-- > 0;) v = v * fld.p + static_cast<unsigned long>(a[i]);
  return v;
}

Poly gf_decode(const FieldSpec& fld, mpz_class v) {
  Poly a(fld.deg, 0);
  std::uint64_t p = fld.p_u64();
  for (unsigned i = 0; i < fld.deg; ++i) {
    a[i] = mpz_fdiv_ui(v.get_mpz_t(), p);
    v /= static_cast<unsigned long>(p);
  }
  return a;
}

bool is_primitive(const mpz_class& a, const FieldSpec& fld) {
  if (!fld.is_prime_field()) throw std::invalid_argument("residue form needs a prime field");
  mpz_class r = a % fld.q;
  if (r < 0) r += fld.q;
  if (r == 0) throw FieldError(FieldErrorKind::ZeroElement, "zero is never primitive");
  if (fits_u64(fld.q)) {
    std::uint64_t q = fld.q.get_ui();
    std::uint64_t au = r.get_ui();
    for (const auto& [pi, e] : fld.q_minus_1.factors) {
      std::uint64_t exp = mpz_class((fld.q - 1) / pi).get_ui();
      if (arith::mod_pow_u64(au, exp, q) == 1) return false;
    }
    return true;
  }
  for (const auto& [pi, e] : fld.q_minus_1.factors) {
    if (arith::mod_pow(r, (fld.q - 1) / pi, fld.q) == 1) return false;
  }
  return true;
}

bool is_primitive(const Poly& a, const FieldSpec& fld) {
  if (fld.is_prime_field()) {
    if (a.size() != 1) throw std::invalid_argument("element size mismatch");
    return is_primitive(mpz_class(static_cast<unsigned long>(a[0])), fld);
  }
  if (a.size() != fld.deg) throw std::invalid_argument("element size mismatch");
  if (gf_is_zero(a)) throw FieldError(FieldErrorKind::ZeroElement, "zero is never primitive");
  for (const auto& [pi, e] : fld.q_minus_1.factors) {
    if (gf_is_one(gf_pow(fld, a, (fld.q - 1) / pi))) return false;
  }
  return true;
}

PowerEnumerator::PowerEnumerator(const FieldSpec& fld, const Poly& generator)
    : fld_(fld), gen_(generator), cur_(generator) {
  bool prim = fld.is_prime_field()
                  ? is_primitive(mpz_class(static_cast<unsigned long>(generator.at(0))), fld)
                  : is_primitive(generator, fld);
  if (!prim)
    throw FieldError(FieldErrorKind::NotPrimitive, "generator is not primitive");
}

std::optional<Poly> PowerEnumerator::next() {
  auto mul = [&](const Poly& a, const Poly& b) {
    if (fld_.is_prime_field()) {
      mpz_class r = (mpz_class(static_cast<unsigned long>(a[0])) *
                     static_cast<unsigned long>(b[0])) % fld_.q;
      return Poly{r.get_ui()};
    }
    return gf_mul(fld_, a, b);
  };
  while (m_ < fld_.q - 1) {
    if (m_ > 0) cur_ = mul(cur_, gen_);
    m_ += 1;
    mpz_class g = gcd(m_, mpz_class(fld_.q - 1));
    if (g == 1) return cur_;
  }
  return std::nullopt;
}

std::string poly_to_string(const Poly& f) {
  std::ostringstream os;
  bool first = true;
  for (size_t i = f.size(); i-- > 0;) {
    if (f[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << f[i];
    } else {
      if (f[i] != 1) os << f[i];
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  if (first) os << "0";
  return os.str();
}

std::string element_to_string(const Poly& a) { return poly_to_string(a); }

Poly poly_from_string(const std::string& text, std::uint64_t p) {
  // accepts forms like "x^2 + 24x + 2", "x^2+24x+2", "2x", "11x + 3"
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  std::vector<std::pair<unsigned, std::uint64_t>> terms;
  size_t i = 0;
  unsigned max_deg = 0;
  while (i < s.size()) {
    if (s[i] == '+') ++i;
    std::uint64_t coeff = 1;
    bool have_coeff = false;
    size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) {
      coeff = std::stoull(s.substr(i, j - i));
      have_coeff = true;
      i = j;
    }
    unsigned deg = 0;
    if (i < s.size() && s[i] == 'x') {
      ++i;
      deg = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == i) throw std::invalid_argument("bad polynomial text: " + text);
        deg = static_cast<unsigned>(std::stoul(s.substr(i, j - i)));
        i = j;
      }
    } else if (!have_coeff) {
      throw std::invalid_argument("bad polynomial text: " + text);
    }
    terms.emplace_back(deg, coeff % p);
    max_deg = std::max(max_deg, deg);
  }
  Poly f(max_deg + 1, 0);
  for (auto& [d, c] : terms) f[d] = (f[d] + c) % p;
  return f;
}

}  // namespace primrun::gfq
