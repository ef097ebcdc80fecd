#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "primrun/arith.hpp"

namespace primrun::gfq {

// Coefficient vector of an element of F_p[x]/(f), ascending degree.
// For a prime field the vector has length 1 and holds the residue.
using Poly = std::vector<std::uint64_t>;

enum class FieldErrorKind { NotPrime, NotIrreducible, NotPrimitive, ZeroElement };

struct FieldError : std::runtime_error {
  FieldErrorKind kind;
  FieldError(FieldErrorKind k, const std::string& what)
      : std::runtime_error(what), kind(k) {}
};

// Description of F_q with q = p^deg. For deg >= 2 the modulus is monic,
// irreducible and primitive over F_p, ascending coefficients, size deg+1.
struct FieldSpec {
  mpz_class p;
  unsigned deg = 1;
  mpz_class q;
  Poly modulus;  // empty when deg == 1
  arith::Factorization q_minus_1;

  bool is_prime_field() const { return deg == 1; }
  std::uint64_t p_u64() const { return p.get_ui(); }
};

FieldSpec make_prime_field(const mpz_class& p);
// Variant with q-1 already factored (hunts know the factors by construction).
FieldSpec make_prime_field(const mpz_class& p, arith::Factorization q_minus_1);
FieldSpec make_extension_field(std::uint64_t p, unsigned n, const Poly& modulus);

// Pseudorandom search for a primitive degree-n polynomial over F_p,
// deterministic in `seed`. Throws on an exhausted candidate budget.
Poly find_primitive_polynomial(std::uint64_t p, unsigned n, std::uint64_t seed,
                               std::uint64_t budget = 1000000);

bool poly_is_irreducible(const Poly& f, std::uint64_t p);
bool poly_is_primitive(const Poly& f, std::uint64_t p,
                       const arith::Factorization& q_minus_1);

// Element arithmetic modulo the field's modulus.
Poly gf_mul(const FieldSpec& fld, const Poly& a, const Poly& b);
Poly gf_pow(const FieldSpec& fld, Poly a, mpz_class e);
bool gf_is_zero(const Poly& a);
bool gf_is_one(const Poly& a);

// Successor = increment of the constant coefficient mod p. Returns false
// when wrap == false and the constant coefficient would wrap past p-1.
bool gf_successor(const FieldSpec& fld, Poly& a, bool wrap);

// Integer encoding sum c_i p^i; defines the canonical element scan order.
mpz_class gf_encode(const FieldSpec& fld, const Poly& a);
Poly gf_decode(const FieldSpec& fld, mpz_class v);

bool is_primitive(const mpz_class& a, const FieldSpec& fld);
bool is_primitive(const Poly& a, const FieldSpec& fld);

// Yields generator^m for m coprime to q-1, in power order: exactly
// phi(q-1) elements. Throws FieldError(NotPrimitive) for a bad generator.
class PowerEnumerator {
 public:
  PowerEnumerator(const FieldSpec& fld, const Poly& generator);
  std::optional<Poly> next();

 private:
  const FieldSpec& fld_;
  Poly gen_, cur_;
  mpz_class m_{0};
};

// Text forms: "x^2 + 24x + 2" (descending, zero terms omitted).
std::string poly_to_string(const Poly& f);
std::string element_to_string(const Poly& a);
Poly poly_from_string(const std::string& text, std::uint64_t p);

}  // namespace primrun::gfq
