#include "primrun/sieve.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace primrun::sieve {

namespace {

mpz_class product_u64(const std::vector<std::uint64_t>& ps) {
  mpz_class r = 1;
  for (auto p : ps) r *= static_cast<unsigned long>(p);
  return r;
}

bool contains(const std::vector<std::uint64_t>& v, std::uint64_t x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

// The omega smallest primes avoiding `excluded`.
std::vector<std::uint64_t> consistent_primes(unsigned omega,
                                             const std::vector<std::uint64_t>& excluded) {
  std::vector<std::uint64_t> out;
  std::uint64_t p = 2;
  while (out.size() < omega) {
    if (!contains(excluded, p)) out.push_back(p);
    mpz_class np(static_cast<unsigned long>(p));
    mpz_nextprime(np.get_mpz_t(), np.get_mpz_t());
    p = np.get_ui();
  }
  return out;
}

}  // namespace

mpq_class compute_delta(unsigned n, const std::vector<std::uint64_t>& sieved_primes) {
  mpq_class sum = 0;
  for (auto p : sieved_primes) sum += mpq_class(1, static_cast<unsigned long>(p));
  mpq_class d = 1 - n * sum;
  d.canonicalize();
  return d;
}

mpq_class bound_rhs_exact(unsigned n, unsigned s, const mpq_class& delta,
                          unsigned omega, ResidueClass rc) {
  if (delta <= 0) throw NonPositiveDelta("delta <= 0 for s = " + std::to_string(s));
  mpq_class lead = rc == ResidueClass::ThreeMod4 ? mpq_class(n - 1, 2) : mpq_class(n - 1);
  mpq_class inner = mpq_class(static_cast<long>(n) * s - 1) / delta + 2;
  mpz_class two_pow;
  mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, static_cast<unsigned long>(n) * (omega - s));
  mpq_class rhs = lead * inner * two_pow;
  rhs = rhs * rhs;
  rhs.canonicalize();
  return rhs;
}

mpz_class bound_rhs(unsigned n, unsigned s, const mpq_class& delta,
                    unsigned omega, ResidueClass rc) {
  mpq_class rhs = bound_rhs_exact(n, s, delta, omega, rc);
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), rhs.get_num_mpz_t(), rhs.get_den_mpz_t());
  return c;
}

SieveCase best_case(unsigned n, const std::vector<std::uint64_t>& candidate_primes,
                    ResidueClass rc) {
  unsigned omega = static_cast<unsigned>(candidate_primes.size());
  SieveCase best;
  best.n = n;
  best.omega = omega;
  best.residue_class = rc;
  bool have = false;
  for (unsigned s = 1; s <= omega; ++s) {
    std::vector<std::uint64_t> sieved(candidate_primes.end() - s, candidate_primes.end());
    mpq_class d = compute_delta(n, sieved);
    if (d <= 0) continue;
    mpz_class b = bound_rhs(n, s, d, omega, rc);
    if (!have || b < best.upper) {
      best.s = s;
      best.sieved_primes = std::move(sieved);
      best.delta = d;
      best.upper = b;
      have = true;
    }
  }
  if (!have) {  // Rad(e) = Rad(q-1) branch: s = 0, delta = 1
    best.s = 0;
    best.delta = 1;
    best.upper = bound_rhs(n, 0, best.delta, omega, rc);
  }
  best.lower = product_u64(candidate_primes) + 1;
  best.eliminated = best.lower > best.upper;
  return best;
}

std::vector<SieveCase> scan_cases(unsigned n, unsigned omega_lo, unsigned omega_hi,
                                  ResidueClass rc) {
  if (omega_lo < 1 || omega_lo > omega_hi)
    throw std::invalid_argument("bad omega range");
  std::vector<SieveCase> out;
  for (unsigned omega = omega_lo; omega <= omega_hi; ++omega)
    out.push_back(best_case(n, consistent_primes(omega, {}), rc));
  return out;
}

mpz_class interval_lower(unsigned omega, const std::vector<std::uint64_t>& excluded) {
  return product_u64(consistent_primes(omega, excluded)) + 1;
}

std::vector<TreeBranch> divisor_tree(unsigned n, unsigned omega, unsigned level,
                                     ResidueClass rc) {
  if (level > 20) throw std::invalid_argument("tree level too deep");
  std::vector<std::uint64_t> odd = consistent_primes(level + 1, {});
  odd.erase(odd.begin());  // the level smallest odd primes

  SieveCase base = best_case(n, consistent_primes(omega, {}), rc);
  mpz_class primorial = base.lower - 1;

  std::vector<TreeBranch> out;
  for (unsigned mask = 0; mask < (1u << level); ++mask) {
    TreeBranch br;
    br.level = level;
    br.mask = mask;
    for (unsigned i = 0; i < level; ++i)
      (mask >> i & 1 ? br.excluded : br.asserted).push_back(odd[i]);
    br.candidate_primes = consistent_primes(omega, br.excluded);
    br.derived = best_case(n, br.candidate_primes, rc);
    br.D = primorial;
    for (auto p : br.excluded)
      if (mpz_divisible_ui_p(br.D.get_mpz_t(), static_cast<unsigned long>(p)))
        br.D /= static_cast<unsigned long>(p);
    br.hunt_lower = base.lower;
    br.hunt_upper = base.upper;
    // surviving iff the base interval is nonempty and holds a multiple of D
    mpz_class hi_mult = (br.hunt_upper / br.D) * br.D;
    br.surviving = !base.eliminated && hi_mult > br.hunt_lower;
    out.push_back(std::move(br));
  }
  return out;
}

// Display helpers ----------------------------------------------------

namespace {

// Nearest double via an exact 25-digit decimal expansion.
double to_double_nearest(const mpq_class& x) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, 25);
  mpz_class num = x.get_num() * scale;
  mpz_class digits;
  mpz_fdiv_q(digits.get_mpz_t(), num.get_mpz_t(), x.get_den_mpz_t());
  std::string s = digits.get_str();
  bool neg = !s.empty() && s[0] == '-';
  if (neg) s = s.substr(1);
  if (s.size() < 26) s = std::string(26 - s.size(), '0') + s;
  std::string text = (neg ? "-" : "") + s.substr(0, s.size() - 25) + "." +
                     s.substr(s.size() - 25);
  return std::strtod(text.c_str(), nullptr);
}

std::string g15(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

int frac_digits(const std::string& s) {
  auto dot = s.find('.');
  return dot == std::string::npos ? 0 : static_cast<int>(s.size() - dot - 1);
}

}  // namespace

double delta_double(unsigned n, const mpq_class& delta) {
  mpq_class sum = (1 - delta) / n;  // the exact sum of sieved reciprocals
  sum.canonicalize();
  return 1.0 - n * to_double_nearest(sum);
}

std::string format_delta(unsigned n, const mpq_class& delta, int frac_width) {
  std::string s = g15(delta_double(n, delta));
  if (s.find('.') == std::string::npos) s += '.';
  int have = frac_digits(s);
  if (have < frac_width) s += std::string(frac_width - have, '0');
  return s;
}

std::vector<std::string> format_delta_column(unsigned n, const std::vector<mpq_class>& deltas) {
  int width = 0;
  for (const auto& d : deltas) width = std::max(width, frac_digits(g15(delta_double(n, d))));
  std::vector<std::string> out;
  out.reserve(deltas.size());
  for (const auto& d : deltas) out.push_back(format_delta(n, d, width));
  return out;
}

std::string format_sci(const mpz_class& v) {
  if (v == 0) return "0.000e0";
  mpz_class a = abs(v);
  std::string digits = a.get_str();
  int exp = static_cast<int>(digits.size()) - 1;
  digits.resize(4, '0');  // truncate, never round: matches the table text
  std::string out = v < 0 ? "-" : "";
  out += digits[0];
  out += '.';
  out += digits.substr(1);
  out += 'e';
  out += std::to_string(exp);
  return out;
}

std::string cases_to_csv(const std::vector<SieveCase>& cases) {
  std::ostringstream os;
  os << "n,omega,s,delta,delta_exact,lower,upper,eliminated\n";
  std::vector<mpq_class> ds;
  for (const auto& c : cases) ds.push_back(c.delta);
  auto dstr = format_delta_column(cases.empty() ? 4 : cases[0].n, ds);
  for (size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    os << c.n << ',' << c.omega << ',' << c.s << ',' << dstr[i] << ','
       << c.delta.get_str() << ',' << c.lower.get_str() << ',' << c.upper.get_str()
       << ',' << (c.eliminated ? 1 : 0) << '\n';
  }
  return os.str();
}

namespace {

std::string join_u64(const std::vector<std::uint64_t>& v, char sep = ' ') {
  std::string s;
  for (auto x : v) {
    if (!s.empty()) s += sep;
    s += std::to_string(x);
  }
  return s;
}

nlohmann::json branch_to_json(const TreeBranch& b) {
  nlohmann::json j;
  j["n"] = b.derived.n;
  j["omega"] = b.derived.omega;
  j["level"] = b.level;
  j["asserted"] = b.asserted;
  j["excluded"] = b.excluded;
  j["s"] = b.derived.s;
  j["delta"] = b.derived.delta.get_str();
  j["lower"] = b.hunt_lower.get_str();
  j["upper"] = b.hunt_upper.get_str();
  j["D"] = b.D.get_str();
  j["eliminated"] = !b.surviving;
  return j;
}

}  // namespace

std::string branches_to_csv(const std::vector<TreeBranch>& branches) {
  std::ostringstream os;
  os << "n,omega,s,delta,lower,upper,eliminated,level,asserted,excluded,D\n";
  for (const auto& b : branches) {
    os << b.derived.n << ',' << b.derived.omega << ',' << b.derived.s << ','
       << b.derived.delta.get_str() << ',' << b.hunt_lower.get_str() << ','
       << b.hunt_upper.get_str() << ',' << (b.surviving ? 0 : 1) << ',' << b.level
       << ',' << join_u64(b.asserted) << ',' << join_u64(b.excluded) << ','
       << b.D.get_str() << '\n';
  }
  return os.str();
}

std::string branches_to_json(const std::vector<TreeBranch>& branches) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& b : branches) arr.push_back(branch_to_json(b));
  return arr.dump(2);
}

}  // namespace primrun::sieve
