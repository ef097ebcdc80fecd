#include "primrun/runs.hpp"

#include <vector>

#include <json.hpp>

namespace primrun::runs {

using gfq::FieldSpec;
using gfq::Poly;
using nlohmann::json;

namespace {

bool fits_u64(const mpz_class& v) { return mpz_sizeinbase(v.get_mpz_t(), 2) <= 63; }

// Primitivity of residue a in a prime field with q < 2^63 (no mpz traffic).
bool prim_u64(std::uint64_t a, std::uint64_t q, const std::vector<std::uint64_t>& exps) {
  for (auto e : exps) {
    if (arith::mod_pow_u64(a, e, q) == 1) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_field_exps_u64(const FieldSpec& fld) {
  std::vector<std::uint64_t> exps;
  exps.reserve(fld.q_minus_1.factors.size());
  for (const auto& [pi, e] : fld.q_minus_1.factors)
    exps.push_back(mpz_class((fld.q - 1) / pi).get_ui());
  return exps;
}

RunReport make_report(const FieldSpec& fld, const mpz_class& start_residue,
                      const Poly& start, unsigned length, Strategy strat) {
  RunReport r;
  r.field = fld;
  r.start = start;
  r.start_residue = start_residue;
  r.length = length;
  r.strategy = strat;
  return r;
}

FindResult find_run_prime(const FieldSpec& fld, unsigned length, const FindOptions& opts) {
  mpz_class budget = opts.budget;
  bool exhaustive = fld.q <= 10000000;
  if (budget == 0) budget = exhaustive ? fld.q - 1 : mpz_class(1000000);

  mpz_class tested = 0;
  unsigned streak = 0;
  if (fits_u64(fld.q)) {
    std::uint64_t q = fld.q.get_ui();
    auto exps = prime_field_exps_u64(fld);
    for (std::uint64_t a = 2; a < q; ++a) {
      if (tested >= budget) return {RunStatus::BudgetExhausted, {}};
      tested += 1;
      streak = prim_u64(a, q, exps) ? streak + 1 : 0;
      if (streak >= length) {
        mpz_class start(static_cast<unsigned long>(a - length + 1));
        return {RunStatus::Found,
                make_report(fld, start, {}, length, Strategy::SequentialScan)};
      }
    }
    return {RunStatus::ProvenAbsent, {}};
  }

  mpz_class a = 2;
  while (a < fld.q) {
    if (tested >= budget) return {RunStatus::BudgetExhausted, {}};
    tested += 1;
    streak = gfq::is_primitive(a, fld) ? streak + 1 : 0;
    if (streak >= length) {
      return {RunStatus::Found,
              make_report(fld, a - length + 1, {}, length, Strategy::SequentialScan)};
    }
    a += 1;
  }
  return {RunStatus::ProvenAbsent, {}};
}

// Row = the coefficients above the constant term; scanning rows in
// ascending encoded order matches the canonical element order.
FindResult find_run_ext(const FieldSpec& fld, unsigned length, const FindOptions& opts) {
  std::uint64_t p = fld.p_u64();
  mpz_class rows = fld.q / fld.p;  // p^(deg-1)
  mpz_class budget = opts.budget;
  if (budget == 0) budget = fld.q <= 10000000 ? fld.q - 1 : mpz_class(1000000);

  mpz_class tested = 0;
  std::vector<char> flag(p);
  Poly elem(fld.deg, 0);
  for (mpz_class row = 0; row < rows; ++row) {
    Poly rest = gfq::gf_decode(fld, row);  // digits of the row index
    for (unsigned i = 1; i < fld.deg; ++i) elem[i] = rest[i - 1];
    for (std::uint64_t c = 0; c < p; ++c) {
      elem[0] = c;
      flag[c] = !gfq::gf_is_zero(elem) && gfq::is_primitive(elem, fld);
    }
    std::uint64_t last_start = opts.wrap ? p - 1 : p - length;
    for (std::uint64_t c = 0; c <= last_start; ++c) {
      if (tested >= budget) return {RunStatus::BudgetExhausted, {}};
      tested += 1;
      bool ok = true;
      for (unsigned i = 0; i < length && ok; ++i) ok = flag[(c + i) % p];
      if (ok) {
        elem[0] = c;
        return {RunStatus::Found, make_report(fld, 0, elem, length, Strategy::SequentialScan)};
      }
    }
  }
  return {RunStatus::ProvenAbsent, {}};
}

// Algorithm-4 style cross-check: enumerate the primitive elements as
// generator powers first, then look for runs in the canonical order.
FindResult find_run_genpower(const FieldSpec& fld, unsigned length, const FindOptions& opts) {
  if (fld.q > 10000000)
    throw std::invalid_argument("generator-power strategy limited to q <= 1e7");
  std::uint64_t q = fld.q.get_ui();
  std::vector<char> prim(q, 0);

  // locate a generator in canonical order
  std::uint64_t gen_v = 0;
  for (std::uint64_t v = 1; v < q; ++v) {
    if (fld.is_prime_field() ? gfq::is_primitive(mpz_class(static_cast<unsigned long>(v)), fld)
                             : gfq::is_primitive(gfq::gf_decode(fld, v), fld)) {
      gen_v = v;
      break;
    }
  }
  if (gen_v == 0) return {RunStatus::ProvenAbsent, {}};

  Poly gen = fld.is_prime_field() ? Poly{gen_v} : gfq::gf_decode(fld, gen_v);
  gfq::PowerEnumerator en(fld, gen);
  while (auto e = en.next()) {
    std::uint64_t v = gfq::gf_encode(fld, *e).get_ui();
    prim[v] = 1;
  }

  if (fld.is_prime_field()) {
    for (std::uint64_t a = 1; a + length - 1 < q; ++a) {
      bool ok = true;
      for (unsigned i = 0; i < length && ok; ++i) ok = prim[a + i];
      if (ok)
        return {RunStatus::Found,
                make_report(fld, mpz_class(static_cast<unsigned long>(a)), {}, length,
                            Strategy::GeneratorPower)};
    }
    return {RunStatus::ProvenAbsent, {}};
  }
  std::uint64_t p = fld.p_u64();
  for (std::uint64_t v = 1; v < q; ++v) {
    std::uint64_t c = v % p;
    if (!opts.wrap && c + length - 1 > p - 1) continue;
    bool ok = true;
    for (unsigned i = 0; i < length && ok; ++i)
      ok = prim[v - c + (c + i) % p];
    if (ok)
      return {RunStatus::Found,
              make_report(fld, 0, gfq::gf_decode(fld, v), length, Strategy::GeneratorPower)};
  }
  return {RunStatus::ProvenAbsent, {}};
}

}  // namespace

FindResult find_run(const FieldSpec& fld, unsigned length, const FindOptions& opts) {
  if (length < 2) throw std::invalid_argument("run length must be >= 2");
  if (!fld.is_prime_field() && mpz_class(static_cast<unsigned long>(length)) > fld.p)
    throw std::invalid_argument("run length exceeds p: adding 1 cycles with period p");
  if (opts.strategy == Strategy::GeneratorPower) return find_run_genpower(fld, length, opts);
  return fld.is_prime_field() ? find_run_prime(fld, length, opts)
                              : find_run_ext(fld, length, opts);
}

bool verify_run(const RunReport& report, int* failed_index) {
  auto fail = [&](int i) {
    if (failed_index) *failed_index = i;
    return false;
  };
  const FieldSpec& fld = report.field;
  if (report.length < 1) throw BadCertificate(-1, "empty run");
  mpz_class q_expect;
  mpz_pow_ui(q_expect.get_mpz_t(), fld.p.get_mpz_t(), fld.deg);
  if (q_expect != fld.q || !arith::is_prime(fld.p))
    throw BadCertificate(-1, "field description inconsistent");
  if (fld.q_minus_1.value != fld.q - 1 || !fld.q_minus_1.consistent())
    throw BadCertificate(-1, "q-1 factorization invalid");

  if (fld.is_prime_field()) {
    if (report.start_residue + report.length - 1 > fld.q - 1) return fail(0);
    for (unsigned i = 0; i < report.length; ++i) {
      mpz_class a = report.start_residue + i;
      if (a == 0) return fail(static_cast<int>(i));
      if (!gfq::is_primitive(a, fld)) return fail(static_cast<int>(i));
    }
    return true;
  }

  if (!gfq::poly_is_primitive(fld.modulus, fld.p_u64(), fld.q_minus_1))
    throw BadCertificate(-1, "modulus not primitive");
  Poly elem = report.start;
  if (elem.size() != fld.deg) throw BadCertificate(-1, "element size mismatch");
  for (unsigned i = 0; i < report.length; ++i) {
    if (i > 0) gfq::gf_successor(fld, elem, /*wrap=*/true);
    if (gfq::gf_is_zero(elem)) return fail(static_cast<int>(i));
    if (!gfq::is_primitive(elem, fld)) return fail(static_cast<int>(i));
  }
  return true;
}

mpz_class census(const FieldSpec& fld, unsigned length, bool wrap,
                 const mpz_class& exhaustive_bound) {
  if (fld.q > exhaustive_bound)
    throw FieldTooLarge("census bound exceeded for q = " + fld.q.get_str());
  mpz_class count = 0;
  if (fld.is_prime_field()) {
    std::uint64_t q = fld.q.get_ui();
    auto exps = prime_field_exps_u64(fld);
    std::vector<char> prim(q, 0);
    for (std::uint64_t a = 1; a < q; ++a) prim[a] = prim_u64(a, q, exps);
    for (std::uint64_t a = 1; a + length - 1 < q; ++a) {
      bool ok = true;
      for (unsigned i = 0; i < length && ok; ++i) ok = prim[a + i];
      if (ok) count += 1;
    }
    return count;
  }
  std::uint64_t p = fld.p_u64();
  if (!wrap && length > p) return 0;
  mpz_class rows = fld.q / fld.p;
  std::vector<char> flag(p);
  Poly elem(fld.deg, 0);
  for (mpz_class row = 0; row < rows; ++row) {
    Poly rest = gfq::gf_decode(fld, row);
    for (unsigned i = 1; i < fld.deg; ++i) elem[i] = rest[i - 1];
    for (std::uint64_t c = 0; c < p; ++c) {
      elem[0] = c;
      flag[c] = !gfq::gf_is_zero(elem) && gfq::is_primitive(elem, fld);
    }
    std::uint64_t last_start = wrap ? p - 1 : p - length;
    for (std::uint64_t c = 0; c <= last_start; ++c) {
      bool ok = true;
      for (unsigned i = 0; i < length && ok; ++i) ok = flag[(c + i) % p];
      if (ok) count += 1;
    }
  }
  return count;
}

const char* strategy_name(Strategy s) {
  return s == Strategy::SequentialScan ? "sequential-scan" : "generator-power";
}

std::string RunReport::to_json() const {
  json j;
  j["q"] = field.q.get_str();
  j["p"] = field.p.get_str();
  j["n"] = field.deg;
  if (field.deg >= 2) j["modulus"] = field.modulus;
  if (field.deg == 1)
    j["start"] = start_residue.get_str();
  else
    j["start"] = start;
  j["length"] = length;
  json fac = json::array();
  for (const auto& [p, e] : field.q_minus_1.factors)
    fac.push_back(json::array({p.get_str(), e}));
  j["factors"] = fac;
  j["strategy"] = strategy_name(strategy);
  return j.dump();
}

RunReport RunReport::from_json(const std::string& text) {
  json j = json::parse(text);
  RunReport r;
  r.field.p = mpz_class(j.at("p").get<std::string>());
  r.field.deg = j.at("n").get<unsigned>();
  r.field.q = mpz_class(j.at("q").get<std::string>());
  if (r.field.deg >= 2) r.field.modulus = j.at("modulus").get<Poly>();
  r.field.q_minus_1.value = r.field.q - 1;
  for (const auto& pe : j.at("factors"))
    r.field.q_minus_1.factors.emplace_back(mpz_class(pe.at(0).get<std::string>()),
                                           pe.at(1).get<unsigned>());
  if (r.field.deg == 1)
    r.start_residue = mpz_class(j.at("start").get<std::string>());
  else
    r.start = j.at("start").get<Poly>();
  r.length = j.at("length").get<unsigned>();
  r.strategy = j.at("strategy").get<std::string>() == "generator-power"
                   ? Strategy::GeneratorPower
                   : Strategy::SequentialScan;
  return r;
}

}  // namespace primrun::runs
