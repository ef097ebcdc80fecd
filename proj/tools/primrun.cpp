#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "primrun/hunt.hpp"
#include "primrun/sieve.hpp"

using nlohmann::json;
using namespace primrun;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<unsigned, unsigned> parse_range(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) {
    unsigned v = static_cast<unsigned>(std::stoul(text));
    return {v, v};
  }
  return {static_cast<unsigned>(std::stoul(text.substr(0, colon))),
          static_cast<unsigned>(std::stoul(text.substr(colon + 1)))};
}

std::pair<mpz_class, mpz_class> parse_interval(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--interval expects LOW:HIGH");
  return {mpz_class(text.substr(0, colon)), mpz_class(text.substr(colon + 1))};
}

std::string default_checkpoint_dir() {
  const char* env = std::getenv("PRIMRUN_CHECKPOINT_DIR");
  return env ? env : ".";
}

int cmd_bounds(unsigned n, const std::string& omega_range, const std::string& format) {
  auto [lo, hi] = parse_range(omega_range);
  auto cases = sieve::scan_cases(n, lo, hi);
  if (format == "csv") {
    std::cout << sieve::cases_to_csv(cases);
    return 0;
  }
  std::vector<mpq_class> ds;
  for (const auto& c : cases) ds.push_back(c.delta);
  auto dstr = sieve::format_delta_column(n, ds);
  if (format == "json") {
    json arr = json::array();
    for (size_t i = 0; i < cases.size(); ++i) {
      const auto& c = cases[i];
      arr.push_back({{"n", c.n},
                     {"omega", c.omega},
                     {"s", c.s},
                     {"delta", dstr[i]},
                     {"delta_exact", c.delta.get_str()},
                     {"lower", c.lower.get_str()},
                     {"upper", c.upper.get_str()},
                     {"eliminated", c.eliminated}});
    }
    std::cout << arr.dump(2) << '\n';
    return 0;
  }
  std::printf("%5s %3s %-22s %-12s %-12s %s\n", "omega", "s", "delta", "lower", "upper",
              "eliminated");
  for (size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    std::printf("%5u %3u %-22s %-12s %-12s %s\n", c.omega, c.s, dstr[i].c_str(),
                sieve::format_sci(c.lower).c_str(), sieve::format_sci(c.upper).c_str(),
                c.eliminated ? "yes" : "no");
  }
  return 0;
}

int cmd_tree(unsigned n, unsigned omega, unsigned level, const std::string& format) {
  auto branches = sieve::divisor_tree(n, omega, level);
  if (format == "csv") {
    std::cout << sieve::branches_to_csv(branches);
  } else if (format == "json") {
    std::cout << sieve::branches_to_json(branches) << '\n';
  } else {
    std::printf("%-12s %-12s %-3s %-12s %-12s %-10s %s\n", "asserted", "excluded", "s",
                "lower", "upper", "surviving", "D");
    for (const auto& b : branches) {
      std::string a, e;
      for (auto p : b.asserted) a += (a.empty() ? "" : " ") + std::to_string(p);
      for (auto p : b.excluded) e += (e.empty() ? "" : " ") + std::to_string(p);
      std::printf("%-12s %-12s %-3u %-12s %-12s %-10s %s\n", a.c_str(), e.c_str(),
                  b.derived.s, sieve::format_sci(b.hunt_lower).c_str(),
                  sieve::format_sci(b.hunt_upper).c_str(), b.surviving ? "yes" : "no",
                  b.surviving ? b.D.get_str().c_str() : "-");
    }
  }
  bool any = false;
  for (const auto& b : branches) any = any || b.surviving;
  return any ? 0 : 1;
}

int cmd_hunt(unsigned n, unsigned omega, const std::string& D_text,
             const std::string& interval_text, unsigned workers,
             std::string checkpoint, bool do_resume, const std::string& format,
             const mpz_class& budget) {
  hunt::HuntJob job;
  job.run_length = n;
  job.omega_target = omega;
  job.workers = workers;
  job.run_budget = budget;

  sieve::SieveCase base = sieve::best_case(n, arith::first_primes(omega));
  job.D = D_text.empty() ? arith::primorial(omega) : mpz_class(D_text);
  job.D_factors = arith::factorize(job.D);
  if (interval_text.empty()) {
    job.lower = base.lower;
    job.upper = base.upper;
  } else {
    std::tie(job.lower, job.upper) = parse_interval(interval_text);
  }
  if (checkpoint.empty())
    checkpoint = default_checkpoint_dir() + "/hunt-" + job.hash() + ".jsonl";
  job.checkpoint_path = checkpoint;

  hunt::HuntCheckpoint cp = do_resume ? hunt::resume(job) : hunt::run_hunt(job);
  if (format == "json") {
    std::cout << cp.to_json() << '\n';
  } else if (format == "csv") {
    std::cout << hunt::results_to_csv(cp, omega);
  } else {
    std::printf("candidates tested: %s\nprimes found: %zu\ndeferred: %zu\n",
                cp.candidates_tested.get_str().c_str(), cp.primes.size(),
                cp.deferred.size());
    for (const auto& h : cp.primes) {
      std::printf("  m=%s q=%s", h.m.get_str().c_str(), h.q.get_str().c_str());
      if (h.run_found)
        std::printf(" run start %s length %u", h.certificate.start_residue.get_str().c_str(),
                    h.certificate.length);
      std::printf("\n");
    }
  }
  return cp.primes.empty() ? 1 : 0;
}

int cmd_verify_theorem(unsigned n, const mpz_class& qmax, const std::string& format) {
  std::vector<mpz_class> exceptions;
  // prime powers q <= qmax with gcd(q, 6) = 1, smallest first
  for (mpz_class q = 5; q <= qmax; q += 2) {
    if (mpz_divisible_ui_p(q.get_mpz_t(), 3)) continue;
    mpz_class p;
    unsigned deg = 0;
    if (arith::is_prime(q)) {
      p = q;
      deg = 1;
    } else if (mpz_perfect_power_p(q.get_mpz_t())) {
      auto fac = arith::factorize(q);
      if (fac.omega() != 1) continue;
      p = fac.factors[0].first;
      deg = fac.factors[0].second;
    } else {
      continue;
    }
    mpz_class count;
    if (deg == 1) {
      count = runs::census(gfq::make_prime_field(p), n, /*wrap=*/true, qmax);
    } else {
      auto mod = gfq::find_primitive_polynomial(p.get_ui(), deg, /*seed=*/0);
      auto fld = gfq::make_extension_field(p.get_ui(), deg, mod);
      count = runs::census(fld, n, /*wrap=*/true, qmax);
    }
    if (count == 0) exceptions.push_back(q);
  }
  if (format == "json") {
    json arr = json::array();
    for (const auto& q : exceptions) arr.push_back(q.get_str());
    std::cout << arr.dump() << '\n';
  } else {
    for (const auto& q : exceptions) std::cout << q.get_str() << '\n';
  }
  return 0;
}

int cmd_field_run(const std::string& p_text, unsigned deg, unsigned n,
                  const std::string& modulus_text, std::uint64_t seed,
                  const mpz_class& budget, const std::string& format) {
  mpz_class p(p_text);
  gfq::FieldSpec fld;
  if (deg == 1) {
    fld = gfq::make_prime_field(p);
  } else {
    std::uint64_t pu = p.get_ui();
    gfq::Poly mod = modulus_text.empty() ? gfq::find_primitive_polynomial(pu, deg, seed)
                                         : gfq::poly_from_string(modulus_text, pu);
    fld = gfq::make_extension_field(pu, deg, mod);
  }
  runs::FindOptions opts;
  opts.budget = budget;
  auto res = runs::find_run(fld, n, opts);
  if (res.status != runs::RunStatus::Found) {
    std::cerr << (res.status == runs::RunStatus::ProvenAbsent ? "no run exists\n"
                                                              : "budget exhausted\n");
    return 1;
  }
  const auto& rep = *res.report;
  if (format == "json") {
    std::cout << rep.to_json() << '\n';
    return 0;
  }
  if (deg >= 2) std::cout << "modulus: " << gfq::poly_to_string(fld.modulus) << '\n';
  gfq::Poly elem = rep.start;
  for (unsigned i = 0; i < rep.length; ++i) {
    if (deg == 1) {
      std::cout << mpz_class(rep.start_residue + i).get_str() << '\n';
    } else {
      std::cout << gfq::element_to_string(elem) << '\n';
      if (i + 1 < rep.length) gfq::gf_successor(fld, elem, /*wrap=*/true);
    }
  }
  return 0;
}

int cmd_factor(const std::string& value, const std::string& format) {
  auto fac = arith::factorize(mpz_class(value));
  if (format == "json") {
    json arr = json::array();
    for (const auto& [p, e] : fac.factors) arr.push_back({p.get_str(), e});
    std::cout << json{{"value", fac.value.get_str()}, {"factors", arr}}.dump() << '\n';
    return 0;
  }
  std::string out;
  for (const auto& [p, e] : fac.factors) {
    if (!out.empty()) out += " * ";
    out += p.get_str();
    if (e > 1) out += "^" + std::to_string(e);
  }
  std::cout << (out.empty() ? "1" : out) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"search for runs of consecutive primitive elements in finite fields"};
  app.require_subcommand(1);

  unsigned n = 4, omega = 0, level = 0, deg = 1, workers = 1;
  std::string omega_range, format = "table", D_text, interval_text, checkpoint;
  std::string p_text, modulus_text, value, budget_text = "1000000", qmax_text = "2401";
  std::uint64_t seed = 0;
  bool do_resume = false;

  auto* bounds = app.add_subcommand("bounds", "sieving bound table per omega");
  bounds->add_option("--n", n, "run length");
  bounds->add_option("--omega", omega_range, "omega value or LO:HI range")->required();
  bounds->add_option("--format", format)->check(CLI::IsMember({"table", "csv", "json"}));

  auto* tree = app.add_subcommand("tree", "prime divisor tree branches");
  tree->add_option("--n", n, "run length");
  tree->add_option("--omega", omega, "omega(q-1) hypothesis")->required();
  tree->add_option("--level", level, "tree depth (smallest odd primes)");
  tree->add_option("--format", format)->check(CLI::IsMember({"table", "csv", "json"}));

  auto* hunt_cmd = app.add_subcommand("hunt", "search q = D*m + 1 for certified runs");
  hunt_cmd->add_option("--n", n, "run length");
  hunt_cmd->add_option("--omega", omega, "target omega(q-1)")->required();
  hunt_cmd->add_option("--D", D_text, "forced divisor (default: primorial(omega))");
  hunt_cmd->add_option("--interval", interval_text, "LOW:HIGH bounds on D*m");
  hunt_cmd->add_option("--workers", workers, "worker threads");
  hunt_cmd->add_option("--checkpoint", checkpoint, "checkpoint file path");
  hunt_cmd->add_flag("--resume", do_resume, "continue from the checkpoint");
  hunt_cmd->add_option("--budget", budget_text, "run-search start budget per prime");
  hunt_cmd->add_option("--format", format)->check(CLI::IsMember({"table", "csv", "json"}));

  auto* verify = app.add_subcommand("verify-theorem", "census all q <= qmax coprime to 6");
  verify->add_option("--n", n, "run length");
  verify->add_option("--qmax", qmax_text, "largest prime power to test");
  verify->add_option("--format", format)->check(CLI::IsMember({"table", "csv", "json"}));

  auto* field = app.add_subcommand("field-run", "first run in one explicit field");
  field->add_option("--p", p_text, "field characteristic")->required();
  field->add_option("--deg", deg, "extension degree");
  field->add_option("--n", n, "run length");
  field->add_option("--modulus", modulus_text, "defining polynomial, e.g. 'x^2 + 24x + 2'");
  field->add_option("--seed", seed, "primitive polynomial search seed");
  field->add_option("--budget", budget_text, "starting positions to try");
  field->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));

  auto* factor = app.add_subcommand("factor", "factor an integer");
  factor->add_option("value", value, "integer to factor")->required();
  factor->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_name() == "CallForHelp" ? 0 : 2;
  }

  try {
    if (bounds->parsed()) return cmd_bounds(n, omega_range, format);
    if (tree->parsed()) return cmd_tree(n, omega, level, format);
    if (hunt_cmd->parsed())
      return cmd_hunt(n, omega, D_text, interval_text, workers, checkpoint, do_resume,
                      format, mpz_class(budget_text));
    if (verify->parsed()) return cmd_verify_theorem(n, mpz_class(qmax_text), format);
    if (field->parsed())
      return cmd_field_run(p_text, deg, n, modulus_text, seed, mpz_class(budget_text),
                           format);
    if (factor->parsed()) return cmd_factor(value, format);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
