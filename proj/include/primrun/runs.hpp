#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "primrun/gfq.hpp"

namespace primrun::runs {

enum class Strategy { SequentialScan, GeneratorPower };

// Certificate for a verified run of `length` consecutive primitive
// elements. Serializes to JSON; verify_run() re-checks it from scratch.
struct RunReport {
  gfq::FieldSpec field;
  gfq::Poly start;     // length-1 residue digits for a prime field (see start_residue)
  mpz_class start_residue;  // used when field.deg == 1 (q may exceed 2^64)
  unsigned length = 0;
  Strategy strategy = Strategy::SequentialScan;

  std::string to_json() const;
  static RunReport from_json(const std::string& text);
};

enum class RunStatus { Found, ProvenAbsent, BudgetExhausted };

struct FindOptions {
  mpz_class budget = 0;  // max starting positions to try; 0 = default rule
  Strategy strategy = Strategy::SequentialScan;
  bool wrap = false;     // cyclic successor in extension fields
};

struct FindResult {
  RunStatus status = RunStatus::ProvenAbsent;
  std::optional<RunReport> report;
};

// Scans starting elements in the canonical order (2, 3, ... for prime
// fields; ascending integer encoding for extension fields) and returns
// the first certified run of the requested length.
FindResult find_run(const gfq::FieldSpec& fld, unsigned length,
                    const FindOptions& opts = {});

struct BadCertificate : std::runtime_error {
  int index;  // first failing element, -1 for a malformed report
  BadCertificate(int idx, const std::string& what)
      : std::runtime_error(what), index(idx) {}
};

// Re-derives everything the certificate claims: the factorization of
// q-1 is validated, then each of the run's elements is re-tested.
// Returns false (with *failed_index set) on a non-primitive element.
bool verify_run(const RunReport& report, int* failed_index = nullptr);

struct FieldTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact count of starting positions of runs of the given length.
// Exhaustive; guarded by `exhaustive_bound` on q.
mpz_class census(const gfq::FieldSpec& fld, unsigned length, bool wrap = false,
                 const mpz_class& exhaustive_bound = 1000000);

const char* strategy_name(Strategy s);

}  // namespace primrun::runs
