#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "primrun/runs.hpp"

namespace primrun::hunt {

struct EmptyInterval : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CorruptCheckpoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CheckpointWriteFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Search job: candidates q = D*m + 1 with D*m in (lower, upper], filtered
// by primality and omega(q-1) = omega_target, then certified with a run
// of run_length consecutive primitive elements.
struct HuntJob {
  unsigned run_length = 4;
  unsigned omega_target = 0;
  mpz_class D;
  arith::Factorization D_factors;  // full prime factorization of D
  mpz_class lower;                 // exclusive, on D*m
  mpz_class upper;                 // inclusive, on D*m
  unsigned workers = 1;
  std::uint64_t chunk_size = 1 << 16;
  std::string checkpoint_path;     // empty: keep results in memory only
  mpz_class run_budget = 1000000;  // starts tried per prime before deferring
  mpz_class stop_after_m = 0;      // testing hook: stop issuing chunks past this m

  std::string hash() const;  // identifies the work, not the execution knobs
};

struct PrimeHit {
  mpz_class m;
  mpz_class q;
  runs::RunReport certificate;
  bool run_found = false;
};

struct DeferredCandidate {
  mpz_class m;
  mpz_class q;
  std::string reason;
};

struct HuntCheckpoint {
  std::string job_hash;
  mpz_class last_completed_m;
  mpz_class candidates_tested;
  std::vector<PrimeHit> primes;
  std::vector<DeferredCandidate> deferred;
  bool final_record = false;
  double wall_clock_seconds = 0;  // omitted from the final record

  std::string to_json() const;
  static HuntCheckpoint from_json(const std::string& line);
};

// Inclusive m-range of the candidates: smallest/largest m with
// D*m in (lower, upper]. Throws EmptyInterval when there is none.
std::pair<mpz_class, mpz_class> m_range(const mpz_class& D, const mpz_class& lower,
                                        const mpz_class& upper);

// Materialized candidate list (m, q = D*m + 1), ascending. Small jobs only.
std::vector<std::pair<mpz_class, mpz_class>> candidate_stream(const mpz_class& D,
                                                              const mpz_class& lower,
                                                              const mpz_class& upper);

// Runs the job to completion (or to stop_after_m), checkpointing after
// every contiguous chunk. Output is deterministic in the job parameters:
// independent of worker count and of interrupt/resume splits.
HuntCheckpoint run_hunt(const HuntJob& job);

// Continues a checkpointed job. The file's records must carry job.hash();
// otherwise CorruptCheckpoint. A final record returns immediately.
HuntCheckpoint resume(const HuntJob& job);

// Results export: one row per prime (q, m, omega, run_start, run_length).
std::string results_to_csv(const HuntCheckpoint& cp, unsigned omega_target);

}  // namespace primrun::hunt
