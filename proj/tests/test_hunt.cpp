#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "primrun/hunt.hpp"

using namespace primrun;
using namespace primrun::hunt;

namespace {

std::string temp_path(const std::string& tag) {
  static int counter = 0;
  return std::string("hunt-test-") + tag + "-" + std::to_string(counter++) + ".jsonl";
}

// The small end-to-end job: q = 6m + 1 with omega(q-1) = 2, i.e. q - 1 a
// product of powers of 2 and 3 only, searched for two consecutive
// primitive elements.
HuntJob tiny_job(unsigned workers = 1, std::uint64_t chunk = 1 << 16) {
  HuntJob job;
  job.run_length = 2;
  job.omega_target = 2;
  job.D = 6;
  job.D_factors = arith::factorize(mpz_class(6));
  job.lower = 6;
  job.upper = 6000;
  job.workers = workers;
  job.chunk_size = chunk;
  return job;
}

std::string final_line(const std::string& path) {
  std::ifstream in(path);
  std::string line, last;
  while (std::getline(in, line))
    if (!line.empty()) last = line;
  return last;
}

}  // namespace

TEST_SUITE("hunt") {

TEST_CASE("candidate stream enumerates multiples of D in (lower, upper]") {
  auto c = candidate_stream(6, 6, 30);
  REQUIRE(c.size() == 4);
  CHECK(c[0] == std::pair<mpz_class, mpz_class>{2, 13});
  CHECK(c[1].second == 19);
  CHECK(c[2].second == 25);
  CHECK(c[3].second == 31);  // 6*5 = 30 is included: inclusive upper bound

  CHECK_THROWS_AS(candidate_stream(10, 10, 19), EmptyInterval);

  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    unsigned long D = 2 + rng() % 50;
    unsigned long lo = rng() % 1000;
    unsigned long hi = lo + rng() % 1000;
    std::vector<unsigned long> brute;
    for (unsigned long v = lo + 1; v <= hi; ++v)
      if (v % D == 0) brute.push_back(v / D);
    try {
      auto got = candidate_stream(D, lo, hi);
      REQUIRE(got.size() == brute.size());
      for (size_t k = 0; k < brute.size(); ++k) {
        CHECK(got[k].first == brute[k]);
        CHECK(got[k].second == D * brute[k] + 1);
      }
    } catch (const EmptyInterval&) {
      CHECK(brute.empty());
    }
  }
}

TEST_CASE("a small hunt matches direct enumeration") {
  HuntJob job = tiny_job();
  HuntCheckpoint cp = run_hunt(job);

  std::vector<mpz_class> brute;
  for (auto& [m, q] : candidate_stream(job.D, job.lower, job.upper)) {
    if (!arith::is_prime(q)) continue;
    if (arith::omega(q - 1) == 2) brute.push_back(q);
  }
  CHECK(cp.candidates_tested == 999);
  REQUIRE(cp.primes.size() == brute.size());
  for (size_t i = 0; i < brute.size(); ++i) {
    CHECK(cp.primes[i].q == brute[i]);
    CHECK(cp.primes[i].run_found);
    CHECK(runs::verify_run(cp.primes[i].certificate));
    CHECK((cp.primes[i].q - 1) % job.D == 0);
  }
  CHECK(cp.final_record);
}

TEST_CASE("the final record is identical for 1, 2 and 8 workers") {
  std::string ref;
  for (unsigned workers : {1u, 2u, 8u}) {
    HuntJob job = tiny_job(workers, 16);  // many small chunks
    job.checkpoint_path = temp_path("workers");
    HuntCheckpoint cp = run_hunt(job);
    std::string line = final_line(job.checkpoint_path);
    CHECK(line == cp.to_json());
    if (ref.empty())
      ref = line;
    else
      CHECK(line == ref);
    std::remove(job.checkpoint_path.c_str());
  }
}

TEST_CASE("interrupt and resume reproduce the uninterrupted run") {
  HuntJob ref_job = tiny_job(2, 16);
  ref_job.checkpoint_path = temp_path("ref");
  std::string ref = run_hunt(ref_job).to_json();
  std::remove(ref_job.checkpoint_path.c_str());

  HuntJob job = tiny_job(2, 16);
  job.checkpoint_path = temp_path("resume");
  job.stop_after_m = 400;  // stop roughly mid-range
  HuntCheckpoint partial = run_hunt(job);
  CHECK(!partial.final_record);
  CHECK(partial.last_completed_m < 999);

  HuntJob cont = tiny_job(2, 16);
  cont.checkpoint_path = job.checkpoint_path;
  HuntCheckpoint done = resume(cont);
  CHECK(done.final_record);
  CHECK(done.to_json() == ref);
  CHECK(final_line(job.checkpoint_path) == ref);

  // resuming a completed job does no further work
  HuntCheckpoint again = resume(cont);
  CHECK(again.to_json() == ref);
  std::remove(job.checkpoint_path.c_str());
}

TEST_CASE("checkpoints guard against parameter drift and corruption") {
  HuntJob job = tiny_job();
  job.checkpoint_path = temp_path("guard");
  run_hunt(job);

  HuntJob other = job;
  other.omega_target = 3;
  CHECK_THROWS_AS(resume(other), CorruptCheckpoint);

  std::ofstream(job.checkpoint_path, std::ios::app) << "{not json\n";
  CHECK_THROWS_AS(resume(job), CorruptCheckpoint);
  std::remove(job.checkpoint_path.c_str());

  HuntJob missing = tiny_job();
  missing.checkpoint_path = "does-not-exist.jsonl";
  CHECK_THROWS_AS(resume(missing), CorruptCheckpoint);
}

TEST_CASE("checkpoint records round-trip through JSON") {
  HuntJob job = tiny_job();
  HuntCheckpoint cp = run_hunt(job);
  HuntCheckpoint back = HuntCheckpoint::from_json(cp.to_json());
  CHECK(back.to_json() == cp.to_json());
  CHECK(back.primes.size() == cp.primes.size());
  for (const auto& h : back.primes)
    if (h.run_found) CHECK(runs::verify_run(h.certificate));
}

TEST_CASE("results export lists one row per prime") {
  HuntCheckpoint cp = run_hunt(tiny_job());
  std::string csv = results_to_csv(cp, 2);
  CHECK(csv.find("q,m,omega,run_start,run_length") == 0);
  size_t rows = 0;
  for (char ch : csv)
    if (ch == '\n') ++rows;
  CHECK(rows == cp.primes.size() + 1);
  CHECK(csv.find("13,2,2,") != std::string::npos);
}

}  // TEST_SUITE
