#include "primrun/hunt.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace primrun::hunt {

using nlohmann::json;

namespace {

// FNV-1a over the job's work-defining parameters (stable across runs,
// unlike std::hash).
std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json hit_to_json(const PrimeHit& h) {
  json j;
  j["m"] = h.m.get_str();
  j["q"] = h.q.get_str();
  j["run_found"] = h.run_found;
  if (h.run_found) j["certificate"] = json::parse(h.certificate.to_json());
  return j;
}

PrimeHit hit_from_json(const json& j) {
  PrimeHit h;
  h.m = mpz_class(j.at("m").get<std::string>());
  h.q = mpz_class(j.at("q").get<std::string>());
  h.run_found = j.at("run_found").get<bool>();
  if (h.run_found) h.certificate = runs::RunReport::from_json(j.at("certificate").dump());
  return h;
}

struct ChunkResult {
  mpz_class first_m, last_m;
  mpz_class tested;
  std::vector<PrimeHit> primes;
  std::vector<DeferredCandidate> deferred;
};

// Examines one candidate q = D*m + 1; appends to the chunk result.
void test_candidate(const HuntJob& job, const mpz_class& m, ChunkResult& out) {
  mpz_class q = job.D * m + 1;
  out.tested += 1;
  if (!arith::is_prime(q)) return;
  arith::Factorization m_fac;
  try {
    m_fac = arith::factorize_cached(m);
  } catch (const arith::FactorBudgetError& e) {
    out.deferred.push_back({m, q, e.what()});
    return;
  }
  arith::Factorization q1 = arith::merge(job.D_factors, m_fac);
  if (q1.omega() != job.omega_target) return;

  PrimeHit hit;
  hit.m = m;
  hit.q = q;
  gfq::FieldSpec fld = gfq::make_prime_field(q, q1);
  runs::FindOptions opts;
  opts.budget = job.run_budget;
  auto res = runs::find_run(fld, job.run_length, opts);
  if (res.status == runs::RunStatus::Found) {
    hit.run_found = true;
    hit.certificate = *res.report;
  }
  out.primes.push_back(std::move(hit));
}

class CheckpointWriter {
 public:
  explicit CheckpointWriter(const std::string& path) : path_(path) {
    if (path_.empty()) return;
    out_.open(path_, std::ios::app);
    if (!out_) throw CheckpointWriteFailure("cannot open " + path_);
  }
  void write(const HuntCheckpoint& cp) {
    if (path_.empty()) return;
    out_ << cp.to_json() << '\n';
    out_.flush();
    if (!out_) throw CheckpointWriteFailure("write failed: " + path_);
  }

 private:
  std::string path_;
  std::ofstream out_;
};

HuntCheckpoint execute(const HuntJob& job, HuntCheckpoint state, mpz_class next_m) {
  auto t0 = std::chrono::steady_clock::now();
  auto [m_lo, m_hi] = m_range(job.D, job.lower, job.upper);
  CheckpointWriter writer(job.checkpoint_path);

  if (next_m > m_hi) {  // nothing left: emit the final record
    state.final_record = true;
    state.wall_clock_seconds = 0;
    writer.write(state);
    return state;
  }

  // Chunk boundaries are anchored at m_lo so that interrupted and resumed
  // runs cut the range identically.
  mpz_class chunk(static_cast<unsigned long>(job.chunk_size));
  mpz_class first_chunk = (next_m - m_lo) / chunk;
  mpz_class total_chunks = (m_hi - m_lo) / chunk + 1;
  mpz_class issue_limit = total_chunks;
  if (job.stop_after_m > 0) {
    // stop issuing chunks whose range begins past the stop mark
    mpz_class lim = job.stop_after_m >= m_lo ? (job.stop_after_m - m_lo) / chunk + 1
                                             : mpz_class(0);
    if (lim < issue_limit) issue_limit = lim;
  }

  std::mutex mu;
  mpz_class next_chunk = first_chunk;
  std::map<mpz_class, ChunkResult> done;
  mpz_class frontier = first_chunk;  // first chunk not yet merged

  auto worker = [&] {
    for (;;) {
      mpz_class idx;
      {
        std::lock_guard<std::mutex> lk(mu);
        if (next_chunk >= issue_limit) return;
        idx = next_chunk;
        next_chunk += 1;
      }
      ChunkResult res;
      res.first_m = m_lo + idx * chunk;
      res.last_m = res.first_m + chunk - 1;
      if (res.last_m > m_hi) res.last_m = m_hi;
      mpz_class start = res.first_m < next_m ? next_m : res.first_m;
      for (mpz_class m = start; m <= res.last_m; m += 1) test_candidate(job, m, res);

      std::lock_guard<std::mutex> lk(mu);
      done.emplace(idx, std::move(res));
      // merge the contiguous prefix in order and checkpoint it
      bool advanced = false;
      for (auto it = done.find(frontier); it != done.end(); it = done.find(frontier)) {
        ChunkResult& c = it->second;
        state.candidates_tested += c.tested;
        for (auto& h : c.primes) state.primes.push_back(std::move(h));
        for (auto& d : c.deferred) state.deferred.push_back(std::move(d));
        state.last_completed_m = c.last_m;
        done.erase(it);
        frontier += 1;
        advanced = true;
      }
      if (advanced) {
        state.final_record = false;
        state.wall_clock_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        writer.write(state);
      }
    }
  };

  unsigned nworkers = job.workers ? job.workers : 1;
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < nworkers; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  if (frontier >= total_chunks) {
    state.final_record = true;
    state.wall_clock_seconds = 0;
    writer.write(state);
  }
  return state;
}

}  // namespace

std::string HuntJob::hash() const {
  std::ostringstream os;
  os << run_length << '|' << omega_target << '|' << D.get_str() << '|'
     << lower.get_str() << '|' << upper.get_str() << '|' << run_budget.get_str();
  return fnv1a_hex(os.str());
}

std::string HuntCheckpoint::to_json() const {
  json j;
  j["job"] = job_hash;
  j["last_completed_m"] = last_completed_m.get_str();
  j["candidates_tested"] = candidates_tested.get_str();
  json ps = json::array();
  for (const auto& h : primes) ps.push_back(hit_to_json(h));
  j["primes"] = ps;
  json ds = json::array();
  for (const auto& d : deferred)
    ds.push_back({{"m", d.m.get_str()}, {"q", d.q.get_str()}, {"reason", d.reason}});
  j["deferred"] = ds;
  j["final"] = final_record;
  if (!final_record) j["wall_clock_seconds"] = wall_clock_seconds;
  return j.dump();
}

HuntCheckpoint HuntCheckpoint::from_json(const std::string& line) {
  json j = json::parse(line);
  HuntCheckpoint cp;
  cp.job_hash = j.at("job").get<std::string>();
  cp.last_completed_m = mpz_class(j.at("last_completed_m").get<std::string>());
  cp.candidates_tested = mpz_class(j.at("candidates_tested").get<std::string>());
  for (const auto& p : j.at("primes")) cp.primes.push_back(hit_from_json(p));
  for (const auto& d : j.at("deferred"))
    cp.deferred.push_back({mpz_class(d.at("m").get<std::string>()),
                           mpz_class(d.at("q").get<std::string>()),
                           d.at("reason").get<std::string>()});
  cp.final_record = j.at("final").get<bool>();
  if (j.contains("wall_clock_seconds"))
    cp.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  return cp;
}

std::pair<mpz_class, mpz_class> m_range(const mpz_class& D, const mpz_class& lower,
                                        const mpz_class& upper) {
  if (D < 2) throw std::invalid_argument("D must be >= 2");
  mpz_class m_lo = lower / D + 1;  // smallest m with D*m > lower
  if (m_lo < 1) m_lo = 1;
  mpz_class m_hi = upper / D;  // largest m with D*m <= upper
  if (m_lo > m_hi) throw EmptyInterval("no multiple of " + D.get_str() + " in (" +
                                       lower.get_str() + ", " + upper.get_str() + "]");
  return {m_lo, m_hi};
}

std::vector<std::pair<mpz_class, mpz_class>> candidate_stream(const mpz_class& D,
                                                              const mpz_class& lower,
                                                              const mpz_class& upper) {
  auto [m_lo, m_hi] = m_range(D, lower, upper);
  if (m_hi - m_lo > 10000000) throw std::invalid_argument("candidate list too large");
  std::vector<std::pair<mpz_class, mpz_class>> out;
  for (mpz_class m = m_lo; m <= m_hi; m += 1) out.emplace_back(m, D * m + 1);
  return out;
}

HuntCheckpoint run_hunt(const HuntJob& job) {
  if (!job.D_factors.consistent() || job.D_factors.value != job.D)
    throw std::invalid_argument("D factorization inconsistent");
  if (job.lower >= job.upper) throw EmptyInterval("empty hunt interval");
  auto [m_lo, m_hi] = m_range(job.D, job.lower, job.upper);
  HuntCheckpoint state;
  state.job_hash = job.hash();
  state.last_completed_m = m_lo - 1;
  return execute(job, std::move(state), m_lo);
}

HuntCheckpoint resume(const HuntJob& job) {
  std::ifstream in(job.checkpoint_path);
  if (!in) throw CorruptCheckpoint("cannot read " + job.checkpoint_path);
  std::string line;
  HuntCheckpoint last;
  bool any = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    HuntCheckpoint cp;
    try {
      cp = HuntCheckpoint::from_json(line);
    } catch (const std::exception& e) {
      throw CorruptCheckpoint(std::string("unparseable record: ") + e.what());
    }
    if (cp.job_hash != job.hash())
      throw CorruptCheckpoint("job parameter hash mismatch");
    if (any && cp.last_completed_m < last.last_completed_m)
      throw CorruptCheckpoint("non-monotone checkpoint records");
    last = std::move(cp);
    any = true;
  }
  if (!any) throw CorruptCheckpoint("no records in " + job.checkpoint_path);
  if (last.final_record) return last;
  return execute(job, std::move(last), last.last_completed_m + 1);
}

std::string results_to_csv(const HuntCheckpoint& cp, unsigned omega_target) {
  std::ostringstream os;
  os << "q,m,omega,run_start,run_length\n";
  for (const auto& h : cp.primes) {
    os << h.q.get_str() << ',' << h.m.get_str() << ',' << omega_target << ',';
    if (h.run_found)
      os << h.certificate.start_residue.get_str() << ',' << h.certificate.length;
    else
      os << ',';
    os << '\n';
  }
  return os.str();
}

}  // namespace primrun::hunt
