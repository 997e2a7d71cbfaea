#include "elsm/bench.h"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "elsm/errors.h"

namespace elsm {

namespace {

using Clock = std::chrono::steady_clock;

OpMetrics summarize(std::vector<double>& samples) {
  OpMetrics m;
  m.count = samples.size();
  if (samples.empty()) return m;
  double sum = 0;
  for (double s : samples) sum += s;
  m.mean_us = sum / static_cast<double>(samples.size());
  std::size_t idx = (samples.size() * 95 + 99) / 100;  // nearest-rank
  idx = std::clamp<std::size_t>(idx, 1, samples.size()) - 1;
  std::nth_element(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(idx), samples.end());
  m.p95_us = samples[idx];
  return m;
}

bool same(const std::optional<Record>& a, const std::optional<Record>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || *a == *b;
}

}  // namespace

BenchMetrics run_bench(TrustedCore& core, const WorkloadSpec& spec, ShadowModel* oracle, bool run_phase_only_metrics) {
  BenchMetrics m;
  m.spec = spec;
  WorkloadGenerator gen(spec);
  std::map<std::string, std::vector<double>> lat;
  const CoreStats before = core.stats();
  double proof_bytes = 0, proof_hashes = 0, entries = 0;
  double timed_seconds = 0;
  std::uint64_t timed_ops = 0;

  while (auto op = gen.next()) {
    const std::string name = op->load_phase ? "load" : std::string(to_string(op->kind));
    auto t0 = Clock::now();
    try {
      switch (op->kind) {
        case Op::Kind::kPut: {
          Timestamp ts = core.put(Key(op->key), op->value);
          if (oracle) oracle->apply(Record::put(Key(op->key), op->value, ts));
          break;
        }
        case Op::Kind::kDelete: {
          Timestamp ts = core.del(Key(op->key));
          if (oracle) oracle->apply(Record::erase(Key(op->key), ts));
          break;
        }
        case Op::Kind::kGet: {
          GetResult r = core.get(Key(op->key));
          if (!r.from_buffer) {
            ++m.proved_gets;
            proof_bytes += static_cast<double>(r.stats.proof_bytes);
            proof_hashes += static_cast<double>(r.stats.hashes);
            entries += r.stats.level_entries;
          }
          if (oracle) {
            ++m.oracle_checked;
            if (!same(r.record, oracle->get(Key(op->key)))) ++m.oracle_mismatches;
          }
          break;
        }
        case Op::Kind::kScan: {
          ScanResult r = core.scan(Key(op->key), Key(op->end_key));
          if (oracle) {
            ++m.oracle_checked;
            if (r.records != oracle->scan(Key(op->key), Key(op->end_key))) ++m.oracle_mismatches;
          }
          break;
        }
      }
    } catch (const VerificationFailed& e) {
      ++m.verification_failures;
      m.aborted = true;
      m.abort_reason = e.what();
      break;
    } catch (const Error& e) {
      m.aborted = true;
      m.abort_reason = e.what();
      break;
    }
    double us = std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
    lat[name].push_back(us);
    ++m.ops;
    if (!run_phase_only_metrics || !op->load_phase) {
      timed_seconds += us / 1e6;
      ++timed_ops;
    }
  }

  for (auto& [name, samples] : lat) m.per_op[name] = summarize(samples);
  m.seconds = timed_seconds;
  m.ops_per_sec = timed_seconds > 0 ? static_cast<double>(timed_ops) / timed_seconds : 0;
  if (m.proved_gets) {
    const auto n = static_cast<double>(m.proved_gets);
    m.mean_proof_bytes = proof_bytes / n;
    m.mean_proof_hashes = proof_hashes / n;
    m.mean_level_entries = entries / n;
  }
  const CoreStats after = core.stats();
  m.flushes = after.flushes - before.flushes;
  m.compactions = after.compactions - before.compactions;
  m.bytes_verified = after.bytes_verified - before.bytes_verified;
  return m;
}

std::string format_text(const BenchMetrics& m) {
  std::ostringstream o;
  o << "spec " << to_string(m.spec) << '\n'
    << "ops " << m.ops << '\n'
    << "seconds " << m.seconds << '\n'
    << "ops_per_sec " << m.ops_per_sec << '\n';
  for (const auto& [name, op] : m.per_op) {
    o << "op." << name << ".count " << op.count << '\n'
      << "op." << name << ".mean_us " << op.mean_us << '\n'
      << "op." << name << ".p95_us " << op.p95_us << '\n';
  }
  o << "proved_gets " << m.proved_gets << '\n'
    << "mean_proof_bytes " << m.mean_proof_bytes << '\n'
    << "mean_proof_hashes " << m.mean_proof_hashes << '\n'
    << "mean_level_entries " << m.mean_level_entries << '\n'
    << "flushes " << m.flushes << '\n'
    << "compactions " << m.compactions << '\n'
    << "bytes_verified " << m.bytes_verified << '\n'
    << "oracle_checked " << m.oracle_checked << '\n'
    << "oracle_mismatches " << m.oracle_mismatches << '\n'
    << "verification_failures " << m.verification_failures << '\n'
    << "aborted " << (m.aborted ? 1 : 0) << '\n';
  if (m.aborted) o << "abort_reason " << m.abort_reason << '\n';
  return o.str();
}

std::string format_json(const BenchMetrics& m) {
  nlohmann::json j;
  j["spec"] = to_string(m.spec);
  j["ops"] = m.ops;
  j["seconds"] = m.seconds;
  j["ops_per_sec"] = m.ops_per_sec;
  for (const auto& [name, op] : m.per_op) {
    j["per_op"][name] = {{"count", op.count}, {"mean_us", op.mean_us}, {"p95_us", op.p95_us}};
  }
  j["proved_gets"] = m.proved_gets;
  j["mean_proof_bytes"] = m.mean_proof_bytes;
  j["mean_proof_hashes"] = m.mean_proof_hashes;
  j["mean_level_entries"] = m.mean_level_entries;
  j["flushes"] = m.flushes;
  j["compactions"] = m.compactions;
  j["bytes_verified"] = m.bytes_verified;
  j["oracle_checked"] = m.oracle_checked;
  j["oracle_mismatches"] = m.oracle_mismatches;
  j["verification_failures"] = m.verification_failures;
  j["aborted"] = m.aborted;
  if (m.aborted) j["abort_reason"] = m.abort_reason;
  return j.dump(2);
}

}  // namespace elsm
