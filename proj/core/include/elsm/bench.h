#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "elsm/shadow_model.h"
#include "elsm/trusted_core.h"
#include "elsm/workload.h"

namespace elsm {

struct OpMetrics {
  std::uint64_t count = 0;
  double mean_us = 0;
  double p95_us = 0;
};

struct BenchMetrics {
  WorkloadSpec spec;
  std::uint64_t ops = 0;  // load + run ops executed
  double seconds = 0;
  double ops_per_sec = 0;
  std::map<std::string, OpMetrics> per_op;  // "load", "put", "delete", "get", "scan"

  // Point reads answered by the store (buffer hits carry no proof).
  std::uint64_t proved_gets = 0;
  double mean_proof_bytes = 0;
  double mean_proof_hashes = 0;
  double mean_level_entries = 0;

  std::uint64_t flushes = 0;
  std::uint64_t compactions = 0;
  std::uint64_t bytes_verified = 0;

  std::uint64_t oracle_checked = 0;
  std::uint64_t oracle_mismatches = 0;
  std::uint64_t verification_failures = 0;
  bool aborted = false;
  std::string abort_reason;
};

/// Drives the workload through `core`. When `oracle` is given every admitted
/// write is applied to it and every read is compared. A store error stops the
/// run and returns what was measured so far with `aborted` set.
BenchMetrics run_bench(TrustedCore& core, const WorkloadSpec& spec, ShadowModel* oracle = nullptr,
                       bool run_phase_only_metrics = false);

/// One "name value" pair per line.
std::string format_text(const BenchMetrics& m);
/// Single JSON object.
std::string format_json(const BenchMetrics& m);

}  // namespace elsm
