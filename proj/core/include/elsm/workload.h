#pragma once

// YCSB-style workloads: a load phase of record_count inserts, then op_count
// operations mixed by ratio, keys drawn uniform / zipfian / latest.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace elsm {

enum class Distribution { kUniform, kZipfian, kLatest };

std::string_view to_string(Distribution d);

struct WorkloadSpec {
  std::uint64_t record_count = 1000;
  std::size_t key_len = 16;
  std::size_t value_len = 100;
  double read_ratio = 0.5;
  double scan_ratio = 0.0;
  double delete_ratio = 0.0;  // the rest of the run phase is updates
  Distribution distribution = Distribution::kZipfian;
  std::uint64_t op_count = 1000;
  std::uint64_t seed = 1;
  std::uint32_t scan_length = 10;  // expected keys per scan
};

/// Throws InvalidSpec.
void validate(const WorkloadSpec& spec);

/// Parses "key=value,key=value" over the WorkloadSpec field names
/// (records, ops, key_len, value_len, read, scan, delete, dist, seed,
/// scan_len). Unset fields keep their defaults. Throws InvalidSpec.
WorkloadSpec parse_workload_spec(std::string_view text);
std::string to_string(const WorkloadSpec& spec);

/// "user" followed by 12 hex digits of FNV-1a(index), padded with '0' to key_len.
std::string make_key(std::uint64_t index, std::size_t key_len);

// Portable mappings from a 64-bit engine, so streams do not depend on the
// standard library's distribution implementations.
double uniform01(std::mt19937_64& rng);
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

/// Gray et al.'s zipfian generator as used by YCSB: rank 0 is the most
/// popular, P(rank = k) = 1 / ((k + 1)^theta * zeta(n, theta)).
class ZipfianGenerator {
 public:
  ZipfianGenerator(std::uint64_t n, double theta = 0.99);
  std::uint64_t next(std::mt19937_64& rng) const;
  std::uint64_t n() const { return n_; }
  double probability(std::uint64_t rank) const;
  static double zeta(std::uint64_t n, double theta);

 private:
  std::uint64_t n_;
  double theta_;
  double zetan_;
  double alpha_;
  double eta_;
  double half_pow_theta_;
};

struct Op {
  enum class Kind { kPut, kDelete, kGet, kScan } kind = Kind::kPut;
  std::string key;
  std::string value;    // puts
  std::string end_key;  // scans
  bool load_phase = false;
};

std::string_view to_string(Op::Kind k);

class WorkloadGenerator {
 public:
  explicit WorkloadGenerator(WorkloadSpec spec);
  std::optional<Op> next();
  const WorkloadSpec& spec() const { return spec_; }

 private:
  std::uint64_t pick_index();
  std::string make_value();
  std::string scan_end(const std::string& start) const;

  WorkloadSpec spec_;
  std::mt19937_64 rng_;
  std::optional<ZipfianGenerator> zipf_;
  std::uint64_t emitted_ = 0;
};

}  // namespace elsm
