#pragma once

// The simulated enclave. Holds the only trusted state (level roots, the L0
// write buffer, the WAL digest, the clock, the counter binding) and checks
// everything the untrusted store hands back.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "elsm/store.h"
#include "elsm/types.h"

namespace elsm {

enum class Retention { kAllVersions, kLatestOnly };

struct CoreConfig {
  std::uint16_t max_levels = 7;
  std::uint64_t l0_capacity = 4u << 20;  // bytes of encoded records
  std::uint32_t growth_factor = 10;
  std::uint64_t base_size = 0;       // 0: same as l0_capacity
  std::uint64_t bind_interval = 0;   // writes between automatic binds, 0 = manual only
  Retention retention = Retention::kAllVersions;
  bool auto_compact = true;
  std::string seal_key = "elsm-test-seal-key";

  std::uint64_t level_limit(std::uint16_t level) const;
};

struct CounterValue {
  std::uint64_t value = 0;
  Digest hash;
  friend bool operator==(const CounterValue&, const CounterValue&) = default;
};

/// Monotonic counter, trusted by assumption. Persisted as
/// value u64 LE | state hash 32B and rewritten atomically.
class CounterDevice {
 public:
  explicit CounterDevice(std::filesystem::path path) : path_(std::move(path)) {}
  CounterValue read() const;  // a missing file reads as {0, zero}
  void write(const CounterValue& v);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Durable part of the trusted state.
struct SealedState {
  std::vector<Digest> roots;                // levels 1..q
  std::vector<std::uint64_t> level_bytes;   // levels 1..q
  Digest wal_digest;
  std::uint64_t wal_len = 0;
  Timestamp global_ts;
  CounterValue binding;
  std::uint64_t writes_since_bind = 0;
  bool dirty = false;  // state changed since the last bind
  friend bool operator==(const SealedState&, const SealedState&) = default;
};

/// magic "ESEL" | version u16 | q u16 | global_ts u64 | wal_len u64 |
/// wal_digest | binding value u64 | binding hash | writes_since_bind u64 |
/// dirty u8 | { root | level_bytes u64 } * q | HMAC-SHA256 over all of it
std::string seal_state(const SealedState& s, std::string_view key);
/// Throws SealTampered on a MAC failure or malformed layout.
SealedState unseal_state(std::string_view blob, std::string_view key);

struct ReadStats {
  std::uint32_t level_entries = 0;
  std::uint64_t hashes = 0;
  std::uint64_t proof_bytes = 0;
};

struct GetResult {
  std::optional<Record> record;      // absent, or the visible non-tombstone version
  bool from_buffer = false;
  std::optional<LevelId> hit_level;  // level the version (or tombstone) came from
  bool tombstone = false;
  ReadStats stats;
};

struct ScanResult {
  std::vector<Record> records;  // one per key, ascending
  ReadStats stats;
};

struct CoreStats {
  std::uint64_t puts = 0;
  std::uint64_t deletes = 0;
  std::uint64_t gets = 0;
  std::uint64_t scans = 0;
  std::uint64_t flushes = 0;
  std::uint64_t compactions = 0;
  std::uint64_t binds = 0;
  std::uint64_t bytes_verified = 0;
};

struct CoreEvent {
  enum class Kind { kFlush, kCompact, kBulkLoad } kind;
  LevelId level;  // output level
};

struct AuditReport {
  bool rollback = false;
  std::string detail;
};

struct FsckLevel {
  LevelId level;
  std::uint64_t records = 0;
  Digest expected;
  Digest actual;
  std::string error;  // non-empty if the level could not be read
  bool ok() const { return error.empty() && expected == actual; }
};

class TrustedCore {
 public:
  /// Recovers from the store's sealed state, or initializes a fresh store
  /// (and binds the counter) if there is none.
  ///
  /// Throws SealTampered, WalMismatch, InvalidArgument (config does not match
  /// the sealed level count), IoError, CounterIoError.
  static std::unique_ptr<TrustedCore> open(std::shared_ptr<UntrustedStore> store,
                                           std::shared_ptr<CounterDevice> counter, CoreConfig config);

  Timestamp put(const Key& key, std::string value);
  Timestamp del(const Key& key);
  GetResult get(const Key& key, Timestamp ts_q = Timestamp::latest());
  ScanResult scan(const Key& k1, const Key& k2, Timestamp ts_q = Timestamp::latest());
  void flush();
  void compact(LevelId level);

  /// Installs whole levels directly. Only allowed on an empty store; levels[i]
  /// holds level i+1. Records must already satisfy the temporal order.
  void bulk_load(const std::vector<std::vector<Record>>& levels);

  std::string seal();
  void bind_counter();
  AuditReport audit_rollback();
  std::vector<FsckLevel> fsck();

  /// Called after each install; must not call back into the core.
  void set_event_hook(std::function<void(const CoreEvent&)> hook);

  const CoreConfig& config() const { return config_; }
  std::vector<Digest> roots() const;
  Digest wal_digest() const;
  std::uint64_t wal_len() const;
  Timestamp global_ts() const;
  Digest current_state_hash() const;
  std::vector<Record> buffer() const;
  std::uint64_t buffer_bytes() const;
  std::vector<std::uint64_t> level_bytes() const;
  CoreStats stats() const;
  SealedState sealed_state() const;

 private:
  TrustedCore(std::shared_ptr<UntrustedStore> store, std::shared_ptr<CounterDevice> counter, CoreConfig config);

  void init_fresh();
  void recover(const std::string& blob);

  Timestamp admit(Record r);
  void seal_locked();
  void bind_locked();
  void flush_locked();
  void compact_locked(std::uint16_t level);
  void maybe_compact_locked();
  std::vector<Record> read_verified_level(std::uint16_t level);
  std::vector<Record> apply_retention(std::vector<Record> merged, std::uint16_t output_level) const;
  std::vector<RunRecord> build_run(std::uint16_t level, const std::vector<Record>& records, Digest& root) const;
  std::optional<Record> buffer_lookup(const Key& key, Timestamp ts_q) const;
  void emit(CoreEvent::Kind kind, std::uint16_t level);

  std::shared_ptr<UntrustedStore> store_;
  std::shared_ptr<CounterDevice> counter_;
  CoreConfig config_;

  mutable std::mutex mu_;
  SealedState st_;
  std::set<Record, RecordLess> buffer_;
  std::uint64_t buffer_bytes_ = 0;
  std::uint64_t wal_end_ = 0;
  CoreStats stats_;
  std::function<void(const CoreEvent&)> hook_;
};

}  // namespace elsm
