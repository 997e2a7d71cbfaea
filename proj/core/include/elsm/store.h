#pragma once

// The untrusted half of the system. Everything an UntrustedStore returns is
// checked by the trusted core before use; implementations may be honest
// (FileStore) or adversarial (see adversary.h).

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "elsm/merkle.h"
#include "elsm/run_file.h"
#include "elsm/types.h"

namespace elsm {

struct HitEntry {
  Record record;
  MembershipProof proof;
};

using LevelEntry = std::variant<NonMembershipProof, NoVisibleVersionProof, HitEntry>;

LevelId entry_level(const LevelEntry& e);

/// Per-level proofs for levels 1..k in order. When the key is found the last
/// entry is the hit; otherwise entries stop after the deepest non-empty level.
struct GetResponse {
  std::vector<LevelEntry> entries;
  std::optional<LevelId> hit_level;
};

struct TaggedRecord {
  Record record;
  LevelId source;
};

class RecordStream {
 public:
  virtual ~RecordStream() = default;
  virtual std::optional<TaggedRecord> next() = 0;
};

struct WalReadResult {
  std::vector<Record> records;
  std::vector<std::uint64_t> offsets;
  std::uint64_t end_offset = 0;
  bool torn_tail = false;
};

class UntrustedStore {
 public:
  virtual ~UntrustedStore() = default;

  virtual std::uint16_t max_levels() const = 0;

  virtual GetResponse serve_get(const Key& key, Timestamp ts_q) = 0;
  /// One proof per level 1..q, empty levels included.
  virtual std::vector<RangeProof> serve_scan(const Key& k1, const Key& k2, Timestamp ts_q) = 0;
  virtual std::unique_ptr<RecordStream> stream_level(LevelId level) = 0;

  /// Writes a run next to the live one without replacing it.
  virtual void stage_run(LevelId level, std::vector<RunRecord> records, const Digest& claimed_root) = 0;
  /// Atomically replaces the live run with the staged one.
  virtual void commit_run(LevelId level) = 0;
  virtual void discard_staged(LevelId level) = 0;
  virtual std::optional<Digest> staged_root(LevelId level) = 0;
  virtual Digest live_root(LevelId level) = 0;

  void install_run(LevelId level, std::vector<RunRecord> records, const Digest& claimed_root) {
    stage_run(level, std::move(records), claimed_root);
    commit_run(level);
  }

  virtual std::uint64_t wal_append(const Record& r) = 0;
  virtual WalReadResult wal_stream(std::uint64_t from_offset) = 0;
  virtual void wal_truncate(std::uint64_t length) = 0;

  virtual void write_sealed(const std::string& blob) = 0;
  virtual std::optional<std::string> read_sealed() = 0;
};

}  // namespace elsm
