#pragma once

// Malicious-host simulation. AdversarialStore sits between the trusted core
// and an honest FileStore and rewrites responses (or the files underneath)
// for one selected target.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "elsm/file_store.h"
#include "elsm/trusted_core.h"
#include "elsm/workload.h"

namespace elsm {

enum class AttackKind {
  kIdentity,
  kTamperValue,
  kStaleResult,
  kOmitRecord,
  kDropLevelEntry,
  kForgeRangeGap,
  kRollbackSnapshot,
  kWalTamper,
  kWalTruncateTail,
  kCrossLevelRootReplay,
};

std::string_view to_string(AttackKind k);
std::optional<AttackKind> parse_attack_kind(std::string_view name);
const std::vector<AttackKind>& all_attack_kinds();  // excludes kIdentity

enum class ExpectedVerdict { kNoAlarm, kVerificationFailed, kWalMismatch, kRollbackDetected, kWindowedLoss };

std::string_view to_string(ExpectedVerdict v);
ExpectedVerdict expected_verdict(AttackKind k);

struct Attack {
  AttackKind kind = AttackKind::kIdentity;
  std::optional<std::string> key;  // target key; chosen from the store when unset
  std::uint64_t seed = 0;
};

/// What an injected attack ended up aimed at. The caller performs the
/// operation that exposes it.
struct ResolvedTarget {
  std::optional<Key> key;
  std::optional<Key> end_key;  // scans
  Timestamp ts_q = Timestamp::latest();
  bool use_scan = false;
  std::optional<LevelId> level;
  std::string detail;
};

/// Copy of every file in a directory, restorable later.
class DirectorySnapshot {
 public:
  static DirectorySnapshot take(const std::filesystem::path& dir);
  /// Makes `dir` hold exactly the snapshotted files again.
  void restore(const std::filesystem::path& dir) const;

 private:
  std::map<std::string, std::string> files_;
};

class AdversarialStore final : public UntrustedStore {
 public:
  explicit AdversarialStore(std::shared_ptr<FileStore> inner);

  /// Arms an attack. File-level kinds (TamperValue, WalTamper) modify files
  /// right away; rollback kinds snapshot the directory for apply_rollback().
  /// Throws SelectorUnresolvable when no suitable target exists.
  const ResolvedTarget& inject(const Attack& attack);
  void clear();
  /// Restores the snapshot taken by a rollback attack. The caller must reopen
  /// the store and core afterwards.
  void apply_rollback() const;

  std::uint64_t mutations() const { return mutations_; }
  FileStore& inner() { return *inner_; }

  std::uint16_t max_levels() const override { return inner_->max_levels(); }
  GetResponse serve_get(const Key& key, Timestamp ts_q) override;
  std::vector<RangeProof> serve_scan(const Key& k1, const Key& k2, Timestamp ts_q) override;
  std::unique_ptr<RecordStream> stream_level(LevelId level) override { return inner_->stream_level(level); }
  void stage_run(LevelId level, std::vector<RunRecord> records, const Digest& root) override {
    inner_->stage_run(level, std::move(records), root);
  }
  void commit_run(LevelId level) override { inner_->commit_run(level); }
  void discard_staged(LevelId level) override { inner_->discard_staged(level); }
  std::optional<Digest> staged_root(LevelId level) override { return inner_->staged_root(level); }
  Digest live_root(LevelId level) override { return inner_->live_root(level); }
  std::uint64_t wal_append(const Record& r) override { return inner_->wal_append(r); }
  WalReadResult wal_stream(std::uint64_t from) override { return inner_->wal_stream(from); }
  void wal_truncate(std::uint64_t length) override { inner_->wal_truncate(length); }
  void write_sealed(const std::string& blob) override { inner_->write_sealed(blob); }
  std::optional<std::string> read_sealed() override { return inner_->read_sealed(); }

 private:
  std::vector<Key> stored_keys(bool exclude_wal) const;
  Key pick_key(const std::vector<Key>& candidates);
  void resolve_point(bool need_versions);
  void resolve_tamper_value();
  void resolve_wal_tamper();
  void resolve_range();
  void resolve_cross_level();
  NonMembershipProof forge_absence(const LoadedRun& run, std::size_t leaf) const;
  void continue_below(GetResponse& resp, const Key& key, Timestamp ts_q, std::uint16_t from_level) const;

  std::shared_ptr<FileStore> inner_;
  std::optional<Attack> attack_;
  ResolvedTarget target_;
  std::mt19937_64 rng_;
  std::optional<DirectorySnapshot> snapshot_;
  std::uint16_t replay_from_ = 0;  // cross-level: serve level replay_from_ as target_.level
  std::uint64_t mutations_ = 0;
};

/// Flips one byte of the value of record `index` in a run file.
void tamper_run_value(const std::filesystem::path& run_file, std::size_t index, std::size_t byte);
/// Flips one byte inside WAL frame `frame` (at `byte` within the frame),
/// optionally recomputing the frame checksum so the damage is not a CRC error.
void tamper_wal_frame(const std::filesystem::path& wal_file, std::size_t frame, std::size_t byte, bool fix_crc);

struct CampaignConfig {
  WorkloadSpec workload;
  CoreConfig core;
  std::uint64_t trials = 100;
  std::vector<AttackKind> kinds;
  std::uint64_t seed = 1;
  std::filesystem::path work_dir;
};

/// Desk-sized defaults: a few hundred keys spread over three levels, with
/// multi-version keys and a non-empty WAL.
CampaignConfig default_campaign(std::filesystem::path work_dir, std::uint64_t trials = 100,
                                std::uint64_t seed = 1);

struct CampaignRow {
  AttackKind kind;
  ExpectedVerdict expected;
  std::uint64_t trials = 0;
  std::uint64_t detected = 0;       // raised the expected error
  std::uint64_t missed = 0;         // expected detection, none happened
  std::uint64_t windowed = 0;       // data lost without detection, as documented
  std::uint64_t false_accepts = 0;  // an operation returned a result differing from the oracle
  std::uint64_t false_alarms = 0;   // identity only: an honest run raised an error
  bool as_expected() const;
};

struct CampaignReport {
  std::vector<CampaignRow> rows;
  bool all_as_expected() const;
};

/// Builds one store from the seeded workload, then for every kind runs
/// `trials` attacks, each on a fresh copy of that store.
CampaignReport run_campaign(const CampaignConfig& config);

/// Header line plus one whitespace-separated line per row.
std::string format_report(const CampaignReport& report);

}  // namespace elsm
