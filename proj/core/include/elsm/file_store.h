#pragma once

#include <exception>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string_view>
#include <vector>

#include "elsm/store.h"
#include "elsm/wal.h"

namespace elsm {

/// Thrown by crash hooks in tests to stop an operation at a named point.
struct SimulatedCrash : std::exception {
  const char* what() const noexcept override { return "simulated crash"; }
};

struct StoreOptions {
  std::uint16_t max_levels = 7;
  bool sync = false;  // fdatasync WAL appends and run/seal writes
};

/// An opened run file with the lookup structures the untrusted side keeps in
/// memory to answer queries. Immutable once published.
struct LoadedRun {
  LevelId level;
  Digest claimed_root;
  std::vector<RunRecord> records;
  LevelTree tree;
  std::vector<std::size_t> leaf_start;  // index into records of each leaf's head
};

/// Honest untrusted store: one run file per level, a WAL, and the sealed
/// trusted-state blob, all under one directory.
///
///   <dir>/L<i>.run          live run of level i
///   <dir>/L<i>.run.staged   run written but not yet committed
///   <dir>/wal.log
///   <dir>/sealed.bin
///
/// Readers take a snapshot of the per-level runs at the start of a request
/// and keep seeing it even if a commit swaps the level underneath them.
class FileStore final : public UntrustedStore {
 public:
  /// Creates the directory if needed and loads every run. Throws
  /// CorruptContainer on malformed files and IoError on filesystem failures.
  static std::unique_ptr<FileStore> open(const std::filesystem::path& dir, StoreOptions options = {});

  /// Called with a point name at each crash-relevant step; a hook that throws
  /// simulates the process dying there.
  using CrashHook = std::function<void(std::string_view point)>;
  void set_crash_hook(CrashHook hook) { crash_hook_ = std::move(hook); }

  std::uint16_t max_levels() const override { return options_.max_levels; }

  GetResponse serve_get(const Key& key, Timestamp ts_q) override;
  std::vector<RangeProof> serve_scan(const Key& k1, const Key& k2, Timestamp ts_q) override;
  std::unique_ptr<RecordStream> stream_level(LevelId level) override;

  void stage_run(LevelId level, std::vector<RunRecord> records, const Digest& claimed_root) override;
  void commit_run(LevelId level) override;
  void discard_staged(LevelId level) override;
  std::optional<Digest> staged_root(LevelId level) override;
  Digest live_root(LevelId level) override;

  std::uint64_t wal_append(const Record& r) override;
  WalReadResult wal_stream(std::uint64_t from_offset) override;
  void wal_truncate(std::uint64_t length) override;

  void write_sealed(const std::string& blob) override;
  std::optional<std::string> read_sealed() override;

  std::shared_ptr<const LoadedRun> snapshot(LevelId level) const;
  /// Re-reads every live run from disk (after out-of-band file edits).
  void reload();
  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path run_path(LevelId level) const;
  std::filesystem::path staged_path(LevelId level) const;
  std::filesystem::path wal_path() const { return dir_ / "wal.log"; }
  std::filesystem::path sealed_path() const { return dir_ / "sealed.bin"; }

 private:
  FileStore(std::filesystem::path dir, StoreOptions options);

  void crash_point(std::string_view point) const {
    if (crash_hook_) crash_hook_(point);
  }
  void check_level(LevelId level) const;
  std::shared_ptr<const LoadedRun> load_run(const std::filesystem::path& path, LevelId level) const;
  std::vector<std::shared_ptr<const LoadedRun>> snapshot_all() const;

  std::filesystem::path dir_;
  StoreOptions options_;
  CrashHook crash_hook_;

  mutable std::shared_mutex levels_mu_;
  std::vector<std::shared_ptr<const LoadedRun>> levels_;   // index 0 unused
  std::vector<std::shared_ptr<const LoadedRun>> staged_;   // in-memory copy of staged runs

  std::mutex wal_mu_;
  std::unique_ptr<WalWriter> wal_;
};

/// The honest answer one level gives for a point read.
LevelEntry answer_level(const LoadedRun& run, const Key& key, Timestamp ts_q);

std::shared_ptr<const LoadedRun> make_loaded_run(LevelId level, const Digest& claimed_root,
                                                 std::vector<RunRecord> records);

}  // namespace elsm
