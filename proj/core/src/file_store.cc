#include "elsm/file_store.h"

#include "elsm/errors.h"
#include "elsm/hash.h"
#include "elsm/proof_codec.h"

namespace elsm {

namespace fs = std::filesystem;

LevelId entry_level(const LevelEntry& e) {
  return std::visit(
      [](const auto& v) -> LevelId {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, HitEntry>) {
          return v.proof.level;
        } else {
          return v.level;
        }
      },
      e);
}

std::shared_ptr<const LoadedRun> make_loaded_run(LevelId level, const Digest& claimed_root,
                                                 std::vector<RunRecord> records) {
  auto run = std::make_shared<LoadedRun>();
  run->level = level;
  run->claimed_root = claimed_root;
  run->records = std::move(records);
  std::vector<Record> plain;
  plain.reserve(run->records.size());
  for (const auto& rr : run->records) plain.push_back(rr.record);
  run->tree = LevelTree::build(level, plain, LevelTree::Check::kLenient);
  std::size_t start = 0;
  for (const auto& leaf : run->tree.leaves()) {
    run->leaf_start.push_back(start);
    start += leaf.chain.size();
  }
  return run;
}

LevelEntry answer_level(const LoadedRun& run, const Key& key, Timestamp ts_q) {
  const LevelTree& tree = run.tree;
  auto idx = tree.find(key);
  if (!idx) return non_membership_proof(tree, key);
  const auto& chain = tree.leaves()[*idx].chain;
  std::size_t pos = 0;
  while (pos < chain.size() && chain[pos].ts > ts_q) ++pos;
  if (pos == chain.size()) return no_visible_version_proof(tree, key);
  // Serve the proof stored next to the record; fall back to the in-memory
  // tree if the stored bytes do not decode.
  MembershipProof proof;
  try {
    proof = decode_embedded_proof(run.records[run.leaf_start[*idx] + pos].embedded_proof, run.level, *idx);
  } catch (const DecodeError&) {
    proof = tree.membership_at(*idx, pos);
  }
  return HitEntry{chain[pos], std::move(proof)};
}

namespace {

class SnapshotStream final : public RecordStream {
 public:
  explicit SnapshotStream(std::shared_ptr<const LoadedRun> run) : run_(std::move(run)) {}

  std::optional<TaggedRecord> next() override {
    if (!run_ || pos_ >= run_->records.size()) return std::nullopt;
    return TaggedRecord{run_->records[pos_++].record, run_->level};
  }

 private:
  std::shared_ptr<const LoadedRun> run_;
  std::size_t pos_ = 0;
};

}  // namespace

FileStore::FileStore(fs::path dir, StoreOptions options)
    : dir_(std::move(dir)), options_(options), levels_(options.max_levels + 1u), staged_(options.max_levels + 1u) {}

std::unique_ptr<FileStore> FileStore::open(const fs::path& dir, StoreOptions options) {
  if (options.max_levels == 0) throw InvalidArgument("store needs at least one level");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create store directory " + dir.string() + ": " + ec.message());

  std::unique_ptr<FileStore> store(new FileStore(dir, options));
  for (std::uint16_t i = 1; i <= options.max_levels; ++i) {
    LevelId level{i};
    auto path = store->run_path(level);
    store->levels_[i] = fs::exists(path) ? store->load_run(path, level)
                                         : make_loaded_run(level, empty_level_root(), {});
    fs::remove(fs::path(path) += ".tmp", ec);
  }
  store->wal_ = std::make_unique<WalWriter>(store->wal_path(), options.sync);
  return store;
}

fs::path FileStore::run_path(LevelId level) const { return dir_ / ("L" + std::to_string(level.index) + ".run"); }

fs::path FileStore::staged_path(LevelId level) const {
  return dir_ / ("L" + std::to_string(level.index) + ".run.staged");
}

void FileStore::check_level(LevelId level) const {
  if (level.index == 0 || level.index > options_.max_levels) {
    throw InvalidArgument("level " + std::to_string(level.index) + " out of range");
  }
}

std::shared_ptr<const LoadedRun> FileStore::load_run(const fs::path& path, LevelId level) const {
  RunFile run = parse_run(read_file(path));
  if (run.level != level) throw CorruptContainer("run file " + path.string() + " is for another level");
  return make_loaded_run(level, run.root, std::move(run.records));
}

std::shared_ptr<const LoadedRun> FileStore::snapshot(LevelId level) const {
  check_level(level);
  std::shared_lock lock(levels_mu_);
  return levels_[level.index];
}

void FileStore::reload() {
  std::vector<std::shared_ptr<const LoadedRun>> fresh(options_.max_levels + 1u);
  for (std::uint16_t i = 1; i <= options_.max_levels; ++i) {
    LevelId level{i};
    fresh[i] = fs::exists(run_path(level)) ? load_run(run_path(level), level)
                                           : make_loaded_run(level, empty_level_root(), {});
  }
  std::unique_lock lock(levels_mu_);
  levels_ = std::move(fresh);
}

std::vector<std::shared_ptr<const LoadedRun>> FileStore::snapshot_all() const {
  std::shared_lock lock(levels_mu_);
  return levels_;
}

GetResponse FileStore::serve_get(const Key& key, Timestamp ts_q) {
  auto runs = snapshot_all();
  std::uint16_t deepest = 0;
  for (std::uint16_t i = 1; i <= options_.max_levels; ++i) {
    if (!runs[i]->tree.empty()) deepest = i;
  }

  GetResponse resp;
  for (std::uint16_t i = 1; i <= deepest; ++i) {
    resp.entries.push_back(answer_level(*runs[i], key, ts_q));
    if (std::holds_alternative<HitEntry>(resp.entries.back())) {
      resp.hit_level = LevelId{i};
      break;
    }
  }
  return resp;
}

std::vector<RangeProof> FileStore::serve_scan(const Key& k1, const Key& k2, Timestamp) {
  auto runs = snapshot_all();
  std::vector<RangeProof> out;
  out.reserve(options_.max_levels);
  for (std::uint16_t i = 1; i <= options_.max_levels; ++i) out.push_back(range_proof(runs[i]->tree, k1, k2));
  return out;
}

std::unique_ptr<RecordStream> FileStore::stream_level(LevelId level) {
  return std::make_unique<SnapshotStream>(snapshot(level));
}

void FileStore::stage_run(LevelId level, std::vector<RunRecord> records, const Digest& claimed_root) {
  check_level(level);
  RunFile file{level, claimed_root, std::move(records)};
  crash_point("stage:before_write");
  write_file_atomic(staged_path(level), serialize_run(file), options_.sync);
  crash_point("stage:after_write");
  auto loaded = make_loaded_run(level, claimed_root, std::move(file.records));
  std::unique_lock lock(levels_mu_);
  staged_[level.index] = std::move(loaded);
}

void FileStore::commit_run(LevelId level) {
  check_level(level);
  std::shared_ptr<const LoadedRun> staged;
  {
    std::shared_lock lock(levels_mu_);
    staged = staged_[level.index];
  }
  if (!staged) {
    if (!fs::exists(staged_path(level))) throw IoError("no staged run for L" + std::to_string(level.index));
    staged = load_run(staged_path(level), level);
  }
  crash_point("commit:before_rename");
  std::error_code ec;
  fs::rename(staged_path(level), run_path(level), ec);
  if (ec) throw IoError("commit rename failed: " + ec.message());
  crash_point("commit:after_rename");
  std::unique_lock lock(levels_mu_);
  levels_[level.index] = std::move(staged);
  staged_[level.index].reset();
}

void FileStore::discard_staged(LevelId level) {
  check_level(level);
  std::error_code ec;
  fs::remove(staged_path(level), ec);
  std::unique_lock lock(levels_mu_);
  staged_[level.index].reset();
}

std::optional<Digest> FileStore::staged_root(LevelId level) {
  check_level(level);
  {
    std::shared_lock lock(levels_mu_);
    if (staged_[level.index]) return staged_[level.index]->claimed_root;
  }
  if (!fs::exists(staged_path(level))) return std::nullopt;
  try {
    return parse_run(read_file(staged_path(level))).root;
  } catch (const CorruptContainer&) {
    return std::nullopt;
  }
}

Digest FileStore::live_root(LevelId level) { return snapshot(level)->claimed_root; }

std::uint64_t FileStore::wal_append(const Record& r) {
  std::lock_guard lock(wal_mu_);
  crash_point("wal:before_append");
  std::uint64_t off;
  if (crash_hook_) {
    off = wal_->append(r, [this] { crash_point("wal:mid_frame"); });
  } else {
    off = wal_->append(r);
  }
  crash_point("wal:after_append");
  return off;
}

WalReadResult FileStore::wal_stream(std::uint64_t from_offset) {
  std::lock_guard lock(wal_mu_);
  std::string bytes = fs::exists(wal_path()) ? read_file(wal_path()) : std::string();
  WalContents c = parse_wal(bytes, from_offset);
  return WalReadResult{std::move(c.records), std::move(c.offsets), c.end_offset, c.torn_tail};
}

void FileStore::wal_truncate(std::uint64_t length) {
  std::lock_guard lock(wal_mu_);
  crash_point("wal:before_truncate");
  wal_->truncate(length);
}

void FileStore::write_sealed(const std::string& blob) {
  crash_point("seal:before_write");
  write_file_atomic(sealed_path(), blob, options_.sync);
  crash_point("seal:after_write");
}

std::optional<std::string> FileStore::read_sealed() {
  if (!fs::exists(sealed_path())) return std::nullopt;
  return read_file(sealed_path());
}

}  // namespace elsm
