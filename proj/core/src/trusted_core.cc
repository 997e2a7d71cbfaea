#include "elsm/trusted_core.h"

#include <algorithm>
#include <limits>
#include <map>

#include "elsm/encoding.h"
#include "elsm/errors.h"
#include "elsm/hash.h"
#include "elsm/merkle.h"
#include "elsm/proof_codec.h"
#include "elsm/run_file.h"
#include "elsm/verify.h"

namespace elsm {

namespace {

constexpr char kSealMagic[4] = {'E', 'S', 'E', 'L'};
constexpr std::uint16_t kSealVersion = 1;

std::uint64_t bytes_of(const std::vector<Record>& records) {
  std::uint64_t n = 0;
  for (const auto& r : records) n += encoded_size(r);
  return n;
}

[[noreturn]] void reject(std::uint16_t level, RejectReason reason) {
  throw VerificationFailed(LevelId{level}, reason);
}

}  // namespace

std::uint64_t CoreConfig::level_limit(std::uint16_t level) const {
  std::uint64_t limit = base_size ? base_size : l0_capacity;
  for (std::uint16_t i = 0; i < level; ++i) {
    if (limit > std::numeric_limits<std::uint64_t>::max() / std::max<std::uint32_t>(growth_factor, 1)) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    limit *= std::max<std::uint32_t>(growth_factor, 1);
  }
  return limit;
}

// ---- counter ----

CounterValue CounterDevice::read() const {
  std::error_code ec;
  if (!std::filesystem::exists(path_, ec)) return {};
  try {
    std::string bytes = read_file(path_);
    ByteReader in(bytes);
    CounterValue v;
    v.value = in.u64le();
    v.hash = in.digest();
    if (!in.done()) throw DecodeError("trailing bytes");
    return v;
  } catch (const Error& e) {
    throw CounterIoError("counter " + path_.string() + ": " + e.what());
  }
}

void CounterDevice::write(const CounterValue& v) {
  std::string out;
  put_u64le(out, v.value);
  put_digest(out, v.hash);
  try {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    write_file_atomic(path_, out, true);
  } catch (const std::exception& e) {
    throw CounterIoError("counter " + path_.string() + ": " + e.what());
  }
}

// ---- sealing ----

std::string seal_state(const SealedState& s, std::string_view key) {
  std::string out(kSealMagic, sizeof kSealMagic);
  put_u16le(out, kSealVersion);
  put_u16le(out, static_cast<std::uint16_t>(s.roots.size()));
  put_u64le(out, s.global_ts.value);
  put_u64le(out, s.wal_len);
  put_digest(out, s.wal_digest);
  put_u64le(out, s.binding.value);
  put_digest(out, s.binding.hash);
  put_u64le(out, s.writes_since_bind);
  put_u8(out, s.dirty ? 1 : 0);
  for (std::size_t i = 0; i < s.roots.size(); ++i) {
    put_digest(out, s.roots[i]);
    put_u64le(out, s.level_bytes.at(i));
  }
  put_digest(out, hmac_sha256(key, out));
  return out;
}

SealedState unseal_state(std::string_view blob, std::string_view key) {
  if (blob.size() < 32) throw SealTampered("sealed state truncated");
  std::string_view body = blob.substr(0, blob.size() - 32);
  Digest mac;
  std::copy(blob.end() - 32, blob.end(), mac.bytes.begin());
  if (hmac_sha256(key, body) != mac) throw SealTampered("sealed state MAC mismatch");
  try {
    ByteReader in(body);
    if (in.take(4) != std::string_view(kSealMagic, 4)) throw DecodeError("bad magic");
    if (in.u16le() != kSealVersion) throw DecodeError("unknown version");
    SealedState s;
    std::uint16_t q = in.u16le();
    s.global_ts.value = in.u64le();
    s.wal_len = in.u64le();
    s.wal_digest = in.digest();
    s.binding.value = in.u64le();
    s.binding.hash = in.digest();
    s.writes_since_bind = in.u64le();
    s.dirty = in.u8() != 0;
    for (std::uint16_t i = 0; i < q; ++i) {
      s.roots.push_back(in.digest());
      s.level_bytes.push_back(in.u64le());
    }
    if (!in.done()) throw DecodeError("trailing bytes");
    return s;
  } catch (const DecodeError& e) {
    // Only reachable with a valid MAC, i.e. a blob from an incompatible writer.
    throw SealTampered(std::string("sealed state layout: ") + e.what());
  }
}

// ---- construction / recovery ----

TrustedCore::TrustedCore(std::shared_ptr<UntrustedStore> store, std::shared_ptr<CounterDevice> counter,
                         CoreConfig config)
    : store_(std::move(store)), counter_(std::move(counter)), config_(std::move(config)) {}

std::unique_ptr<TrustedCore> TrustedCore::open(std::shared_ptr<UntrustedStore> store,
                                               std::shared_ptr<CounterDevice> counter, CoreConfig config) {
  if (!store || !counter) throw InvalidArgument("core needs a store and a counter");
  if (config.max_levels == 0 || config.max_levels != store->max_levels()) {
    throw InvalidArgument("config level count does not match the store");
  }
  if (config.l0_capacity == 0) throw InvalidArgument("l0_capacity must be positive");
  std::unique_ptr<TrustedCore> core(new TrustedCore(std::move(store), std::move(counter), std::move(config)));
  std::lock_guard lock(core->mu_);
  if (auto blob = core->store_->read_sealed()) {
    core->recover(*blob);
  } else {
    core->init_fresh();
  }
  return core;
}

void TrustedCore::init_fresh() {
  if (counter_->read().value != 0) {
    throw SealTampered("sealed state missing for a store with a bound counter");
  }
  const std::uint16_t q = config_.max_levels;
  st_ = SealedState{};
  st_.roots.assign(q, empty_level_root());
  st_.level_bytes.assign(q, 0);
  st_.wal_digest = wal_base_digest();
  // Leftovers from an earlier life of the directory are not ours.
  for (std::uint16_t i = 1; i <= q; ++i) {
    store_->discard_staged(LevelId{i});
    if (store_->live_root(LevelId{i}) != empty_level_root()) store_->install_run(LevelId{i}, {}, empty_level_root());
  }
  store_->wal_truncate(0);
  wal_end_ = 0;
  bind_locked();
}

void TrustedCore::recover(const std::string& blob) {
  SealedState s = unseal_state(blob, config_.seal_key);
  if (s.roots.size() != config_.max_levels) {
    throw InvalidArgument("sealed state has " + std::to_string(s.roots.size()) + " levels, config has " +
                          std::to_string(config_.max_levels));
  }

  WalReadResult wal;
  try {
    wal = store_->wal_stream(0);
  } catch (const CorruptFrame& e) {
    throw WalMismatch(e.what());
  }
  if (wal.records.size() < s.wal_len) {
    throw WalMismatch("WAL holds " + std::to_string(wal.records.size()) + " intact records, sealed state digested " +
                      std::to_string(s.wal_len));
  }
  Digest sigma = wal_base_digest();
  for (std::uint64_t i = 0; i < s.wal_len; ++i) sigma = wal_step_digest(sigma, wal.records[i]);
  if (sigma != s.wal_digest) throw WalMismatch("WAL digest chain diverges from sealed state");

  // Anything past the digested prefix was never admitted.
  std::uint64_t digested_end = s.wal_len < wal.records.size() ? wal.offsets[s.wal_len] : wal.end_offset;
  if (digested_end != wal.end_offset || wal.torn_tail) store_->wal_truncate(digested_end);
  wal_end_ = digested_end;

  st_ = std::move(s);
  buffer_.clear();
  buffer_bytes_ = 0;
  for (std::uint64_t i = 0; i < st_.wal_len; ++i) {
    buffer_bytes_ += encoded_size(wal.records[i]);
    buffer_.insert(std::move(wal.records[i]));
  }

  // Finish or roll back an install interrupted around the seal.
  for (std::uint16_t i = 1; i <= config_.max_levels; ++i) {
    LevelId level{i};
    const Digest& want = st_.roots[i - 1];
    auto staged = store_->staged_root(level);
    if (store_->live_root(level) != want && staged && *staged == want) {
      store_->commit_run(level);
    } else if (staged) {
      store_->discard_staged(level);
    }
  }

  CounterValue c = counter_->read();
  if (st_.binding.value == c.value + 1) counter_->write(st_.binding);
}

// ---- writes ----

Timestamp TrustedCore::put(const Key& key, std::string value) {
  std::lock_guard lock(mu_);
  Timestamp ts = admit(Record::put(key, std::move(value), Timestamp{st_.global_ts.value + 1}));
  ++stats_.puts;
  return ts;
}

Timestamp TrustedCore::del(const Key& key) {
  std::lock_guard lock(mu_);
  Timestamp ts = admit(Record::erase(key, Timestamp{st_.global_ts.value + 1}));
  ++stats_.deletes;
  return ts;
}

Timestamp TrustedCore::admit(Record r) {
  validate_record(r);
  std::uint64_t offset;
  try {
    offset = store_->wal_append(r);
  } catch (const IoError&) {
    try {
      store_->wal_truncate(wal_end_);
    } catch (const IoError&) {
    }
    throw;
  }
  wal_end_ = offset + encoded_size(r) + 8;
  st_.global_ts = r.ts;
  st_.wal_digest = wal_step_digest(st_.wal_digest, r);
  ++st_.wal_len;
  ++st_.writes_since_bind;
  st_.dirty = true;
  buffer_bytes_ += encoded_size(r);
  Timestamp ts = r.ts;
  buffer_.insert(std::move(r));
  seal_locked();

  if (buffer_bytes_ > config_.l0_capacity) flush_locked();
  if (config_.bind_interval && st_.writes_since_bind >= config_.bind_interval) bind_locked();
  return ts;
}

void TrustedCore::seal_locked() { store_->write_sealed(seal_state(st_, config_.seal_key)); }

std::string TrustedCore::seal() {
  std::lock_guard lock(mu_);
  std::string blob = seal_state(st_, config_.seal_key);
  store_->write_sealed(blob);
  return blob;
}

// ---- flush / compaction ----

std::vector<Record> TrustedCore::read_verified_level(std::uint16_t level) {
  auto stream = store_->stream_level(LevelId{level});
  StreamingTreeBuilder builder;
  std::vector<Record> out;
  std::uint64_t bytes = 0;
  while (auto t = stream->next()) {
    try {
      builder.add(t->record);
    } catch (const TreeError&) {
      reject(level, RejectReason::kRootMismatch);
    }
    bytes += encoded_size(t->record);
    out.push_back(std::move(t->record));
  }
  if (builder.finish() != st_.roots[level - 1]) reject(level, RejectReason::kRootMismatch);
  stats_.bytes_verified += bytes;
  return out;
}

std::vector<Record> TrustedCore::apply_retention(std::vector<Record> merged, std::uint16_t output_level) const {
  if (config_.retention == Retention::kAllVersions) return merged;
  bool deeper_empty = true;
  for (std::uint16_t j = output_level + 1; j <= config_.max_levels; ++j) {
    if (st_.roots[j - 1] != empty_level_root()) deeper_empty = false;
  }
  std::vector<Record> out;
  const Key* prev = nullptr;
  for (auto& r : merged) {
    bool head = !prev || !(*prev == r.key);
    prev = &r.key;
    if (!head) continue;
    if (r.tombstone && deeper_empty) continue;
    out.push_back(r);
  }
  return out;
}

std::vector<RunRecord> TrustedCore::build_run(std::uint16_t level, const std::vector<Record>& records,
                                              Digest& root) const {
  LevelTree tree = LevelTree::build(LevelId{level}, records);
  root = tree.root();
  std::vector<RunRecord> run;
  run.reserve(records.size());
  for (std::size_t leaf = 0; leaf < tree.leaf_count(); ++leaf) {
    const auto& chain = tree.leaves()[leaf].chain;
    for (std::size_t pos = 0; pos < chain.size(); ++pos) {
      run.push_back(RunRecord{chain[pos], encode_embedded_proof(tree.membership_at(leaf, pos))});
    }
  }
  return run;
}

void TrustedCore::flush() {
  std::lock_guard lock(mu_);
  flush_locked();
}

void TrustedCore::flush_locked() {
  if (buffer_.empty()) throw PreconditionViolation("flush of an empty write buffer");
  std::vector<Record> l1 = read_verified_level(1);
  std::vector<Record> merged;
  merged.reserve(l1.size() + buffer_.size());
  std::merge(buffer_.begin(), buffer_.end(), l1.begin(), l1.end(), std::back_inserter(merged), RecordLess{});
  merged = apply_retention(std::move(merged), 1);

  Digest root;
  auto run = build_run(1, merged, root);
  store_->stage_run(LevelId{1}, std::move(run), root);

  st_.roots[0] = root;
  st_.level_bytes[0] = bytes_of(merged);
  st_.wal_digest = wal_base_digest();
  st_.wal_len = 0;
  st_.dirty = true;
  buffer_.clear();
  buffer_bytes_ = 0;
  seal_locked();

  store_->commit_run(LevelId{1});
  store_->wal_truncate(0);
  wal_end_ = 0;
  ++stats_.flushes;
  emit(CoreEvent::Kind::kFlush, 1);
  maybe_compact_locked();
}

void TrustedCore::compact(LevelId level) {
  std::lock_guard lock(mu_);
  compact_locked(level.index);
}

void TrustedCore::compact_locked(std::uint16_t i) {
  if (i < 1 || i >= config_.max_levels) {
    throw PreconditionViolation("compact needs 1 <= level < " + std::to_string(config_.max_levels));
  }
  if (st_.roots[i - 1] == empty_level_root()) return;
  std::vector<Record> upper = read_verified_level(i);
  std::vector<Record> lower = read_verified_level(i + 1);
  std::vector<Record> merged;
  merged.reserve(upper.size() + lower.size());
  std::merge(upper.begin(), upper.end(), lower.begin(), lower.end(), std::back_inserter(merged), RecordLess{});
  merged = apply_retention(std::move(merged), i + 1);

  Digest root;
  auto run = build_run(i + 1, merged, root);
  store_->stage_run(LevelId{static_cast<std::uint16_t>(i + 1)}, std::move(run), root);
  store_->stage_run(LevelId{i}, {}, empty_level_root());

  st_.roots[i] = root;
  st_.level_bytes[i] = bytes_of(merged);
  st_.roots[i - 1] = empty_level_root();
  st_.level_bytes[i - 1] = 0;
  st_.dirty = true;
  seal_locked();

  store_->commit_run(LevelId{static_cast<std::uint16_t>(i + 1)});
  store_->commit_run(LevelId{i});
  ++stats_.compactions;
  emit(CoreEvent::Kind::kCompact, i + 1);
}

void TrustedCore::maybe_compact_locked() {
  if (!config_.auto_compact) return;
  for (std::uint16_t i = 1; i < config_.max_levels; ++i) {
    if (st_.level_bytes[i - 1] > config_.level_limit(i)) compact_locked(i);
  }
}

void TrustedCore::bulk_load(const std::vector<std::vector<Record>>& levels) {
  std::lock_guard lock(mu_);
  if (levels.size() > config_.max_levels) throw InvalidArgument("more levels than the store has");
  if (!buffer_.empty() || st_.wal_len != 0 ||
      std::any_of(st_.roots.begin(), st_.roots.end(), [](const Digest& d) { return d != empty_level_root(); })) {
    throw PreconditionViolation("bulk load needs an empty store");
  }
  // Lower levels must hold strictly newer versions of any shared key.
  std::map<std::string, std::uint64_t> deeper_max;
  Timestamp max_ts = st_.global_ts;
  for (std::size_t i = levels.size(); i-- > 0;) {
    std::map<std::string, std::uint64_t> level_max;
    for (const auto& r : levels[i]) {
      validate_record(r);
      auto it = deeper_max.find(r.key.bytes());
      if (it != deeper_max.end() && r.ts.value <= it->second) {
        throw InvalidArgument("bulk load breaks temporal order for key " + r.key.bytes());
      }
      auto& m = level_max[r.key.bytes()];
      m = std::max(m, r.ts.value);
      max_ts = std::max(max_ts, r.ts);
    }
    for (const auto& [k, v] : level_max) deeper_max[k] = std::max(deeper_max[k], v);
  }

  std::vector<std::uint16_t> touched;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].empty()) continue;
    auto level = static_cast<std::uint16_t>(i + 1);
    Digest root;
    std::vector<RunRecord> run;
    try {
      run = build_run(level, levels[i], root);
    } catch (const TreeError& e) {
      throw InvalidArgument("bulk load level " + std::to_string(level) + ": " + e.what());
    }
    store_->stage_run(LevelId{level}, std::move(run), root);
    st_.roots[i] = root;
    st_.level_bytes[i] = bytes_of(levels[i]);
    touched.push_back(level);
  }
  st_.global_ts = max_ts;
  st_.dirty = true;
  seal_locked();
  for (auto level : touched) {
    store_->commit_run(LevelId{level});
    emit(CoreEvent::Kind::kBulkLoad, level);
  }
}

void TrustedCore::emit(CoreEvent::Kind kind, std::uint16_t level) {
  if (hook_) hook_(CoreEvent{kind, LevelId{level}});
}

void TrustedCore::set_event_hook(std::function<void(const CoreEvent&)> hook) {
  std::lock_guard lock(mu_);
  hook_ = std::move(hook);
}

// ---- reads ----

std::optional<Record> TrustedCore::buffer_lookup(const Key& key, Timestamp ts_q) const {
  auto it = buffer_.lower_bound(Record{key, {}, ts_q, false});
  if (it != buffer_.end() && it->key == key) return *it;
  return std::nullopt;
}

GetResult TrustedCore::get(const Key& key, Timestamp ts_q) {
  std::lock_guard lock(mu_);
  ++stats_.gets;
  GetResult out;
  if (auto r = buffer_lookup(key, ts_q)) {
    out.from_buffer = true;
    out.hit_level = LevelId{0};
    out.tombstone = r->tombstone;
    if (!r->tombstone) out.record = std::move(*r);
    return out;
  }

  GetResponse resp = store_->serve_get(key, ts_q);
  const std::uint16_t q = config_.max_levels;
  if (resp.entries.size() > q) reject(q, RejectReason::kMalformedProof);

  std::optional<Record> hit;
  for (std::size_t j = 0; j < resp.entries.size(); ++j) {
    const auto level = static_cast<std::uint16_t>(j + 1);
    const LevelEntry& entry = resp.entries[j];
    if (entry_level(entry).index != level) reject(level, RejectReason::kMalformedProof);
    if (hit) reject(level, RejectReason::kMalformedProof);  // nothing may follow the hit
    const Digest& root = st_.roots[j];
    Verdict v;
    if (const auto* nm = std::get_if<NonMembershipProof>(&entry)) {
      v = verify_non_membership(root, key, *nm);
      out.stats.hashes += hash_count(*nm);
      out.stats.proof_bytes += encode_proof(*nm).size();
    } else if (const auto* nv = std::get_if<NoVisibleVersionProof>(&entry)) {
      v = verify_no_visible_version(root, key, ts_q, *nv);
      out.stats.hashes += hash_count(*nv);
      out.stats.proof_bytes += encode_proof(*nv).size();
    } else {
      const auto& h = std::get<HitEntry>(entry);
      v = verify_membership(root, key, ts_q, h.record, h.proof);
      out.stats.hashes += hash_count(h.proof);
      out.stats.proof_bytes += encode_proof(h.proof).size() + encoded_size(h.record);
      hit = h.record;
    }
    if (!v) reject(level, *v.reject);
  }
  // Without a hit every non-empty level must have been covered.
  if (!hit) {
    for (std::size_t j = resp.entries.size(); j < q; ++j) {
      if (st_.roots[j] != empty_level_root()) reject(static_cast<std::uint16_t>(j + 1), RejectReason::kMalformedProof);
    }
  }

  out.stats.level_entries = static_cast<std::uint32_t>(resp.entries.size());
  stats_.bytes_verified += out.stats.proof_bytes;
  if (hit) {
    out.hit_level = LevelId{static_cast<std::uint16_t>(resp.entries.size())};
    out.tombstone = hit->tombstone;
    if (!hit->tombstone) out.record = std::move(hit);
  }
  return out;
}

ScanResult TrustedCore::scan(const Key& k1, const Key& k2, Timestamp ts_q) {
  if (k2 < k1) throw InvalidArgument("scan needs k1 <= k2");
  std::lock_guard lock(mu_);
  ++stats_.scans;
  ScanResult out;
  const std::uint16_t q = config_.max_levels;
  std::vector<RangeProof> proofs = store_->serve_scan(k1, k2, ts_q);
  if (proofs.size() != q) reject(static_cast<std::uint16_t>(std::min<std::size_t>(proofs.size() + 1, q)),
                                 RejectReason::kMalformedProof);

  std::map<Key, Record> best;
  auto offer = [&](const Record& r) {
    if (r.ts > ts_q || r.key < k1 || k2 < r.key) return;
    auto it = best.find(r.key);
    if (it == best.end()) {
      best.emplace(r.key, r);
    } else if (it->second.ts < r.ts) {
      it->second = r;
    }
  };
  for (std::uint16_t i = 1; i <= q; ++i) {
    const RangeProof& p = proofs[i - 1];
    if (p.level.index != i) reject(i, RejectReason::kMalformedProof);
    RangeVerdict v = verify_range(st_.roots[i - 1], k1, k2, p);
    if (!v) reject(i, *v.reject);
    out.stats.hashes += hash_count(p);
    out.stats.proof_bytes += encode_proof(p).size();
    for (const auto& r : v.records) offer(r);
  }
  for (auto it = buffer_.lower_bound(Record{k1, {}, Timestamp::latest(), false});
       it != buffer_.end() && !(k2 < it->key); ++it) {
    offer(*it);
  }
  out.stats.level_entries = q;
  stats_.bytes_verified += out.stats.proof_bytes;
  for (auto& [k, r] : best) {
    if (!r.tombstone) out.records.push_back(std::move(r));
  }
  return out;
}

// ---- rollback protection ----

void TrustedCore::bind_counter() {
  std::lock_guard lock(mu_);
  bind_locked();
}

void TrustedCore::bind_locked() {
  CounterValue cur = counter_->read();
  CounterValue next{cur.value + 1, state_hash(st_.roots, st_.wal_digest)};
  st_.binding = next;
  st_.writes_since_bind = 0;
  st_.dirty = false;
  // Seal first: a crash before the counter write leaves a pending bind that
  // recovery completes, never a sealed state that looks older than the counter.
  seal_locked();
  counter_->write(next);
  ++stats_.binds;
}

AuditReport TrustedCore::audit_rollback() {
  std::lock_guard lock(mu_);
  CounterValue c = counter_->read();
  if (st_.binding.value < c.value) {
    return {true, "sealed state binds counter " + std::to_string(st_.binding.value) + " but counter is at " +
                      std::to_string(c.value)};
  }
  if (st_.binding.value > c.value) {
    return {true, "sealed state is ahead of the counter"};
  }
  if (st_.binding.hash != c.hash) return {true, "state hash at counter " + std::to_string(c.value) + " differs"};
  if (!st_.dirty && state_hash(st_.roots, st_.wal_digest) != c.hash) {
    return {true, "current state does not match the bound state hash"};
  }
  return {false, "counter " + std::to_string(c.value) + " matches"};
}

std::vector<FsckLevel> TrustedCore::fsck() {
  std::lock_guard lock(mu_);
  std::vector<FsckLevel> out;
  for (std::uint16_t i = 1; i <= config_.max_levels; ++i) {
    FsckLevel f;
    f.level = LevelId{i};
    f.expected = st_.roots[i - 1];
    try {
      auto stream = store_->stream_level(f.level);
      StreamingTreeBuilder builder;
      while (auto t = stream->next()) {
        builder.add(t->record);
        ++f.records;
      }
      f.actual = builder.finish();
    } catch (const std::exception& e) {
      f.error = e.what();
    }
    out.push_back(std::move(f));
  }
  return out;
}

// ---- accessors ----

std::vector<Digest> TrustedCore::roots() const {
  std::lock_guard lock(mu_);
  return st_.roots;
}

Digest TrustedCore::wal_digest() const {
  std::lock_guard lock(mu_);
  return st_.wal_digest;
}

std::uint64_t TrustedCore::wal_len() const {
  std::lock_guard lock(mu_);
  return st_.wal_len;
}

Timestamp TrustedCore::global_ts() const {
  std::lock_guard lock(mu_);
  return st_.global_ts;
}

Digest TrustedCore::current_state_hash() const {
  std::lock_guard lock(mu_);
  return state_hash(st_.roots, st_.wal_digest);
}

std::vector<Record> TrustedCore::buffer() const {
  std::lock_guard lock(mu_);
  return {buffer_.begin(), buffer_.end()};
}

std::uint64_t TrustedCore::buffer_bytes() const {
  std::lock_guard lock(mu_);
  return buffer_bytes_;
}

std::vector<std::uint64_t> TrustedCore::level_bytes() const {
  std::lock_guard lock(mu_);
  return st_.level_bytes;
}

CoreStats TrustedCore::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

SealedState TrustedCore::sealed_state() const {
  std::lock_guard lock(mu_);
  return st_;
}

}  // namespace elsm
