#include "elsm/adversary.h"

#include <algorithm>
#include <fstream>
#include <set>

#include "elsm/encoding.h"
#include "elsm/errors.h"
#include "elsm/run_file.h"
#include "elsm/shadow_model.h"
#include "elsm/bench.h"
#include "elsm/wal.h"

namespace elsm {

namespace fs = std::filesystem;

namespace {

struct KindInfo {
  AttackKind kind;
  std::string_view name;
  ExpectedVerdict expected;
};

constexpr KindInfo kKinds[] = {
    {AttackKind::kIdentity, "Identity", ExpectedVerdict::kNoAlarm},
    {AttackKind::kTamperValue, "TamperValue", ExpectedVerdict::kVerificationFailed},
    {AttackKind::kStaleResult, "StaleResult", ExpectedVerdict::kVerificationFailed},
    {AttackKind::kOmitRecord, "OmitRecord", ExpectedVerdict::kVerificationFailed},
    {AttackKind::kDropLevelEntry, "DropLevelEntry", ExpectedVerdict::kVerificationFailed},
    {AttackKind::kForgeRangeGap, "ForgeRangeGap", ExpectedVerdict::kVerificationFailed},
    {AttackKind::kRollbackSnapshot, "RollbackSnapshot", ExpectedVerdict::kRollbackDetected},
    {AttackKind::kWalTamper, "WalTamper", ExpectedVerdict::kWalMismatch},
    {AttackKind::kWalTruncateTail, "WalTruncateTail", ExpectedVerdict::kWindowedLoss},
    {AttackKind::kCrossLevelRootReplay, "CrossLevelRootReplay", ExpectedVerdict::kVerificationFailed},
};

const KindInfo& info(AttackKind k) {
  for (const auto& i : kKinds) {
    if (i.kind == k) return i;
  }
  return kKinds[0];
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void relabel(LevelEntry& e, LevelId level) {
  std::visit(
      [level](auto& v) {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, HitEntry>) {
          v.proof.level = level;
        } else {
          v.level = level;
        }
      },
      e);
}

}  // namespace

std::string_view to_string(AttackKind k) { return info(k).name; }

std::optional<AttackKind> parse_attack_kind(std::string_view name) {
  for (const auto& i : kKinds) {
    if (i.name == name) return i.kind;
  }
  return std::nullopt;
}

const std::vector<AttackKind>& all_attack_kinds() {
  static const std::vector<AttackKind> kinds = [] {
    std::vector<AttackKind> v;
    for (const auto& i : kKinds) {
      if (i.kind != AttackKind::kIdentity) v.push_back(i.kind);
    }
    return v;
  }();
  return kinds;
}

std::string_view to_string(ExpectedVerdict v) {
  switch (v) {
    case ExpectedVerdict::kNoAlarm: return "NoAlarm";
    case ExpectedVerdict::kVerificationFailed: return "Detected(VerificationFailed)";
    case ExpectedVerdict::kWalMismatch: return "Detected(WalMismatch)";
    case ExpectedVerdict::kRollbackDetected: return "Detected(RollbackDetected)";
    case ExpectedVerdict::kWindowedLoss: return "WindowedLoss";
  }
  return "?";
}

ExpectedVerdict expected_verdict(AttackKind k) { return info(k).expected; }

// ---- file helpers ----

DirectorySnapshot DirectorySnapshot::take(const fs::path& dir) {
  DirectorySnapshot s;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file()) s.files_[e.path().filename().string()] = read_file(e.path());
  }
  return s;
}

void DirectorySnapshot::restore(const fs::path& dir) const {
  std::vector<fs::path> extra;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && !files_.count(e.path().filename().string())) extra.push_back(e.path());
  }
  for (const auto& p : extra) fs::remove(p);
  for (const auto& [name, bytes] : files_) write_file_atomic(dir / name, bytes, false);
}

namespace {

void overwrite_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot rewrite " + path.string());
}

}  // namespace

void tamper_run_value(const fs::path& run_file, std::size_t index, std::size_t byte) {
  std::string bytes = read_file(run_file);
  std::size_t off = run_value_offset(bytes, index) + byte;
  if (off >= bytes.size()) throw InvalidArgument("tamper offset outside the run file");
  bytes[off] = static_cast<char>(bytes[off] ^ 0x01);
  overwrite_file(run_file, bytes);
}

void tamper_wal_frame(const fs::path& wal_file, std::size_t frame, std::size_t byte, bool fix_crc) {
  std::string bytes = read_file(wal_file);
  WalContents c = parse_wal(bytes);
  if (frame >= c.offsets.size()) throw InvalidArgument("no such WAL frame");
  const std::size_t start = c.offsets[frame];
  ByteReader hdr(std::string_view(bytes).substr(start, 4));
  const std::uint32_t len = hdr.u32le();
  const std::size_t frame_size = 8 + std::size_t{len};
  if (byte >= frame_size) throw InvalidArgument("tamper offset outside the WAL frame");
  bytes[start + byte] = static_cast<char>(bytes[start + byte] ^ 0x01);
  if (fix_crc) {
    std::string crc;
    put_u32le(crc, crc32_of(std::string_view(bytes).substr(start + 4, len)));
    bytes.replace(start + 4 + len, 4, crc);
  }
  overwrite_file(wal_file, bytes);
}

// ---- interceptor ----

AdversarialStore::AdversarialStore(std::shared_ptr<FileStore> inner) : inner_(std::move(inner)) {
  if (!inner_) throw InvalidArgument("adversary needs a store to wrap");
}

void AdversarialStore::clear() {
  attack_.reset();
  target_ = {};
  snapshot_.reset();
  replay_from_ = 0;
}

std::vector<Key> AdversarialStore::stored_keys(bool exclude_wal) const {
  std::set<Key> keys;
  for (std::uint16_t i = 1; i <= inner_->max_levels(); ++i) {
    for (const auto& leaf : inner_->snapshot(LevelId{i})->tree.leaves()) keys.insert(leaf.key());
  }
  if (exclude_wal) {
    // Keys with writes still in the WAL are answered from the trusted buffer.
    for (const auto& r : inner_->wal_stream(0).records) keys.erase(r.key);
  }
  return {keys.begin(), keys.end()};
}

Key AdversarialStore::pick_key(const std::vector<Key>& candidates) {
  if (attack_->key) {
    Key k(*attack_->key);
    if (std::find(candidates.begin(), candidates.end(), k) == candidates.end()) {
      throw SelectorUnresolvable("key '" + *attack_->key + "' is not a usable " +
                                 std::string(to_string(attack_->kind)) + " target");
    }
    return k;
  }
  if (candidates.empty()) {
    throw SelectorUnresolvable("store holds no usable " + std::string(to_string(attack_->kind)) + " target");
  }
  return candidates[uniform_below(rng_, candidates.size())];
}

const ResolvedTarget& AdversarialStore::inject(const Attack& attack) {
  clear();
  attack_ = attack;
  rng_.seed(attack.seed);
  try {
    switch (attack.kind) {
      case AttackKind::kIdentity:
        break;
      case AttackKind::kStaleResult:
        resolve_point(true);
        break;
      case AttackKind::kOmitRecord:
      case AttackKind::kDropLevelEntry:
        resolve_point(false);
        break;
      case AttackKind::kTamperValue:
        resolve_tamper_value();
        break;
      case AttackKind::kForgeRangeGap:
        resolve_range();
        break;
      case AttackKind::kCrossLevelRootReplay:
        resolve_cross_level();
        break;
      case AttackKind::kWalTamper:
        resolve_wal_tamper();
        break;
      case AttackKind::kRollbackSnapshot:
      case AttackKind::kWalTruncateTail:
        snapshot_ = DirectorySnapshot::take(inner_->dir());
        target_.detail = "snapshot of " + inner_->dir().string();
        break;
    }
  } catch (...) {
    attack_.reset();
    throw;
  }
  return target_;
}

void AdversarialStore::apply_rollback() const {
  if (!snapshot_) throw PreconditionViolation("no rollback attack armed");
  snapshot_->restore(inner_->dir());
}

void AdversarialStore::resolve_point(bool need_versions) {
  std::vector<Key> candidates = stored_keys(true);
  if (need_versions) {
    std::vector<Key> multi;
    for (const auto& k : candidates) {
      std::size_t versions = 0;
      for (std::uint16_t i = 1; i <= inner_->max_levels(); ++i) {
        const auto& tree = inner_->snapshot(LevelId{i})->tree;
        if (auto idx = tree.find(k)) versions += tree.leaves()[*idx].chain.size();
      }
      if (versions >= 2) multi.push_back(k);
    }
    candidates = std::move(multi);
  }
  target_.key = pick_key(candidates);
  if (attack_->kind == AttackKind::kOmitRecord) {
    target_.use_scan = (rng_() & 1) != 0;
    if (target_.use_scan) target_.end_key = target_.key;
  }
  target_.detail = "key " + target_.key->bytes();
}

void AdversarialStore::resolve_tamper_value() {
  struct Site {
    std::uint16_t level;
    std::size_t index;
  };
  std::vector<Site> sites;
  for (std::uint16_t i = 1; i <= inner_->max_levels(); ++i) {
    auto run = inner_->snapshot(LevelId{i});
    for (std::size_t j = 0; j < run->records.size(); ++j) {
      const Record& r = run->records[j].record;
      if (r.tombstone || r.value.empty()) continue;
      if (attack_->key && r.key.bytes() != *attack_->key) continue;
      sites.push_back({i, j});
    }
  }
  if (sites.empty()) throw SelectorUnresolvable("no stored record with a value to tamper with");
  const Site s = sites[uniform_below(rng_, sites.size())];
  const Record r = inner_->snapshot(LevelId{s.level})->records[s.index].record;
  tamper_run_value(inner_->run_path(LevelId{s.level}), s.index, uniform_below(rng_, r.value.size()));
  inner_->reload();
  target_.key = r.key;
  target_.ts_q = r.ts;
  target_.level = LevelId{s.level};
  target_.detail = "value of " + to_string(r) + " at L" + std::to_string(s.level);
}

void AdversarialStore::resolve_wal_tamper() {
  WalContents c = parse_wal(fs::exists(inner_->wal_path()) ? read_file(inner_->wal_path()) : std::string());
  if (c.offsets.empty()) throw SelectorUnresolvable("WAL holds no frames");
  const std::size_t frame = uniform_below(rng_, c.offsets.size());
  const std::uint64_t frame_end = frame + 1 < c.offsets.size() ? c.offsets[frame + 1] : c.end_offset;
  const std::uint64_t size = frame_end - c.offsets[frame];
  const bool fix_crc = (rng_() & 1) != 0;
  // With the checksum repaired, only damage inside the record body is kept.
  const std::size_t byte = fix_crc ? 4 + uniform_below(rng_, size - 8) : uniform_below(rng_, size);
  tamper_wal_frame(inner_->wal_path(), frame, byte, fix_crc);
  target_.detail = "WAL frame " + std::to_string(frame) + " byte " + std::to_string(byte) +
                   (fix_crc ? " (crc fixed)" : "");
}

void AdversarialStore::resolve_range() {
  std::vector<Key> keys = stored_keys(false);
  if (attack_->key) {
    target_.key = pick_key(keys);
    target_.end_key = target_.key;
  } else {
    if (keys.empty()) throw SelectorUnresolvable("store is empty");
    std::size_t a = uniform_below(rng_, keys.size());
    std::size_t b = std::min(keys.size() - 1, a + uniform_below(rng_, 4));
    target_.key = keys[a];
    target_.end_key = keys[b];
  }
  target_.use_scan = true;
  target_.detail = "range [" + target_.key->bytes() + ", " + target_.end_key->bytes() + "]";
}

void AdversarialStore::resolve_cross_level() {
  std::vector<Key> candidates = stored_keys(true);
  if (attack_->key) candidates = {pick_key(candidates)};
  if (candidates.empty()) throw SelectorUnresolvable("store holds no keys outside the WAL");
  const std::size_t start = uniform_below(rng_, candidates.size());
  for (std::size_t n = 0; n < candidates.size(); ++n) {
    const Key& k = candidates[(start + n) % candidates.size()];
    GetResponse honest = inner_->serve_get(k, Timestamp::latest());
    if (honest.entries.empty()) continue;
    auto i = static_cast<std::uint16_t>(1 + uniform_below(rng_, honest.entries.size()));
    const Digest served_root = inner_->snapshot(LevelId{i})->tree.root();
    std::vector<std::uint16_t> sources;
    for (std::uint16_t j = 1; j <= inner_->max_levels(); ++j) {
      const auto& tree = inner_->snapshot(LevelId{j})->tree;
      if (j != i && !tree.empty() && tree.root() != served_root) sources.push_back(j);
    }
    if (sources.empty()) continue;
    replay_from_ = sources[uniform_below(rng_, sources.size())];
    target_.key = k;
    target_.level = LevelId{i};
    target_.detail = "key " + k.bytes() + ": L" + std::to_string(replay_from_) + " answer served as L" +
                     std::to_string(i);
    return;
  }
  throw SelectorUnresolvable("no key with two distinct levels to swap");
}

NonMembershipProof AdversarialStore::forge_absence(const LoadedRun& run, std::size_t leaf) const {
  const LevelTree& tree = run.tree;
  NonMembershipProof p;
  p.level = run.level;
  if (leaf > 0) p.left = Neighbor{tree.opening(leaf - 1), leaf - 1, tree.path(leaf - 1)};
  if (leaf + 1 < tree.leaf_count()) p.right = Neighbor{tree.opening(leaf + 1), leaf + 1, tree.path(leaf + 1)};
  return p;
}

void AdversarialStore::continue_below(GetResponse& resp, const Key& key, Timestamp ts_q,
                                      std::uint16_t from_level) const {
  std::uint16_t deepest = 0;
  for (std::uint16_t i = 1; i <= inner_->max_levels(); ++i) {
    if (!inner_->snapshot(LevelId{i})->tree.empty()) deepest = i;
  }
  for (std::uint16_t i = from_level; i <= deepest; ++i) {
    resp.entries.push_back(answer_level(*inner_->snapshot(LevelId{i}), key, ts_q));
    if (std::holds_alternative<HitEntry>(resp.entries.back())) {
      resp.hit_level = LevelId{i};
      return;
    }
  }
}

GetResponse AdversarialStore::serve_get(const Key& key, Timestamp ts_q) {
  GetResponse resp = inner_->serve_get(key, ts_q);
  if (!attack_ || !target_.key || !(*target_.key == key) || target_.use_scan) return resp;

  switch (attack_->kind) {
    case AttackKind::kStaleResult:
    case AttackKind::kOmitRecord: {
      if (!resp.hit_level) return resp;
      const std::uint16_t h = resp.hit_level->index;
      auto run = inner_->snapshot(LevelId{h});
      const std::size_t leaf = *run->tree.find(key);
      const auto& chain = run->tree.leaves()[leaf].chain;
      const Record served = std::get<HitEntry>(resp.entries.back()).record;
      std::size_t pos = 0;
      while (pos < chain.size() && !(chain[pos] == served)) ++pos;
      if (attack_->kind == AttackKind::kStaleResult && pos + 1 < chain.size()) {
        // An older version of the same leaf, with its genuine proof.
        resp.entries.back() = HitEntry{chain[pos + 1], run->tree.membership_at(leaf, pos + 1)};
      } else {
        // Claim the key is absent here and answer from deeper levels.
        resp.entries.back() = forge_absence(*run, leaf);
        resp.hit_level.reset();
        continue_below(resp, key, ts_q, static_cast<std::uint16_t>(h + 1));
      }
      ++mutations_;
      break;
    }
    case AttackKind::kDropLevelEntry:
      if (!resp.entries.empty()) {
        resp.entries.erase(resp.entries.begin() +
                           static_cast<std::ptrdiff_t>(uniform_below(rng_, resp.entries.size())));
        ++mutations_;
      }
      break;
    case AttackKind::kCrossLevelRootReplay: {
      const std::uint16_t i = target_.level->index;
      if (i <= resp.entries.size()) {
        LevelEntry forged = answer_level(*inner_->snapshot(LevelId{replay_from_}), key, ts_q);
        relabel(forged, LevelId{i});
        resp.entries[i - 1] = std::move(forged);
        ++mutations_;
      }
      break;
    }
    default:
      break;
  }
  return resp;
}

std::vector<RangeProof> AdversarialStore::serve_scan(const Key& k1, const Key& k2, Timestamp ts_q) {
  std::vector<RangeProof> proofs = inner_->serve_scan(k1, k2, ts_q);
  if (!attack_ || !target_.use_scan || !target_.key || !(*target_.key == k1) || !(*target_.end_key == k2)) {
    return proofs;
  }
  if (attack_->kind == AttackKind::kOmitRecord) {
    for (auto& p : proofs) {
      auto it = std::find_if(p.covered.begin(), p.covered.end(),
                             [&](const std::vector<Record>& chain) { return chain.front().key == k1; });
      if (it == p.covered.end()) continue;
      if (it->size() > 1) {
        it->pop_back();
      } else {
        p.covered.erase(it);
      }
      ++mutations_;
      break;
    }
  } else if (attack_->kind == AttackKind::kForgeRangeGap) {
    std::vector<std::size_t> nonempty;
    for (std::size_t i = 0; i < proofs.size(); ++i) {
      if (!proofs[i].covered.empty()) nonempty.push_back(i);
    }
    if (!nonempty.empty()) {
      auto& p = proofs[nonempty[uniform_below(rng_, nonempty.size())]];
      p.covered.erase(p.covered.begin() + static_cast<std::ptrdiff_t>(uniform_below(rng_, p.covered.size())));
      ++mutations_;
    }
  }
  return proofs;
}

// ---- campaign ----

bool CampaignRow::as_expected() const {
  switch (expected) {
    case ExpectedVerdict::kNoAlarm: return false_alarms == 0 && false_accepts == 0;
    case ExpectedVerdict::kWindowedLoss: return windowed == trials && false_accepts == 0;
    default: return detected == trials && false_accepts == 0;
  }
}

bool CampaignReport::all_as_expected() const {
  return std::all_of(rows.begin(), rows.end(), [](const CampaignRow& r) { return r.as_expected(); });
}

namespace {

struct Paths {
  fs::path root;
  fs::path untrusted() const { return root / "untrusted"; }
  fs::path counter() const { return root / "trusted" / "counter.bin"; }
};

struct Opened {
  std::shared_ptr<FileStore> files;
  std::shared_ptr<AdversarialStore> adversary;
  std::unique_ptr<TrustedCore> core;
};

Opened open_all(const Paths& p, const CoreConfig& cfg) {
  Opened o;
  o.files = FileStore::open(p.untrusted(), StoreOptions{cfg.max_levels, false});
  o.adversary = std::make_shared<AdversarialStore>(o.files);
  o.core = TrustedCore::open(o.adversary, std::make_shared<CounterDevice>(p.counter()), cfg);
  return o;
}

void random_writes(TrustedCore& core, std::mt19937_64& rng, std::uint64_t n, const WorkloadSpec& w) {
  for (std::uint64_t i = 0; i < n; ++i) {
    core.put(Key(make_key(uniform_below(rng, w.record_count), w.key_len)), "adv-" + std::to_string(rng()));
  }
}

void run_trial(AttackKind kind, std::uint64_t seed, const Paths& p, const ShadowModel& oracle,
               const CampaignConfig& cfg, const CoreConfig& core_cfg, CampaignRow& row) {
  std::mt19937_64 rng(seed);
  const Attack attack{kind, std::nullopt, seed};
  switch (kind) {
    case AttackKind::kIdentity: {
      Opened o = open_all(p, core_cfg);
      o.adversary->inject(attack);
      std::vector<Key> keys = oracle.keys();
      for (int n = 0; n < 8; ++n) {
        const Key& k = keys[uniform_below(rng, keys.size())];
        try {
          if (rng() & 1) {
            const Key& k2 = keys[std::min(keys.size() - 1, uniform_below(rng, keys.size()))];
            const Key& lo = k < k2 ? k : k2;
            const Key& hi = k < k2 ? k2 : k;
            if (o.core->scan(lo, hi).records != oracle.scan(lo, hi)) ++row.false_accepts;
          } else {
            auto r = o.core->get(k);
            auto want = oracle.get(k);
            if (r.record.has_value() != want.has_value() || (want && !(*r.record == *want))) ++row.false_accepts;
          }
        } catch (const Error&) {
          ++row.false_alarms;
        }
      }
      return;
    }
    case AttackKind::kTamperValue:
    case AttackKind::kStaleResult:
    case AttackKind::kOmitRecord:
    case AttackKind::kDropLevelEntry:
    case AttackKind::kForgeRangeGap:
    case AttackKind::kCrossLevelRootReplay: {
      Opened o = open_all(p, core_cfg);
      const ResolvedTarget& t = o.adversary->inject(attack);
      try {
        bool correct;
        if (t.use_scan) {
          correct = o.core->scan(*t.key, *t.end_key, t.ts_q).records == oracle.scan(*t.key, *t.end_key, t.ts_q);
        } else {
          auto r = o.core->get(*t.key, t.ts_q);
          auto want = oracle.get(*t.key, t.ts_q);
          correct = r.record.has_value() == want.has_value() && (!want || *r.record == *want);
        }
        ++row.missed;
        if (!correct) ++row.false_accepts;
      } catch (const VerificationFailed&) {
        ++row.detected;
      }
      return;
    }
    case AttackKind::kWalTamper: {
      {
        std::shared_ptr<FileStore> files = FileStore::open(p.untrusted(), StoreOptions{core_cfg.max_levels, false});
        AdversarialStore adv(files);
        adv.inject(attack);
      }
      try {
        open_all(p, core_cfg);
        ++row.missed;
      } catch (const WalMismatch&) {
        ++row.detected;
      }
      return;
    }
    case AttackKind::kRollbackSnapshot:
    case AttackKind::kWalTruncateTail: {
      const bool detect_case = kind == AttackKind::kRollbackSnapshot;
      std::shared_ptr<AdversarialStore> adv;
      Timestamp at_snapshot;
      {
        Opened o = open_all(p, core_cfg);
        adv = o.adversary;
        o.core->bind_counter();
        if (!detect_case) random_writes(*o.core, rng, uniform_below(rng, 5), cfg.workload);
        adv->inject(attack);
        at_snapshot = o.core->global_ts();
        random_writes(*o.core, rng, 1 + uniform_below(rng, detect_case ? 20 : 10), cfg.workload);
        if (detect_case) o.core->bind_counter();
      }
      adv->apply_rollback();
      adv.reset();
      Opened o = open_all(p, core_cfg);
      AuditReport audit = o.core->audit_rollback();
      if (audit.rollback) {
        ++row.detected;
      } else if (o.core->global_ts() == at_snapshot) {
        ++row.windowed;
      } else {
        ++row.missed;
      }
      return;
    }
  }
}

}  // namespace

CampaignConfig default_campaign(fs::path work_dir, std::uint64_t trials, std::uint64_t seed) {
  CampaignConfig c;
  c.workload.record_count = 300;
  c.workload.op_count = 900;
  c.workload.read_ratio = 0.3;
  c.workload.distribution = Distribution::kZipfian;
  c.workload.seed = seed;
  c.core.max_levels = 5;
  c.core.l0_capacity = 4096;
  c.core.growth_factor = 4;
  c.trials = trials;
  c.kinds = all_attack_kinds();
  c.kinds.insert(c.kinds.begin(), AttackKind::kIdentity);
  c.seed = seed;
  c.work_dir = std::move(work_dir);
  return c;
}

CampaignReport run_campaign(const CampaignConfig& cfg) {
  CampaignReport report;
  if (cfg.kinds.empty()) return report;
  if (cfg.work_dir.empty()) throw InvalidArgument("campaign needs a work directory");

  // Binding only on demand, so the rollback window is exactly what the
  // scenario sets up.
  CoreConfig core_cfg = cfg.core;
  core_cfg.bind_interval = 0;

  const Paths base{cfg.work_dir / "base"};
  const Paths trial{cfg.work_dir / "trial"};
  fs::remove_all(base.root);
  ShadowModel oracle;
  {
    Opened o = open_all(base, core_cfg);
    BenchMetrics m = run_bench(*o.core, cfg.workload, &oracle);
    if (m.aborted || m.oracle_mismatches) throw Error("campaign base workload failed: " + m.abort_reason);
    if (o.core->buffer_bytes() > 0) o.core->flush();
    // Leave some admitted writes in the WAL for the log attacks.
    std::mt19937_64 rng(cfg.seed);
    for (int i = 0; i < 16; ++i) {
      Key k(make_key(uniform_below(rng, cfg.workload.record_count), cfg.workload.key_len));
      std::string v = "wal-" + std::to_string(i);
      Timestamp ts = o.core->put(k, v);
      oracle.apply(Record::put(k, v, ts));
    }
  }

  for (AttackKind kind : cfg.kinds) {
    CampaignRow row{kind, expected_verdict(kind)};
    for (std::uint64_t t = 0; t < cfg.trials; ++t) {
      const std::uint64_t seed = splitmix64(cfg.seed ^ splitmix64((static_cast<std::uint64_t>(kind) << 32) | t));
      fs::remove_all(trial.root);
      fs::copy(base.root, trial.root, fs::copy_options::recursive);
      ++row.trials;
      try {
        run_trial(kind, seed, trial, oracle, cfg, core_cfg, row);
      } catch (const SelectorUnresolvable&) {
        ++row.missed;
      }
    }
    report.rows.push_back(row);
  }
  fs::remove_all(trial.root);
  return report;
}

std::string format_report(const CampaignReport& report) {
  std::string out = "kind trials detected missed windowed false_accepts false_alarms expected result\n";
  for (const auto& r : report.rows) {
    out += std::string(to_string(r.kind)) + ' ' + std::to_string(r.trials) + ' ' + std::to_string(r.detected) + ' ' +
           std::to_string(r.missed) + ' ' + std::to_string(r.windowed) + ' ' + std::to_string(r.false_accepts) + ' ' +
           std::to_string(r.false_alarms) + ' ' + std::string(to_string(r.expected)) + ' ' +
           (r.as_expected() ? "ok" : "FAIL") + '\n';
  }
  return out;
}

}  // namespace elsm
