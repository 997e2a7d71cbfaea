#include <gtest/gtest.h>

#include <random>

#include "elsm/errors.h"
#include "elsm/hash.h"
#include "elsm/shadow_model.h"
#include "elsm/trusted_core.h"
#include "test_support.h"

namespace elsm {
namespace {

using test::open_core;
using test::TempDir;

std::vector<Record> level_contents(UntrustedStore& store, std::uint16_t level) {
  std::vector<Record> out;
  auto s = store.stream_level(LevelId{level});
  while (auto t = s->next()) out.push_back(t->record);
  return out;
}

class ExampleDataset : public ::testing::Test {
 protected:
  void SetUp() override {
    o = open_core(dir.path(), test::example_config());
    o.core->bulk_load(test::example_levels());
  }
  TempDir dir;
  test::Opened o;
};

TEST_F(ExampleDataset, GetZStopsAtLevelTwo) {
  auto r = o.core->get("Z");
  ASSERT_TRUE(r.record);
  EXPECT_EQ(*r.record, Record::put("Z", "z7", {7}));
  EXPECT_EQ(r.hit_level, LevelId{2});
  EXPECT_EQ(r.stats.level_entries, 2u);
  EXPECT_FALSE(r.from_buffer);
}

TEST_F(ExampleDataset, GetBProvesAbsenceEverywhere) {
  auto r = o.core->get("B");
  EXPECT_FALSE(r.record);
  EXPECT_EQ(r.stats.level_entries, 3u);
}

TEST_F(ExampleDataset, HistoricalReads) {
  EXPECT_EQ(o.core->get("Z", {6}).record->value, "z6");
  EXPECT_EQ(o.core->get("Z", {5}).record->value, "z1");
  EXPECT_EQ(o.core->get("A", {8}).record->value, "a2");
  EXPECT_EQ(o.core->get("T", {0}).record->value, "t0");
  EXPECT_FALSE(o.core->get("Y", {2}).record);
}

TEST_F(ExampleDataset, ScanAndCompaction) {
  auto s = o.core->scan("S", "U");
  ASSERT_EQ(s.records.size(), 1u);
  EXPECT_EQ(s.records[0], Record::put("T", "t4", {4}));

  o.core->compact({2});
  std::vector<Record> want{Record::put("A", "a2", {2}), Record::put("T", "t4", {4}), Record::put("T", "t0", {0}),
                           Record::put("Y", "y3", {3}), Record::put("Z", "z7", {7}), Record::put("Z", "z6", {6}),
                           Record::put("Z", "z1", {1})};
  EXPECT_EQ(level_contents(*o.files, 3), want);
  EXPECT_EQ(o.core->roots()[1], empty_level_root());
  EXPECT_EQ(o.core->roots()[2].hex(), "c72b627c761dd0f9344f916c60a51757ad26fd8f603d74f8b4fe28427a99f4dc");
  auto all = o.core->scan("A", "Z");
  ASSERT_EQ(all.records.size(), 4u);
  EXPECT_EQ(all.records[0].value, "a9");
  EXPECT_EQ(o.core->get("Z").hit_level, LevelId{3});
}

TEST_F(ExampleDataset, WritesGetFreshTimestamps) {
  EXPECT_EQ(o.core->put("Y", "y10").value, 10u);
  auto r = o.core->get("Y");
  EXPECT_TRUE(r.from_buffer);
  EXPECT_EQ(r.record->value, "y10");
  EXPECT_EQ(o.core->del("Y").value, 11u);
  EXPECT_FALSE(o.core->get("Y").record);
  EXPECT_EQ(o.core->get("Y", {10}).record->value, "y10");
  o.core->flush();
  EXPECT_FALSE(o.core->get("Y").record);
  EXPECT_TRUE(o.core->get("Y").tombstone);
  EXPECT_EQ(o.core->get("Y", {10}).record->value, "y10");
  EXPECT_EQ(o.core->get("Y", {9}).record->value, "y3");
}

TEST_F(ExampleDataset, BulkLoadPreconditions) {
  EXPECT_THROW(o.core->bulk_load(test::example_levels()), PreconditionViolation);
  TempDir other;
  auto p = open_core(other.path(), test::example_config());
  std::vector<std::vector<Record>> inverted{{Record::put("A", "", {1})}, {Record::put("A", "", {5})}};
  EXPECT_THROW(p.core->bulk_load(inverted), InvalidArgument);
  std::vector<std::vector<Record>> unsorted{{Record::put("B", "", {1}), Record::put("A", "", {1})}};
  EXPECT_THROW(p.core->bulk_load(unsorted), InvalidArgument);
}

TEST_F(ExampleDataset, FsckAndAudit) {
  for (const auto& f : o.core->fsck()) EXPECT_TRUE(f.ok()) << f.level.index;
  EXPECT_FALSE(o.core->audit_rollback().rollback);
}

TEST(TrustedCore, PreconditionsAndConfig) {
  TempDir dir;
  auto o = open_core(dir.path(), test::small_config(3));
  EXPECT_THROW(o.core->flush(), PreconditionViolation);
  EXPECT_THROW(o.core->compact({3}), PreconditionViolation);
  EXPECT_THROW(o.core->compact({0}), PreconditionViolation);
  EXPECT_THROW(o.core->scan("b", "a"), InvalidArgument);
  auto wrong = test::small_config(4);
  EXPECT_THROW(TrustedCore::open(o.files, o.counter, wrong), InvalidArgument);
}

// Random mixed workload against the model, checking the level invariant on
// every install.
void run_random(Retention retention, std::uint64_t seed) {
  TempDir dir;
  auto cfg = test::small_config(4);
  cfg.retention = retention;
  auto o = open_core(dir.path(), cfg);
  ShadowModel model;
  std::size_t installs = 0, violations = 0;
  o.core->set_event_hook([&](const CoreEvent&) {
    ++installs;
    violations += test::temporal_violations(*o.files, cfg.max_levels);
  });
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> probe_ts;
  for (int i = 0; i < 3000; ++i) {
    Key k("key" + std::to_string(rng() % 150));
    auto roll = rng() % 10;
    if (roll < 6) {
      std::string v(8 + rng() % 24, static_cast<char>('a' + rng() % 26));
      model.apply(Record::put(k, v, o.core->put(k, v)));
    } else if (roll < 7) {
      model.apply(Record::erase(k, o.core->del(k)));
    } else if (roll < 9) {
      ASSERT_EQ(o.core->get(k).record, model.get(k)) << i;
    } else {
      Key e("key" + std::to_string(rng() % 150));
      if (e < k) std::swap(k, e);
      ASSERT_EQ(o.core->scan(k, e).records, model.scan(k, e)) << i;
    }
    if (i % 500 == 0) probe_ts.push_back(o.core->global_ts().value);
  }
  EXPECT_GT(installs, 10u);
  EXPECT_EQ(violations, 0u);
  EXPECT_EQ(test::diff_against(*o.core, model), "");
  if (retention == Retention::kAllVersions) {
    for (auto ts : probe_ts) EXPECT_EQ(test::diff_against(*o.core, model, {ts}), "") << ts;
  }
  for (const auto& f : o.core->fsck()) EXPECT_TRUE(f.ok());
}

TEST(TrustedCore, RandomOpsMatchModelAllVersions) { run_random(Retention::kAllVersions, 1); }
TEST(TrustedCore, RandomOpsMatchModelLatestOnly) { run_random(Retention::kLatestOnly, 2); }

TEST(TrustedCore, LatestOnlyKeepsOneVersionAndDropsDeadTombstones) {
  TempDir dir;
  auto cfg = test::small_config(2);
  cfg.retention = Retention::kLatestOnly;
  cfg.auto_compact = false;
  auto o = open_core(dir.path(), cfg);
  o.core->put("a", "1");
  o.core->put("a", "2");
  o.core->put("b", "1");
  o.core->del("b");
  o.core->flush();
  // L2 is empty, so the tombstone for b has nothing left to shadow.
  auto l1 = level_contents(*o.files, 1);
  ASSERT_EQ(l1.size(), 1u);
  EXPECT_EQ(l1[0].value, "2");
  o.core->compact({1});
  o.core->del("a");
  o.core->flush();
  // L2 still holds a, so the tombstone stays.
  auto again = level_contents(*o.files, 1);
  ASSERT_EQ(again.size(), 1u);
  EXPECT_TRUE(again[0].tombstone);
  EXPECT_FALSE(o.core->get("a").record);
  o.core->compact({1});
  EXPECT_TRUE(level_contents(*o.files, 2).empty());
}

TEST(TrustedCore, AutoFlushAndCompactionRespectLimits) {
  TempDir dir;
  auto cfg = test::small_config(4);
  auto o = open_core(dir.path(), cfg);
  for (int i = 0; i < 2000; ++i) o.core->put(Key("k" + std::to_string(i % 300)), std::string(20, 'v'));
  auto st = o.core->stats();
  EXPECT_GT(st.flushes, 5u);
  EXPECT_GT(st.compactions, 0u);
  EXPECT_LE(o.core->buffer_bytes(), cfg.l0_capacity);
  auto bytes = o.core->level_bytes();
  for (std::uint16_t i = 1; i < cfg.max_levels; ++i) EXPECT_LE(bytes[i - 1], cfg.level_limit(i)) << i;
}

TEST(TrustedCore, DeterministicRootsAndWal) {
  auto run = [](const std::filesystem::path& p) {
    auto o = open_core(p, test::small_config(4));
    std::mt19937_64 rng(99);
    for (int i = 0; i < 1500; ++i) {
      Key k("k" + std::to_string(rng() % 200));
      if (rng() % 8 == 0) {
        o.core->del(k);
      } else {
        o.core->put(k, std::to_string(rng()));
      }
    }
    return std::make_pair(o.core->roots(), o.core->wal_digest());
  };
  TempDir a, b;
  EXPECT_EQ(run(a.path()), run(b.path()));
}

TEST(TrustedCore, SealRoundTripAndTamper) {
  SealedState s;
  s.roots = {empty_level_root(), sha256("x")};
  s.level_bytes = {0, 77};
  s.wal_digest = wal_base_digest();
  s.wal_len = 3;
  s.global_ts = {42};
  s.binding = {5, sha256("y")};
  s.writes_since_bind = 2;
  s.dirty = true;
  std::string blob = seal_state(s, "k");
  EXPECT_EQ(blob.substr(0, 4), "ESEL");
  EXPECT_EQ(unseal_state(blob, "k"), s);
  EXPECT_THROW(unseal_state(blob, "other"), SealTampered);
  for (std::size_t i = 0; i < blob.size(); i += 5) {
    std::string bad = blob;
    bad[i] ^= 1;
    EXPECT_THROW(unseal_state(bad, "k"), SealTampered) << i;
  }
  EXPECT_THROW(unseal_state(blob.substr(0, 20), "k"), SealTampered);
}

TEST(TrustedCore, ReopenRestoresBufferFromWal) {
  TempDir dir;
  auto cfg = test::small_config(3);
  Digest digest;
  {
    auto o = open_core(dir.path(), cfg);
    for (int i = 0; i < 40; ++i) o.core->put(Key("k" + std::to_string(i)), "v" + std::to_string(i));
    digest = o.core->wal_digest();
  }
  auto o = open_core(dir.path(), cfg);
  EXPECT_EQ(o.core->wal_digest(), digest);
  EXPECT_EQ(o.core->global_ts().value, 40u);
  for (int i = 0; i < 40; ++i) EXPECT_EQ(o.core->get(Key("k" + std::to_string(i))).record->value, "v" + std::to_string(i));
  EXPECT_EQ(o.core->put("new", "x").value, 41u);
}

TEST(TrustedCore, BindAndAudit) {
  TempDir dir;
  auto cfg = test::small_config(3);
  auto o = open_core(dir.path(), cfg);
  EXPECT_EQ(o.counter->read().value, 1u);  // initial bind
  EXPECT_FALSE(o.core->audit_rollback().rollback);
  o.core->put("a", "1");
  EXPECT_FALSE(o.core->audit_rollback().rollback);  // dirty, binding unchanged
  o.core->bind_counter();
  EXPECT_EQ(o.counter->read().value, 2u);
  EXPECT_EQ(o.counter->read().hash, o.core->current_state_hash());
  EXPECT_FALSE(o.core->audit_rollback().rollback);

  // Someone else advanced the counter: this state is stale.
  o.counter->write({3, sha256("elsewhere")});
  EXPECT_TRUE(o.core->audit_rollback().rollback);
}

TEST(TrustedCore, AutomaticBindInterval) {
  TempDir dir;
  auto cfg = test::small_config(3);
  cfg.bind_interval = 10;
  auto o = open_core(dir.path(), cfg);
  for (int i = 0; i < 35; ++i) o.core->put("k", "v");
  EXPECT_EQ(o.counter->read().value, 4u);
  EXPECT_EQ(o.core->sealed_state().writes_since_bind, 5u);
}

TEST(TrustedCore, FsckFindsTamperedRun) {
  TempDir dir;
  auto cfg = test::example_config();
  auto o = open_core(dir.path(), cfg);
  o.core->bulk_load(test::example_levels());
  auto path = o.files->run_path({3});
  std::string bytes = read_file(path);
  bytes[run_value_offset(bytes, 1)] ^= 1;
  write_file_atomic(path, bytes, false);
  o.files->reload();
  auto report = o.core->fsck();
  EXPECT_TRUE(report[0].ok());
  EXPECT_FALSE(report[2].ok());
  EXPECT_THROW(o.core->get("T", {0}), VerificationFailed);
  EXPECT_THROW(o.core->compact({2}), VerificationFailed);
}

}  // namespace
}  // namespace elsm
