#include <gtest/gtest.h>

#include "elsm/errors.h"
#include "elsm/file_store.h"
#include "elsm/hash.h"
#include "elsm/merkle.h"
#include "elsm/proof_codec.h"
#include "elsm/verify.h"
#include "test_support.h"

namespace elsm {
namespace {

std::vector<RunRecord> run_of(const std::vector<Record>& recs, LevelId level, Digest& root) {
  auto tree = LevelTree::build(level, recs);
  root = tree.root();
  std::vector<RunRecord> out;
  for (std::size_t leaf = 0; leaf < tree.leaf_count(); ++leaf)
    for (std::size_t pos = 0; pos < tree.leaves()[leaf].chain.size(); ++pos)
      out.push_back({tree.leaves()[leaf].chain[pos], encode_embedded_proof(tree.membership_at(leaf, pos))});
  return out;
}

TEST(FileStore, FreshStoreHasEmptyLevels) {
  test::TempDir dir;
  auto fs = FileStore::open(dir.path(), {3, false});
  for (std::uint16_t i = 1; i <= 3; ++i) EXPECT_EQ(fs->live_root({i}), empty_level_root());
  EXPECT_FALSE(fs->read_sealed());
  auto resp = fs->serve_get("x", Timestamp::latest());
  EXPECT_TRUE(resp.entries.empty());
  EXPECT_EQ(fs->serve_scan("a", "z", Timestamp::latest()).size(), 3u);
}

TEST(FileStore, StageCommitDiscard) {
  test::TempDir dir;
  auto fs = FileStore::open(dir.path(), {3, false});
  Digest root;
  auto run = run_of({Record::put("A", "1", {1})}, {2}, root);
  fs->stage_run({2}, run, root);
  EXPECT_EQ(fs->staged_root({2}), root);
  EXPECT_EQ(fs->live_root({2}), empty_level_root());
  fs->commit_run({2});
  EXPECT_EQ(fs->live_root({2}), root);
  EXPECT_FALSE(fs->staged_root({2}));

  Digest other;
  fs->stage_run({2}, run_of({Record::put("B", "1", {2})}, {2}, other), other);
  fs->discard_staged({2});
  EXPECT_FALSE(fs->staged_root({2}));
  EXPECT_THROW(fs->commit_run({2}), IoError);

  // A staged file left on disk is visible to a fresh process.
  fs->stage_run({3}, run_of({Record::put("C", "1", {1})}, {3}, other), other);
  auto again = FileStore::open(dir.path(), {3, false});
  EXPECT_EQ(again->live_root({2}), root);
  EXPECT_EQ(again->staged_root({3}), other);
  again->commit_run({3});
  EXPECT_EQ(again->live_root({3}), other);
}

TEST(FileStore, ServesVerifiableAnswers) {
  test::TempDir dir;
  auto fs = FileStore::open(dir.path(), {3, false});
  auto levels = test::example_levels();
  std::vector<Digest> roots;
  for (std::uint16_t i = 1; i <= 3; ++i) {
    Digest root;
    fs->install_run({i}, run_of(levels[i - 1], {i}, root), root);
    roots.push_back(root);
  }
  auto resp = fs->serve_get("Z", Timestamp::latest());
  ASSERT_EQ(resp.entries.size(), 2u);
  ASSERT_EQ(resp.hit_level, LevelId{2});
  const auto& nm = std::get<NonMembershipProof>(resp.entries[0]);
  EXPECT_TRUE(verify_non_membership(roots[0], "Z", nm).accepted());
  const auto& hit = std::get<HitEntry>(resp.entries[1]);
  EXPECT_EQ(hit.record, Record::put("Z", "z7", {7}));
  EXPECT_TRUE(verify_membership(roots[1], "Z", Timestamp::latest(), hit.record, hit.proof).accepted());

  auto b = fs->serve_get("B", Timestamp::latest());
  ASSERT_EQ(b.entries.size(), 3u);
  EXPECT_FALSE(b.hit_level);
  const auto& l3 = std::get<NonMembershipProof>(b.entries[2]);
  EXPECT_EQ(l3.left->leaf.head, Record::put("A", "a2", {2}));
  EXPECT_EQ(l3.right->leaf.head, Record::put("T", "t0", {0}));

  // Historical read below every version at a level.
  auto old = fs->serve_get("Z", {3});
  ASSERT_EQ(old.entries.size(), 3u);
  EXPECT_TRUE(std::holds_alternative<NoVisibleVersionProof>(old.entries[1]));
  EXPECT_EQ(std::get<HitEntry>(old.entries[2]).record.ts.value, 1u);

  auto stream = fs->stream_level({3});
  std::size_t n = 0;
  while (auto t = stream->next()) {
    EXPECT_EQ(t->source, LevelId{3});
    ++n;
  }
  EXPECT_EQ(n, 4u);
}

TEST(FileStore, SnapshotSurvivesConcurrentCommit) {
  test::TempDir dir;
  auto fs = FileStore::open(dir.path(), {2, false});
  Digest r1, r2;
  fs->install_run({1}, run_of({Record::put("A", "1", {1})}, {1}, r1), r1);
  auto stream = fs->stream_level({1});
  fs->install_run({1}, run_of({Record::put("B", "2", {2})}, {1}, r2), r2);
  auto t = stream->next();
  ASSERT_TRUE(t);
  EXPECT_EQ(t->record.key, Key("A"));
}

TEST(FileStore, CrashHookStopsOperations) {
  test::TempDir dir;
  auto fs = FileStore::open(dir.path(), {2, false});
  std::vector<std::string> seen;
  fs->set_crash_hook([&](std::string_view p) { seen.emplace_back(p); });
  fs->wal_append(Record::put("a", "1", {1}));
  fs->write_sealed("blob");
  EXPECT_EQ(seen, (std::vector<std::string>{"wal:before_append", "wal:mid_frame", "wal:after_append",
                                            "seal:before_write", "seal:after_write"}));
  fs->set_crash_hook([](std::string_view p) {
    if (p == "seal:before_write") throw SimulatedCrash();
  });
  EXPECT_THROW(fs->write_sealed("other"), SimulatedCrash);
  EXPECT_EQ(fs->read_sealed(), "blob");
}

TEST(FileStore, CorruptRunFileIsReported) {
  test::TempDir dir;
  {
    auto fs = FileStore::open(dir.path(), {2, false});
    Digest r;
    fs->install_run({1}, run_of({Record::put("A", "1", {1})}, {1}, r), r);
  }
  write_file_atomic(dir / "L1.run", "garbage", false);
  EXPECT_THROW(FileStore::open(dir.path(), {2, false}), CorruptContainer);
}

}  // namespace
}  // namespace elsm
