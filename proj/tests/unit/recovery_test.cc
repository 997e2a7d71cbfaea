#include <gtest/gtest.h>

#include "elsm/adversary.h"
#include "elsm/encoding.h"
#include "elsm/errors.h"
#include "elsm/wal.h"
#include "test_support.h"

namespace elsm {
namespace {

using test::open_core;
using test::TempDir;

class CrashPoint : public ::testing::TestWithParam<std::string> {};

TEST_P(CrashPoint, RecoversToAdmittedWrites) {
  TempDir probe;
  auto counts = test::count_crash_points(probe.path(), 5);
  int total = counts[GetParam()];
  ASSERT_GT(total, 0) << GetParam();
  for (int nth : {1, total / 2 + 1, total}) {
    TempDir dir;
    auto out = test::crash_and_recover(dir.path(), 5, GetParam(), nth);
    EXPECT_TRUE(out.crashed);
    EXPECT_EQ(out.diff, "") << GetParam() << " #" << nth << " during " << out.during;
  }
}

INSTANTIATE_TEST_SUITE_P(AllPoints, CrashPoint, ::testing::ValuesIn(test::crash_points()),
                         [](const auto& info) {
                           std::string n = info.param;
                           for (auto& c : n)
                             if (c == ':') c = '_';
                           return n;
                         });

std::vector<Record> fill(TrustedCore& core, int n) {
  std::vector<Record> out;
  for (int i = 0; i < n; ++i) {
    Key k("k" + std::to_string(i));
    out.push_back(Record::put(k, "v", core.put(k, "v")));
  }
  return out;
}

TEST(Recovery, TornUndigestedTailIsDropped) {
  TempDir dir;
  auto cfg = test::small_config(3);
  std::uint64_t good_size;
  {
    auto o = open_core(dir.path(), cfg);
    fill(*o.core, 5);
    good_size = std::filesystem::file_size(o.files->wal_path());
  }
  // Half a frame appended after the last sealed write.
  auto wal = dir / "untrusted/wal.log";
  std::string frame = encode_wal_frame(Record::put("zz", "lost", {6}));
  {
    std::string bytes = read_file(wal) + frame.substr(0, frame.size() / 2);
    write_file_atomic(wal, bytes, false);
  }
  {
    auto o = open_core(dir.path(), cfg);
    EXPECT_EQ(std::filesystem::file_size(wal), good_size);
    EXPECT_FALSE(o.core->get("zz").record);
    EXPECT_EQ(o.core->put("zz", "kept").value, 6u);
  }
  // A complete but unsealed frame is discarded as well.
  write_file_atomic(wal, read_file(wal) + frame, false);
  auto o = open_core(dir.path(), cfg);
  EXPECT_EQ(o.core->get("zz").record->value, "kept");
}

TEST(Recovery, NonTailWalDamageIsDetected) {
  for (bool fix_crc : {false, true}) {
    TempDir dir;
    auto cfg = test::small_config(3);
    {
      auto o = open_core(dir.path(), cfg);
      fill(*o.core, 6);
    }
    tamper_wal_frame(dir / "untrusted/wal.log", 2, 6, fix_crc);
    EXPECT_THROW(open_core(dir.path(), cfg), WalMismatch) << fix_crc;
  }
}

TEST(Recovery, DigestedTailTruncationIsDetected) {
  TempDir dir;
  auto cfg = test::small_config(3);
  {
    auto o = open_core(dir.path(), cfg);
    fill(*o.core, 6);
  }
  auto wal = dir / "untrusted/wal.log";
  std::string bytes = read_file(wal);
  write_file_atomic(wal, bytes.substr(0, bytes.size() - 3), false);
  EXPECT_THROW(open_core(dir.path(), cfg), WalMismatch);
}

TEST(Recovery, SealedBlobDamageIsDetected) {
  TempDir dir;
  auto cfg = test::small_config(3);
  {
    auto o = open_core(dir.path(), cfg);
    fill(*o.core, 3);
  }
  auto sealed = dir / "untrusted/sealed.bin";
  std::string good = read_file(sealed);
  for (std::size_t i = 0; i < good.size(); i += 17) {
    std::string bad = good;
    bad[i] ^= 0x10;
    write_file_atomic(sealed, bad, false);
    EXPECT_THROW(open_core(dir.path(), cfg), SealTampered) << i;
  }
  std::filesystem::remove(sealed);
  EXPECT_THROW(open_core(dir.path(), cfg), SealTampered);
  write_file_atomic(sealed, good, false);
  auto wrong_key = cfg;
  wrong_key.seal_key = "not-the-key";
  EXPECT_THROW(open_core(dir.path(), wrong_key), SealTampered);
}

TEST(Recovery, PendingBindIsCompleted) {
  TempDir dir;
  auto cfg = test::small_config(3);
  {
    auto o = open_core(dir.path(), cfg);
    fill(*o.core, 3);
    // Die after the seal that records the new binding, before the counter write.
    int seals = 0;
    o.files->set_crash_hook([&](std::string_view p) {
      if (p == "seal:after_write" && ++seals == 1) throw SimulatedCrash();
    });
    EXPECT_THROW(o.core->bind_counter(), SimulatedCrash);
    EXPECT_EQ(o.counter->read().value, 1u);
  }
  auto o = open_core(dir.path(), cfg);
  EXPECT_EQ(o.counter->read().value, 2u);
  EXPECT_FALSE(o.core->audit_rollback().rollback);
}

TEST(Recovery, RollbackAfterBindIsDetected) {
  TempDir dir;
  auto cfg = test::small_config(3);
  DirectorySnapshot snap;
  {
    auto o = open_core(dir.path(), cfg);
    fill(*o.core, 4);
    o.core->bind_counter();
    snap = DirectorySnapshot::take(o.files->dir());
    o.core->put("x", "1");
    o.core->bind_counter();
  }
  snap.restore(dir / "untrusted");
  auto o = open_core(dir.path(), cfg);
  auto report = o.core->audit_rollback();
  EXPECT_TRUE(report.rollback) << report.detail;
}

TEST(Recovery, RollbackToLatestBindIsWindowedLoss) {
  TempDir dir;
  auto cfg = test::small_config(3);
  DirectorySnapshot snap;
  {
    auto o = open_core(dir.path(), cfg);
    fill(*o.core, 4);
    o.core->bind_counter();
    snap = DirectorySnapshot::take(o.files->dir());
    o.core->put("x", "1");  // never bound
  }
  snap.restore(dir / "untrusted");
  auto o = open_core(dir.path(), cfg);
  EXPECT_FALSE(o.core->audit_rollback().rollback);
  EXPECT_FALSE(o.core->get("x").record);
}

}  // namespace
}  // namespace elsm
