#include <gtest/gtest.h>

#include <fstream>

#include "elsm/encoding.h"
#include "elsm/errors.h"
#include "elsm/hash.h"
#include "elsm/merkle.h"
#include "elsm/proof_codec.h"
#include "elsm/run_file.h"
#include "elsm/wal.h"
#include "test_support.h"

namespace elsm {
namespace {

std::vector<Record> wal_records() {
  return {Record::put("a", "1", {1}), Record::put("b", std::string(300, 'x'), {2}), Record::erase("a", {3}),
          Record::put("c", "", {4})};
}

std::string wal_image(const std::vector<Record>& rs) {
  std::string out;
  for (const auto& r : rs) out += encode_wal_frame(r);
  return out;
}

TEST(Wal, FrameLayout) {
  Record r = Record::put("k", "v", {1});
  std::string f = encode_wal_frame(r);
  std::string body = encode_record(r);
  ASSERT_EQ(f.size(), body.size() + 8);
  EXPECT_EQ(static_cast<unsigned char>(f[0]), body.size());
  EXPECT_EQ(f.substr(4, body.size()), body);
  ByteReader tail(std::string_view(f).substr(4 + body.size()));
  EXPECT_EQ(tail.u32le(), crc32_of(body));
  EXPECT_EQ(crc32_of("123456789"), 0xCBF43926u);  // standard check value
}

TEST(Wal, ParsesIntactLog) {
  auto rs = wal_records();
  std::string img = wal_image(rs);
  auto c = parse_wal(img);
  EXPECT_EQ(c.records, rs);
  EXPECT_FALSE(c.torn_tail);
  EXPECT_EQ(c.end_offset, img.size());
  auto from = parse_wal(img, c.offsets[2]);
  EXPECT_EQ(from.records.size(), 2u);
}

TEST(Wal, EveryTruncationIsATornTail) {
  auto rs = wal_records();
  std::string img = wal_image(rs);
  std::size_t last_start = parse_wal(img).offsets.back();
  for (std::size_t n = 0; n < img.size(); ++n) {
    auto c = parse_wal(std::string_view(img).substr(0, n));
    EXPECT_LE(c.end_offset, n);
    EXPECT_EQ(c.torn_tail, c.end_offset != n);
    if (n > last_start) {
      EXPECT_EQ(c.records.size(), rs.size() - 1);
    }
  }
}

TEST(Wal, DamageBeforeTheTailIsCorruption) {
  auto rs = wal_records();
  std::string img = wal_image(rs);
  auto offsets = parse_wal(img).offsets;
  std::string mid = img;
  mid[offsets[1] + 6] ^= 0x40;
  EXPECT_THROW(parse_wal(mid), CorruptFrame);
  std::string tail = img;
  tail[offsets.back() + 6] ^= 0x40;
  auto c = parse_wal(tail);
  EXPECT_TRUE(c.torn_tail);
  EXPECT_EQ(c.records.size(), rs.size() - 1);
  EXPECT_THROW(parse_wal(img, img.size() + 1), CorruptFrame);
}

TEST(Wal, WriterAppendsAndTruncates) {
  test::TempDir dir;
  auto rs = wal_records();
  std::uint64_t second = 0;
  {
    WalWriter w(dir / "wal.log", false);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      auto off = w.append(rs[i]);
      if (i == 1) second = off;
    }
    w.truncate(second);
    EXPECT_EQ(w.size(), second);
  }
  WalWriter reopened(dir / "wal.log", false);
  EXPECT_EQ(reopened.size(), second);
  auto c = parse_wal(read_file(dir / "wal.log"));
  ASSERT_EQ(c.records.size(), 1u);
  EXPECT_EQ(c.records[0], rs[0]);
}

TEST(Wal, CrashBetweenHalvesLeavesTornFrame) {
  test::TempDir dir;
  WalWriter w(dir / "wal.log", false);
  w.append(Record::put("a", "1", {1}));
  EXPECT_THROW(w.append(Record::put("b", "2", {2}), [] { throw SimulatedCrash(); }), SimulatedCrash);
  auto c = parse_wal(read_file(dir / "wal.log"));
  EXPECT_TRUE(c.torn_tail);
  EXPECT_EQ(c.records.size(), 1u);
}

RunFile sample_run() {
  std::vector<Record> recs{Record::put("A", "a2", {2}), Record::put("T", "t0", {0}), Record::put("Y", "y3", {3})};
  auto tree = LevelTree::build({3}, recs);
  RunFile run{{3}, tree.root(), {}};
  for (std::size_t i = 0; i < recs.size(); ++i)
    run.records.push_back({recs[i], encode_embedded_proof(tree.membership_at(i, 0))});
  return run;
}

TEST(RunFile, RoundTripAndHeader) {
  RunFile run = sample_run();
  std::string bytes = serialize_run(run);
  EXPECT_EQ(bytes.substr(0, 4), "ELSM");
  RunFile back = parse_run(bytes);
  EXPECT_EQ(back.level, run.level);
  EXPECT_EQ(back.root, run.root);
  ASSERT_EQ(back.records.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.records[i].record, run.records[i].record);
    EXPECT_EQ(back.records[i].embedded_proof, run.records[i].embedded_proof);
    std::size_t off = run_value_offset(bytes, i);
    EXPECT_EQ(bytes.substr(off, 2), run.records[i].record.value);
  }
}

TEST(RunFile, RejectsBadContainers) {
  std::string bytes = serialize_run(sample_run());
  std::string magic = bytes;
  magic[0] = 'X';
  EXPECT_THROW(parse_run(magic), CorruptContainer);
  EXPECT_THROW(parse_run(bytes + "z"), CorruptContainer);
  for (std::size_t n = 0; n < bytes.size(); n += 7) EXPECT_THROW(parse_run(bytes.substr(0, n)), CorruptContainer);
}

TEST(RunFile, AtomicWriteAndRead) {
  test::TempDir dir;
  write_file_atomic(dir / "f", "hello", false);
  write_file_atomic(dir / "f", "bye", true);
  EXPECT_EQ(read_file(dir / "f"), "bye");
  EXPECT_THROW(read_file(dir / "missing"), IoError);
}

}  // namespace
}  // namespace elsm
