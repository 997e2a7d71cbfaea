#include <gtest/gtest.h>

#include <random>

#include "elsm/errors.h"
#include "elsm/merkle.h"
#include "elsm/proof_codec.h"
#include "elsm/verify.h"

namespace elsm {
namespace {

std::vector<Record> level_records() {
  std::vector<Record> out;
  for (int k = 0; k < 23; ++k) {
    std::string key = "key" + std::to_string(100 + 2 * k);
    for (int v = k % 3; v >= 0; --v) out.push_back(Record::put(Key(key), "val" + std::to_string(v), {std::uint64_t(10 + v)}));
    if (k % 5 == 0) out.back() = Record::erase(Key(key), out.back().ts);
  }
  return out;
}

TEST(ProofCodec, RoundTripsEveryProofShape) {
  auto recs = level_records();
  auto tree = LevelTree::build({4}, recs);
  for (const auto& r : recs) {
    auto proof = membership_proof(tree, r.key, r.ts).second;
    EXPECT_EQ(decode_membership_proof(encode_proof(proof)), proof);
    EXPECT_EQ(decode_embedded_proof(encode_embedded_proof(proof), proof.level, proof.leaf_index), proof);
    auto nv = no_visible_version_proof(tree, r.key);
    EXPECT_EQ(decode_no_visible_version_proof(encode_proof(nv)), nv);
  }
  for (int i = 0; i < 60; ++i) {
    Key k("key" + std::to_string(99 + i));
    if (!tree.find(k)) {
      auto p = non_membership_proof(tree, k);
      EXPECT_EQ(decode_non_membership_proof(encode_proof(p)), p);
    }
    Key end("key" + std::to_string(110 + i));
    if (end < k) continue;
    auto rp = range_proof(tree, k, end);
    EXPECT_EQ(decode_range_proof(encode_proof(rp)), rp);
  }
  auto empty = LevelTree::build({2}, {});
  auto p = non_membership_proof(empty, "x");
  EXPECT_EQ(decode_non_membership_proof(encode_proof(p)), p);
}

TEST(ProofCodec, NodeLayout) {
  Digest d;
  d.bytes.fill(0xab);
  std::string bytes = encode_nodes({ProofNode::hash(Side::kRight, d)});
  ASSERT_EQ(bytes.size(), 2u + 2u + 32u);
  EXPECT_EQ(bytes[0], 1);
  EXPECT_EQ(bytes[1], 0);
  EXPECT_EQ(bytes[2], 0);  // HashOnly
  EXPECT_EQ(bytes[3], 1);  // Right
}

TEST(ProofCodec, HashCountMatchesPath) {
  auto recs = level_records();
  auto tree = LevelTree::build({1}, recs);
  auto proof = membership_proof(tree, recs.back().key, recs.back().ts).second;
  std::size_t expect = proof.path.size() + (proof.chain_suffix ? 1 : 0);
  EXPECT_EQ(hash_count(proof), expect);
}

// Random byte damage must produce DecodeError or a value that the verifier
// can reject; it must never crash.
TEST(ProofCodec, FuzzedBytesNeverCrash) {
  auto recs = level_records();
  auto tree = LevelTree::build({1}, recs);
  std::mt19937_64 rng(21);
  std::vector<std::string> seeds;
  for (std::size_t i = 0; i < recs.size(); i += 3)
    seeds.push_back(encode_proof(membership_proof(tree, recs[i].key, recs[i].ts).second));
  seeds.push_back(encode_proof(range_proof(tree, "key110", "key120")));
  const auto genuine = membership_proof(tree, recs[0].key, recs[0].ts).second;
  int accepted = 0, same_evidence = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    std::string b = seeds[rng() % seeds.size()];
    switch (rng() % 3) {
      case 0: b[rng() % b.size()] ^= static_cast<char>(1 + rng() % 255); break;
      case 1: b.resize(rng() % b.size()); break;
      default: b.insert(rng() % b.size(), 1, static_cast<char>(rng())); break;
    }
    try {
      auto m = decode_membership_proof(b);
      if (verify_membership(tree.root(), recs[0].key, Timestamp::latest(), recs[0], m).accepted()) {
        ++accepted;
        // Only the informational fields (level, leaf index) may have changed.
        if (m.path == genuine.path && m.chain_prefix == genuine.chain_prefix &&
            m.chain_suffix == genuine.chain_suffix)
          ++same_evidence;
      }
    } catch (const DecodeError&) {
    } catch (const InvalidArgument&) {
    }
    try {
      auto r = decode_range_proof(b);
      (void)verify_range(tree.root(), "key110", "key120", r);
    } catch (const DecodeError&) {
    } catch (const InvalidArgument&) {
    }
  }
  EXPECT_EQ(accepted, same_evidence);
}

TEST(ProofCodec, RejectsTrailingBytesAndBadTags) {
  auto recs = level_records();
  auto tree = LevelTree::build({1}, recs);
  std::string b = encode_proof(membership_proof(tree, recs[0].key, recs[0].ts).second);
  EXPECT_THROW(decode_membership_proof(b + "x"), DecodeError);
  std::string nodes = encode_nodes({ProofNode::hash(Side::kLeft, Digest{})});
  nodes[2] = 7;
  EXPECT_THROW(decode_nodes(nodes), DecodeError);
  nodes[2] = 0;
  nodes[3] = 9;
  EXPECT_THROW(decode_nodes(nodes), DecodeError);
}

}  // namespace
}  // namespace elsm
