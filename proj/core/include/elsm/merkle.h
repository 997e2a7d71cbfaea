#pragma once

// Per-level Merkle trees whose leaves are hash chains over the versions of
// one key. Leaves are ordered by key; a chain is ordered newest to oldest and
// nests so the newest record's encoding is outermost:
//
//   chain [r1 (newest), ..., rm (oldest)]
//     c_m = H(0x00 | enc(rm))
//     c_j = H(0x01 | enc(rj) | c_{j+1})        leaf digest = c_1
//   internal = H(0x02 | left | right), an unpaired node moves up unchanged
//   empty level root = H(0x03)
//
// A proof for any non-head version therefore has to carry the newer versions
// in plaintext, which is what lets the verifier reject stale answers.

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "elsm/types.h"

namespace elsm {

/// Hashes a version chain (newest first). Throws TreeError.
Digest chain_digest(std::span<const Record> chain);

enum class Side : std::uint8_t {
  kLeft = 0,   // sibling sits to the left of the running node
  kRight = 1,  // sibling sits to the right
  kChain = 2,  // node belongs to the version chain, not the tree path
};

struct ProofNode {
  enum class Kind : std::uint8_t { kHashOnly = 0, kPlainRecord = 1, kPlainChainLink = 2 };

  Kind kind = Kind::kHashOnly;
  Side side = Side::kLeft;
  std::variant<Digest, Record> payload;

  static ProofNode hash(Side side, const Digest& d) { return {Kind::kHashOnly, side, d}; }
  static ProofNode plain_record(Side side, Record r) {
    return {Kind::kPlainRecord, side, std::move(r)};
  }
  static ProofNode chain_link(Record r) { return {Kind::kPlainChainLink, Side::kChain, std::move(r)}; }

  friend bool operator==(const ProofNode&, const ProofNode&) = default;
};

struct MembershipProof {
  LevelId level;
  std::uint64_t leaf_index = 0;
  std::uint32_t chain_position = 0;          // 0 = chain head (newest)
  std::optional<Digest> chain_suffix;        // digest of the links older than the result
  std::vector<Record> chain_prefix;          // links newer than the result, newest first
  std::vector<ProofNode> path;               // leaf to root

  friend bool operator==(const MembershipProof&, const MembershipProof&) = default;
};

/// A whole leaf shown by its head record plus the digest of the rest of its
/// chain. Enough to recompute the leaf digest and learn the group key.
struct LeafOpening {
  Record head;
  std::optional<Digest> chain_suffix;

  friend bool operator==(const LeafOpening&, const LeafOpening&) = default;
};

struct Neighbor {
  LeafOpening leaf;
  std::uint64_t leaf_index = 0;
  std::vector<ProofNode> path;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct NonMembershipProof {
  LevelId level;
  std::optional<Neighbor> left;
  std::optional<Neighbor> right;
  bool empty_level = false;

  friend bool operator==(const NonMembershipProof&, const NonMembershipProof&) = default;
};

/// For historical reads: the key is present at this level but every version
/// is newer than the query timestamp. Carries the full chain in plaintext.
struct NoVisibleVersionProof {
  LevelId level;
  std::uint64_t leaf_index = 0;
  std::vector<Record> chain;
  std::vector<ProofNode> path;

  friend bool operator==(const NoVisibleVersionProof&, const NoVisibleVersionProof&) = default;
};

struct SiblingDigest {
  std::uint16_t layer = 0;
  std::uint64_t index = 0;
  Digest digest;

  friend bool operator==(const SiblingDigest&, const SiblingDigest&) = default;
};

/// Consecutive leaves [first_index, first_index + count) covering a key range:
/// an optional bracketing leaf on each side, every in-range leaf with its full
/// chain, and the sibling digests needed to reach the root (ordered by layer,
/// then index).
struct RangeProof {
  LevelId level;
  std::uint64_t leaf_count = 0;
  std::uint64_t first_index = 0;
  std::optional<LeafOpening> left;
  std::vector<std::vector<Record>> covered;
  std::optional<LeafOpening> right;
  std::vector<SiblingDigest> siblings;

  friend bool operator==(const RangeProof&, const RangeProof&) = default;
};

struct LeafGroup {
  std::vector<Record> chain;  // newest first
  Digest digest;

  const Key& key() const { return chain.front().key; }
};

class LevelTree {
 public:
  enum class Check { kStrict, kLenient };

  /// Builds the tree over records sorted by record_order. kStrict throws
  /// TreeError(kUnsortedInput) on order violations or duplicate (key, ts);
  /// kLenient groups whatever it is given (used by the untrusted side, which
  /// must still answer for tampered files).
  static LevelTree build(LevelId level, std::span<const Record> sorted, Check check = Check::kStrict);

  LevelId level() const { return level_; }
  const Digest& root() const { return root_; }
  bool empty() const { return leaves_.empty(); }
  std::size_t leaf_count() const { return leaves_.size(); }
  std::size_t record_count() const { return record_count_; }
  const std::vector<LeafGroup>& leaves() const { return leaves_; }
  const std::vector<std::vector<Digest>>& layers() const { return layers_; }

  std::optional<std::size_t> find(const Key& key) const;
  /// First leaf whose key is >= key.
  std::size_t lower_bound(const Key& key) const;
  /// First leaf whose key is > key.
  std::size_t upper_bound(const Key& key) const;

  /// Sibling hashes from leaf to root. Unpaired layers contribute nothing.
  std::vector<ProofNode> path(std::size_t leaf_index) const;
  LeafOpening opening(std::size_t leaf_index) const;
  /// Proof for the record at chain position `pos` of leaf `leaf_index`.
  MembershipProof membership_at(std::size_t leaf_index, std::size_t pos) const;

 private:
  LevelId level_;
  std::vector<LeafGroup> leaves_;
  std::vector<std::vector<Digest>> layers_;  // layers_[0] = leaf digests
  Digest root_;
  std::size_t record_count_ = 0;
};

/// Returns the newest record with ts <= ts_q. Throws TreeError(kKeyAbsent)
/// when the level has no such record.
std::pair<Record, MembershipProof> membership_proof(const LevelTree& tree, const Key& key,
                                                    Timestamp ts_q);
/// Throws TreeError(kKeyPresent) when the level holds the key.
NonMembershipProof non_membership_proof(const LevelTree& tree, const Key& key);
/// Throws TreeError(kKeyAbsent) unless the level holds the key.
NoVisibleVersionProof no_visible_version_proof(const LevelTree& tree, const Key& key);
/// Throws InvalidArgument when k1 > k2.
RangeProof range_proof(const LevelTree& tree, const Key& k1, const Key& k2);

/// Incremental root computation over a record stream, one chain group at a
/// time. Keeps O(log n) digests plus the current group.
class StreamingTreeBuilder {
 public:
  /// Throws TreeError(kUnsortedInput) when the stream leaves record_order.
  void add(const Record& r);
  Digest finish();

  std::uint64_t leaf_count() const { return leaf_count_; }
  std::uint64_t record_count() const { return record_count_; }

 private:
  void push_leaf(const Digest& d);
  void close_group();

  std::vector<Record> group_;
  std::vector<std::optional<Digest>> pending_;  // one slot per layer
  std::uint64_t leaf_count_ = 0;
  std::uint64_t record_count_ = 0;
};

}  // namespace elsm
