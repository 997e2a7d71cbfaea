#include "elsm/verify.h"

#include "elsm/encoding.h"
#include "elsm/hash.h"

namespace elsm {

namespace {

bool record_well_formed(const Record& r) {
  return !(r.tombstone && !r.value.empty()) && r.value.size() <= kMaxValueLength;
}

std::optional<Digest> sibling_digest(const ProofNode& node) {
  switch (node.kind) {
    case ProofNode::Kind::kHashOnly:
      if (const auto* d = std::get_if<Digest>(&node.payload)) return *d;
      return std::nullopt;
    case ProofNode::Kind::kPlainRecord:
      if (const auto* r = std::get_if<Record>(&node.payload); r && record_well_formed(*r)) {
        return leaf_digest(*r);
      }
      return std::nullopt;
    case ProofNode::Kind::kPlainChainLink:
      return std::nullopt;
  }
  return std::nullopt;
}

// Folds a leaf-to-root path; nullopt if any node is malformed.
std::optional<Digest> fold_path(Digest cur, const std::vector<ProofNode>& path) {
  for (const auto& node : path) {
    auto sib = sibling_digest(node);
    if (!sib) return std::nullopt;
    switch (node.side) {
      case Side::kLeft: cur = internal_digest(*sib, cur); break;
      case Side::kRight: cur = internal_digest(cur, *sib); break;
      case Side::kChain: return std::nullopt;
    }
  }
  return cur;
}

Digest opening_digest(const LeafOpening& o) {
  return o.chain_suffix ? chain_link_digest(o.head, *o.chain_suffix) : leaf_digest(o.head);
}

bool all_sides(const std::vector<ProofNode>& path, std::size_t count, Side side) {
  for (std::size_t i = 0; i < count; ++i) {
    if (path[i].side != side) return false;
  }
  return true;
}

// Leaf with every sibling on its right is the leftmost leaf of the subtree
// the path spans; with every sibling on the left, the rightmost.
bool leftmost(const std::vector<ProofNode>& path) { return all_sides(path, path.size(), Side::kRight); }
bool rightmost(const std::vector<ProofNode>& path) { return all_sides(path, path.size(), Side::kLeft); }

// Two authenticated paths belong to consecutive leaves iff they share every
// node above their lowest common ancestor, split there (left path sees a
// right sibling, right path a left one), and below it the left leaf is the
// rightmost of its subtree while the right leaf is the leftmost of its own.
bool paths_adjacent(const std::vector<ProofNode>& l, const std::vector<ProofNode>& r) {
  std::size_t i = l.size();
  std::size_t j = r.size();
  while (i > 0 && j > 0 && l[i - 1] == r[j - 1]) {
    --i;
    --j;
  }
  if (i == 0 || j == 0) return false;
  if (l[i - 1].side != Side::kRight || r[j - 1].side != Side::kLeft) return false;
  return all_sides(l, i - 1, Side::kLeft) && all_sides(r, j - 1, Side::kRight);
}

bool chain_well_formed(const std::vector<Record>& chain) {
  if (chain.empty()) return false;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (!record_well_formed(chain[i])) return false;
    if (i > 0 && (!(chain[i].key == chain[0].key) || !(chain[i].ts < chain[i - 1].ts))) return false;
  }
  return true;
}

}  // namespace

Verdict verify_membership(const Digest& root, const Key& key, Timestamp ts_q, const Record& result,
                          const MembershipProof& proof) {
  if (!(result.key == key)) return Verdict::fail(RejectReason::kWrongKey);
  if (result.ts > ts_q) return Verdict::fail(RejectReason::kFutureRecord);
  if (!record_well_formed(result)) return Verdict::fail(RejectReason::kMalformedProof);
  if (proof.chain_position != proof.chain_prefix.size()) {
    return Verdict::fail(RejectReason::kMalformedProof);
  }
  for (std::size_t i = 0; i < proof.chain_prefix.size(); ++i) {
    const Record& link = proof.chain_prefix[i];
    const Timestamp older = i + 1 < proof.chain_prefix.size() ? proof.chain_prefix[i + 1].ts : result.ts;
    if (!(link.key == key) || !(older < link.ts) || !record_well_formed(link)) {
      return Verdict::fail(RejectReason::kMalformedProof);
    }
  }

  Digest cur = proof.chain_suffix ? chain_link_digest(result, *proof.chain_suffix) : leaf_digest(result);
  for (auto it = proof.chain_prefix.rbegin(); it != proof.chain_prefix.rend(); ++it) {
    cur = chain_link_digest(*it, cur);
  }
  auto computed = fold_path(cur, proof.path);
  if (!computed) return Verdict::fail(RejectReason::kMalformedProof);
  if (!(*computed == root)) return Verdict::fail(RejectReason::kRootMismatch);

  // Freshness: every plaintext version of this key in the proof must be
  // invisible at ts_q, otherwise the store answered with a stale version.
  for (const auto& link : proof.chain_prefix) {
    if (link.ts <= ts_q) return Verdict::fail(RejectReason::kStaleResult);
  }
  for (const auto& node : proof.path) {
    if (const auto* r = std::get_if<Record>(&node.payload);
        r && r->key == key && result.ts < r->ts && r->ts <= ts_q) {
      return Verdict::fail(RejectReason::kStaleResult);
    }
  }
  return Verdict::accept();
}

Verdict verify_non_membership(const Digest& root, const Key& key, const NonMembershipProof& proof) {
  if (proof.empty_level) {
    if (proof.left || proof.right) return Verdict::fail(RejectReason::kMalformedProof);
    return root == empty_level_root() ? Verdict::accept() : Verdict::fail(RejectReason::kRootMismatch);
  }
  if (!proof.left && !proof.right) return Verdict::fail(RejectReason::kMalformedProof);

  for (const auto* n : {&proof.left, &proof.right}) {
    if (!*n) continue;
    const Neighbor& nb = **n;
    if (!record_well_formed(nb.leaf.head)) return Verdict::fail(RejectReason::kMalformedProof);
    auto computed = fold_path(opening_digest(nb.leaf), nb.path);
    if (!computed) return Verdict::fail(RejectReason::kMalformedProof);
    if (!(*computed == root)) return Verdict::fail(RejectReason::kRootMismatch);
  }

  if (proof.left && !(proof.left->leaf.head.key < key)) return Verdict::fail(RejectReason::kNotBracketing);
  if (proof.right && !(key < proof.right->leaf.head.key)) {
    return Verdict::fail(RejectReason::kNotBracketing);
  }

  if (proof.left && proof.right) {
    if (proof.right->leaf_index != proof.left->leaf_index + 1 ||
        !paths_adjacent(proof.left->path, proof.right->path)) {
      return Verdict::fail(RejectReason::kNotAdjacent);
    }
  } else if (proof.right) {
    if (proof.right->leaf_index != 0 || !leftmost(proof.right->path)) {
      return Verdict::fail(RejectReason::kNotAdjacent);
    }
  } else if (!rightmost(proof.left->path)) {
    return Verdict::fail(RejectReason::kNotAdjacent);
  }
  return Verdict::accept();
}

Verdict verify_no_visible_version(const Digest& root, const Key& key, Timestamp ts_q,
                                  const NoVisibleVersionProof& proof) {
  if (!chain_well_formed(proof.chain)) return Verdict::fail(RejectReason::kMalformedProof);
  if (!(proof.chain.front().key == key)) return Verdict::fail(RejectReason::kWrongKey);
  auto computed = fold_path(chain_digest(proof.chain), proof.path);
  if (!computed) return Verdict::fail(RejectReason::kMalformedProof);
  if (!(*computed == root)) return Verdict::fail(RejectReason::kRootMismatch);
  // The oldest version is the smallest timestamp; it must still be too new.
  if (proof.chain.back().ts <= ts_q) return Verdict::fail(RejectReason::kStaleResult);
  return Verdict::accept();
}

RangeVerdict verify_range(const Digest& root, const Key& k1, const Key& k2, const RangeProof& proof) {
  auto fail = [](RejectReason r) { return RangeVerdict{r, {}}; };
  if (k2 < k1) return fail(RejectReason::kMalformedProof);

  const std::uint64_t n = proof.leaf_count;
  const std::uint64_t count =
      proof.covered.size() + (proof.left ? 1 : 0) + (proof.right ? 1 : 0);
  if (n == 0) {
    if (count != 0 || proof.first_index != 0 || !proof.siblings.empty()) {
      return fail(RejectReason::kMalformedProof);
    }
    if (!(root == empty_level_root())) return fail(RejectReason::kRootMismatch);
    return {};
  }
  if (count == 0 || count > n || proof.first_index > n - count) return fail(RejectReason::kGapInLeaves);

  std::vector<Digest> nodes;
  std::vector<const Key*> keys;
  nodes.reserve(count);
  if (proof.left) {
    if (!record_well_formed(proof.left->head)) return fail(RejectReason::kMalformedProof);
    nodes.push_back(opening_digest(*proof.left));
    keys.push_back(&proof.left->head.key);
  }
  for (const auto& chain : proof.covered) {
    if (!chain_well_formed(chain)) return fail(RejectReason::kMalformedProof);
    const Key& k = chain.front().key;
    if (k < k1 || k2 < k) return fail(RejectReason::kMalformedProof);
    nodes.push_back(chain_digest(chain));
    keys.push_back(&k);
  }
  if (proof.right) {
    if (!record_well_formed(proof.right->head)) return fail(RejectReason::kMalformedProof);
    nodes.push_back(opening_digest(*proof.right));
    keys.push_back(&proof.right->head.key);
  }
  for (std::size_t i = 1; i < keys.size(); ++i) {
    if (!(*keys[i - 1] < *keys[i])) return fail(RejectReason::kGapInLeaves);
  }

  if (proof.left ? !(proof.left->head.key < k1) : proof.first_index != 0) {
    return fail(RejectReason::kBoundaryUncovered);
  }
  if (proof.right ? !(k2 < proof.right->head.key) : proof.first_index + count != n) {
    return fail(RejectReason::kBoundaryUncovered);
  }

  std::uint64_t lo = proof.first_index;
  std::uint64_t hi = proof.first_index + count - 1;
  std::uint64_t size = n;
  std::size_t next_sibling = 0;
  auto take_sibling = [&](std::uint16_t layer, std::uint64_t index) -> std::optional<Digest> {
    if (next_sibling >= proof.siblings.size()) return std::nullopt;
    const auto& s = proof.siblings[next_sibling++];
    if (s.layer != layer || s.index != index) return std::nullopt;
    return s.digest;
  };
  for (std::uint16_t layer = 0; size > 1; ++layer) {
    if (lo % 2 == 1) {
      auto s = take_sibling(layer, lo - 1);
      if (!s) return fail(RejectReason::kGapInLeaves);
      nodes.insert(nodes.begin(), *s);
      --lo;
    }
    if (hi % 2 == 0 && hi + 1 < size) {
      auto s = take_sibling(layer, hi + 1);
      if (!s) return fail(RejectReason::kGapInLeaves);
      nodes.push_back(*s);
      ++hi;
    }
    std::vector<Digest> up;
    up.reserve((nodes.size() + 1) / 2);
    for (std::size_t k = 0; k < nodes.size(); k += 2) {
      up.push_back(k + 1 < nodes.size() ? internal_digest(nodes[k], nodes[k + 1]) : nodes[k]);
    }
    nodes = std::move(up);
    lo /= 2;
    hi /= 2;
    size = (size + 1) / 2;
  }
  if (next_sibling != proof.siblings.size()) return fail(RejectReason::kGapInLeaves);
  if (nodes.size() != 1 || !(nodes.front() == root)) return fail(RejectReason::kRootMismatch);

  RangeVerdict out;
  for (const auto& chain : proof.covered) out.records.insert(out.records.end(), chain.begin(), chain.end());
  return out;
}

}  // namespace elsm
