#include "elsm/merkle.h"

#include <algorithm>

#include "elsm/errors.h"
#include "elsm/hash.h"

namespace elsm {

namespace {

// Digest of chain[from..] (newest first); chain assumed well-formed.
Digest chain_tail_digest(std::span<const Record> chain, std::size_t from) {
  Digest acc = leaf_digest(chain.back());
  for (std::size_t j = chain.size() - 1; j-- > from;) acc = chain_link_digest(chain[j], acc);
  return acc;
}

void check_chain(std::span<const Record> chain) {
  if (chain.empty()) throw TreeError(TreeErrc::kEmptyChain);
  for (std::size_t i = 1; i < chain.size(); ++i) {
    if (!(chain[i].key == chain[0].key)) throw TreeError(TreeErrc::kMixedKeys);
    if (!(chain[i].ts < chain[i - 1].ts)) throw TreeError(TreeErrc::kUnsortedChain);
  }
}

}  // namespace

Digest chain_digest(std::span<const Record> chain) {
  check_chain(chain);
  return chain_tail_digest(chain, 0);
}

LevelTree LevelTree::build(LevelId level, std::span<const Record> sorted, Check check) {
  LevelTree tree;
  tree.level_ = level;
  tree.record_count_ = sorted.size();

  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Record& r = sorted[i];
    if (check == Check::kStrict && i > 0 && record_order(sorted[i - 1], r) >= 0) {
      throw TreeError(TreeErrc::kUnsortedInput);
    }
    if (!tree.leaves_.empty() && tree.leaves_.back().key() == r.key) {
      tree.leaves_.back().chain.push_back(r);
    } else {
      tree.leaves_.push_back(LeafGroup{{r}, {}});
    }
  }

  std::vector<Digest> layer;
  layer.reserve(tree.leaves_.size());
  for (auto& g : tree.leaves_) {
    g.digest = chain_tail_digest(g.chain, 0);
    layer.push_back(g.digest);
  }
  if (layer.empty()) {
    tree.root_ = empty_level_root();
    return tree;
  }
  tree.layers_.push_back(std::move(layer));
  while (tree.layers_.back().size() > 1) {
    const auto& below = tree.layers_.back();
    std::vector<Digest> up;
    up.reserve((below.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < below.size(); i += 2) {
      up.push_back(internal_digest(below[i], below[i + 1]));
    }
    if (below.size() % 2 == 1) up.push_back(below.back());
    tree.layers_.push_back(std::move(up));
  }
  tree.root_ = tree.layers_.back().front();
  return tree;
}

std::size_t LevelTree::lower_bound(const Key& key) const {
  auto it = std::lower_bound(leaves_.begin(), leaves_.end(), key,
                             [](const LeafGroup& g, const Key& k) { return g.key() < k; });
  return static_cast<std::size_t>(it - leaves_.begin());
}

std::size_t LevelTree::upper_bound(const Key& key) const {
  auto it = std::upper_bound(leaves_.begin(), leaves_.end(), key,
                             [](const Key& k, const LeafGroup& g) { return k < g.key(); });
  return static_cast<std::size_t>(it - leaves_.begin());
}

std::optional<std::size_t> LevelTree::find(const Key& key) const {
  std::size_t i = lower_bound(key);
  if (i < leaves_.size() && leaves_[i].key() == key) return i;
  return std::nullopt;
}

std::vector<ProofNode> LevelTree::path(std::size_t leaf_index) const {
  std::vector<ProofNode> out;
  std::size_t idx = leaf_index;
  for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    if (idx % 2 == 1) {
      out.push_back(ProofNode::hash(Side::kLeft, layer[idx - 1]));
    } else if (idx + 1 < layer.size()) {
      out.push_back(ProofNode::hash(Side::kRight, layer[idx + 1]));
    }
    idx /= 2;
  }
  return out;
}

LeafOpening LevelTree::opening(std::size_t leaf_index) const {
  const auto& chain = leaves_.at(leaf_index).chain;
  LeafOpening o{chain.front(), std::nullopt};
  if (chain.size() > 1) o.chain_suffix = chain_tail_digest(chain, 1);
  return o;
}

MembershipProof LevelTree::membership_at(std::size_t leaf_index, std::size_t pos) const {
  const auto& chain = leaves_.at(leaf_index).chain;
  MembershipProof p;
  p.level = level_;
  p.leaf_index = leaf_index;
  p.chain_position = static_cast<std::uint32_t>(pos);
  p.chain_prefix.assign(chain.begin(), chain.begin() + static_cast<std::ptrdiff_t>(pos));
  if (pos + 1 < chain.size()) p.chain_suffix = chain_tail_digest(chain, pos + 1);
  p.path = path(leaf_index);
  return p;
}

std::pair<Record, MembershipProof> membership_proof(const LevelTree& tree, const Key& key,
                                                    Timestamp ts_q) {
  auto idx = tree.find(key);
  if (!idx) throw TreeError(TreeErrc::kKeyAbsent);
  const auto& chain = tree.leaves()[*idx].chain;
  for (std::size_t pos = 0; pos < chain.size(); ++pos) {
    if (chain[pos].ts <= ts_q) return {chain[pos], tree.membership_at(*idx, pos)};
  }
  throw TreeError(TreeErrc::kKeyAbsent);
}

NonMembershipProof non_membership_proof(const LevelTree& tree, const Key& key) {
  NonMembershipProof p;
  p.level = tree.level();
  if (tree.empty()) {
    p.empty_level = true;
    return p;
  }
  std::size_t i = tree.lower_bound(key);
  if (i < tree.leaf_count() && tree.leaves()[i].key() == key) throw TreeError(TreeErrc::kKeyPresent);
  if (i > 0) p.left = Neighbor{tree.opening(i - 1), i - 1, tree.path(i - 1)};
  if (i < tree.leaf_count()) p.right = Neighbor{tree.opening(i), i, tree.path(i)};
  return p;
}

NoVisibleVersionProof no_visible_version_proof(const LevelTree& tree, const Key& key) {
  auto idx = tree.find(key);
  if (!idx) throw TreeError(TreeErrc::kKeyAbsent);
  return NoVisibleVersionProof{tree.level(), *idx, tree.leaves()[*idx].chain, tree.path(*idx)};
}

RangeProof range_proof(const LevelTree& tree, const Key& k1, const Key& k2) {
  if (k2 < k1) throw InvalidArgument("range start after range end");
  RangeProof p;
  p.level = tree.level();
  p.leaf_count = tree.leaf_count();
  if (tree.empty()) return p;

  std::size_t a = tree.lower_bound(k1);
  std::size_t b = tree.upper_bound(k2);  // in-range leaves are [a, b)
  std::size_t lo = a > 0 ? a - 1 : a;
  std::size_t hi = b < tree.leaf_count() ? b : b - 1;  // inclusive
  p.first_index = lo;
  if (a > 0) p.left = tree.opening(a - 1);
  for (std::size_t i = a; i < b; ++i) p.covered.push_back(tree.leaves()[i].chain);
  if (b < tree.leaf_count()) p.right = tree.opening(b);

  const auto& layers = tree.layers();
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    std::size_t size = layers[l].size();
    if (lo % 2 == 1) p.siblings.push_back({static_cast<std::uint16_t>(l), lo - 1, layers[l][lo - 1]});
    if (hi % 2 == 0 && hi + 1 < size) {
      p.siblings.push_back({static_cast<std::uint16_t>(l), hi + 1, layers[l][hi + 1]});
    }
    lo /= 2;
    hi /= 2;
  }
  return p;
}

void StreamingTreeBuilder::add(const Record& r) {
  if (!group_.empty()) {
    const Record& prev = group_.back();
    if (record_order(prev, r) >= 0) throw TreeError(TreeErrc::kUnsortedInput);
    if (!(prev.key == r.key)) close_group();
  }
  group_.push_back(r);
  ++record_count_;
}

void StreamingTreeBuilder::close_group() {
  push_leaf(chain_tail_digest(group_, 0));
  group_.clear();
}

void StreamingTreeBuilder::push_leaf(const Digest& d) {
  ++leaf_count_;
  Digest carry = d;
  for (std::size_t l = 0;; ++l) {
    if (l == pending_.size()) pending_.emplace_back();
    if (!pending_[l]) {
      pending_[l] = carry;
      return;
    }
    carry = internal_digest(*pending_[l], carry);
    pending_[l].reset();
  }
}

Digest StreamingTreeBuilder::finish() {
  if (!group_.empty()) close_group();
  std::optional<Digest> carry;
  for (auto& slot : pending_) {
    if (slot && carry) {
      carry = internal_digest(*slot, *carry);
    } else if (slot) {
      carry = slot;
    }
    slot.reset();
  }
  return carry ? *carry : empty_level_root();
}

}  // namespace elsm
