#include "elsm/proof_codec.h"

#include <limits>

#include "elsm/encoding.h"
#include "elsm/errors.h"

namespace elsm {

namespace {

void put_record(std::string& out, const Record& r) {
  put_u32le(out, static_cast<std::uint32_t>(encoded_size(r)));
  append_record(out, r);
}

Record get_record(ByteReader& in) {
  std::uint32_t len = in.u32le();
  try {
    return decode_record(in.take(len));
  } catch (const InvalidArgument& e) {
    throw DecodeError(e.what());
  }
}

void put_node(std::string& out, const ProofNode& n) {
  put_u8(out, static_cast<std::uint8_t>(n.kind));
  put_u8(out, static_cast<std::uint8_t>(n.side));
  if (n.kind == ProofNode::Kind::kHashOnly) {
    put_digest(out, std::get<Digest>(n.payload));
  } else {
    put_record(out, std::get<Record>(n.payload));
  }
}

ProofNode get_node(ByteReader& in) {
  std::uint8_t kind = in.u8();
  std::uint8_t side = in.u8();
  if (kind > 2) throw DecodeError("unknown proof node tag");
  if (side > 2) throw DecodeError("unknown proof node side");
  ProofNode n;
  n.kind = static_cast<ProofNode::Kind>(kind);
  n.side = static_cast<Side>(side);
  if (n.kind == ProofNode::Kind::kHashOnly) {
    n.payload = in.digest();
  } else {
    n.payload = get_record(in);
  }
  return n;
}

void put_node_list(std::string& out, const std::vector<ProofNode>& nodes) {
  if (nodes.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw InvalidArgument("proof has more than 65535 nodes");
  }
  put_u16le(out, static_cast<std::uint16_t>(nodes.size()));
  for (const auto& n : nodes) put_node(out, n);
}

std::vector<ProofNode> get_node_list(ByteReader& in) {
  std::uint16_t count = in.u16le();
  std::vector<ProofNode> nodes;
  nodes.reserve(count);
  for (std::uint16_t i = 0; i < count; ++i) nodes.push_back(get_node(in));
  return nodes;
}

std::vector<ProofNode> membership_nodes(const MembershipProof& p) {
  std::vector<ProofNode> nodes;
  nodes.reserve(p.chain_prefix.size() + 1 + p.path.size());
  for (const auto& r : p.chain_prefix) nodes.push_back(ProofNode::chain_link(r));
  if (p.chain_suffix) nodes.push_back(ProofNode::hash(Side::kChain, *p.chain_suffix));
  nodes.insert(nodes.end(), p.path.begin(), p.path.end());
  return nodes;
}

MembershipProof membership_from_nodes(std::vector<ProofNode> nodes, LevelId level, std::uint64_t leaf_index) {
  MembershipProof p;
  p.level = level;
  p.leaf_index = leaf_index;
  std::size_t i = 0;
  while (i < nodes.size() && nodes[i].kind == ProofNode::Kind::kPlainChainLink) {
    p.chain_prefix.push_back(std::get<Record>(std::move(nodes[i].payload)));
    ++i;
  }
  if (i < nodes.size() && nodes[i].kind == ProofNode::Kind::kHashOnly && nodes[i].side == Side::kChain) {
    p.chain_suffix = std::get<Digest>(nodes[i].payload);
    ++i;
  }
  p.path.assign(std::make_move_iterator(nodes.begin() + static_cast<std::ptrdiff_t>(i)),
                std::make_move_iterator(nodes.end()));
  p.chain_position = static_cast<std::uint32_t>(p.chain_prefix.size());
  return p;
}

void put_opening(std::string& out, const std::optional<LeafOpening>& o) {
  put_u8(out, o ? 1 : 0);
  if (!o) return;
  put_record(out, o->head);
  put_u8(out, o->chain_suffix ? 1 : 0);
  if (o->chain_suffix) put_digest(out, *o->chain_suffix);
}

std::optional<LeafOpening> get_opening(ByteReader& in) {
  std::uint8_t present = in.u8();
  if (present > 1) throw DecodeError("bad presence flag");
  if (!present) return std::nullopt;
  LeafOpening o{get_record(in), std::nullopt};
  std::uint8_t has_suffix = in.u8();
  if (has_suffix > 1) throw DecodeError("bad presence flag");
  if (has_suffix) o.chain_suffix = in.digest();
  return o;
}

void put_neighbor(std::string& out, const std::optional<Neighbor>& n) {
  put_opening(out, n ? std::optional<LeafOpening>(n->leaf) : std::nullopt);
  if (!n) return;
  put_u64le(out, n->leaf_index);
  put_node_list(out, n->path);
}

std::optional<Neighbor> get_neighbor(ByteReader& in) {
  auto o = get_opening(in);
  if (!o) return std::nullopt;
  Neighbor n{std::move(*o), 0, {}};
  n.leaf_index = in.u64le();
  n.path = get_node_list(in);
  return n;
}

void put_chain(std::string& out, const std::vector<Record>& chain) {
  put_u32le(out, static_cast<std::uint32_t>(chain.size()));
  for (const auto& r : chain) put_record(out, r);
}

std::vector<Record> get_chain(ByteReader& in) {
  std::uint32_t count = in.u32le();
  std::vector<Record> chain;
  // Each record takes at least 18 bytes on the wire; don't trust the count.
  chain.reserve(std::min<std::size_t>(count, in.remaining() / 18));
  for (std::uint32_t i = 0; i < count; ++i) chain.push_back(get_record(in));
  return chain;
}

void expect_done(const ByteReader& in) {
  if (!in.done()) throw DecodeError("trailing bytes after proof");
}

std::size_t path_hashes(const std::vector<ProofNode>& path) {
  std::size_t n = 0;
  for (const auto& node : path) n += node.kind == ProofNode::Kind::kHashOnly ? 1 : 0;
  return n;
}

}  // namespace

std::string encode_nodes(const std::vector<ProofNode>& nodes) {
  std::string out;
  put_node_list(out, nodes);
  return out;
}

std::vector<ProofNode> decode_nodes(std::string_view bytes) {
  ByteReader in(bytes);
  auto nodes = get_node_list(in);
  expect_done(in);
  return nodes;
}

std::string encode_embedded_proof(const MembershipProof& proof) { return encode_nodes(membership_nodes(proof)); }

MembershipProof decode_embedded_proof(std::string_view bytes, LevelId level, std::uint64_t leaf_index) {
  return membership_from_nodes(decode_nodes(bytes), level, leaf_index);
}

std::string encode_proof(const MembershipProof& proof) {
  std::string out;
  put_u16le(out, proof.level.index);
  put_u64le(out, proof.leaf_index);
  put_node_list(out, membership_nodes(proof));
  return out;
}

MembershipProof decode_membership_proof(std::string_view bytes) {
  ByteReader in(bytes);
  LevelId level{in.u16le()};
  std::uint64_t leaf_index = in.u64le();
  auto nodes = get_node_list(in);
  expect_done(in);
  return membership_from_nodes(std::move(nodes), level, leaf_index);
}

std::string encode_proof(const NonMembershipProof& proof) {
  std::string out;
  put_u16le(out, proof.level.index);
  put_u8(out, proof.empty_level ? 1 : 0);
  put_neighbor(out, proof.left);
  put_neighbor(out, proof.right);
  return out;
}

NonMembershipProof decode_non_membership_proof(std::string_view bytes) {
  ByteReader in(bytes);
  NonMembershipProof p;
  p.level = LevelId{in.u16le()};
  std::uint8_t empty = in.u8();
  if (empty > 1) throw DecodeError("bad empty-level flag");
  p.empty_level = empty == 1;
  p.left = get_neighbor(in);
  p.right = get_neighbor(in);
  expect_done(in);
  return p;
}

std::string encode_proof(const NoVisibleVersionProof& proof) {
  std::string out;
  put_u16le(out, proof.level.index);
  put_u64le(out, proof.leaf_index);
  put_chain(out, proof.chain);
  put_node_list(out, proof.path);
  return out;
}

NoVisibleVersionProof decode_no_visible_version_proof(std::string_view bytes) {
  ByteReader in(bytes);
  NoVisibleVersionProof p;
  p.level = LevelId{in.u16le()};
  p.leaf_index = in.u64le();
  p.chain = get_chain(in);
  p.path = get_node_list(in);
  expect_done(in);
  return p;
}

std::string encode_proof(const RangeProof& proof) {
  std::string out;
  put_u16le(out, proof.level.index);
  put_u64le(out, proof.leaf_count);
  put_u64le(out, proof.first_index);
  put_opening(out, proof.left);
  put_u32le(out, static_cast<std::uint32_t>(proof.covered.size()));
  for (const auto& chain : proof.covered) put_chain(out, chain);
  put_opening(out, proof.right);
  put_u32le(out, static_cast<std::uint32_t>(proof.siblings.size()));
  for (const auto& s : proof.siblings) {
    put_u16le(out, s.layer);
    put_u64le(out, s.index);
    put_digest(out, s.digest);
  }
  return out;
}

RangeProof decode_range_proof(std::string_view bytes) {
  ByteReader in(bytes);
  RangeProof p;
  p.level = LevelId{in.u16le()};
  p.leaf_count = in.u64le();
  p.first_index = in.u64le();
  p.left = get_opening(in);
  std::uint32_t chains = in.u32le();
  for (std::uint32_t i = 0; i < chains; ++i) p.covered.push_back(get_chain(in));
  p.right = get_opening(in);
  std::uint32_t siblings = in.u32le();
  for (std::uint32_t i = 0; i < siblings; ++i) {
    SiblingDigest s;
    s.layer = in.u16le();
    s.index = in.u64le();
    s.digest = in.digest();
    p.siblings.push_back(s);
  }
  expect_done(in);
  return p;
}

std::size_t hash_count(const MembershipProof& proof) {
  return path_hashes(proof.path) + (proof.chain_suffix ? 1 : 0);
}

std::size_t hash_count(const NonMembershipProof& proof) {
  std::size_t n = 0;
  for (const auto* nb : {&proof.left, &proof.right}) {
    if (*nb) n += path_hashes((*nb)->path) + ((*nb)->leaf.chain_suffix ? 1 : 0);
  }
  return n;
}

std::size_t hash_count(const NoVisibleVersionProof& proof) { return path_hashes(proof.path); }

std::size_t hash_count(const RangeProof& proof) {
  return proof.siblings.size() + (proof.left && proof.left->chain_suffix ? 1 : 0) +
         (proof.right && proof.right->chain_suffix ? 1 : 0);
}

}  // namespace elsm
