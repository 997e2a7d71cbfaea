#pragma once

// Byte layouts for proofs.
//
// Node list (also the per-record embedded proof in run files):
//   count u16 | { tag u8 (0 HashOnly, 1 PlainRecord, 2 PlainChainLink) | side u8 |
//                 32-byte digest  or  len u32 | encode_record bytes }
// An embedded membership proof lists the newer chain links (PlainChainLink,
// side Chain, newest first), then the older-links digest if any (HashOnly,
// side Chain), then the tree path (side Left/Right).
//
// The standalone encodings below wrap node lists with the level id and the
// other proof fields; decoders throw DecodeError on anything malformed.

#include <string>
#include <string_view>
#include <vector>

#include "elsm/merkle.h"

namespace elsm {

std::string encode_nodes(const std::vector<ProofNode>& nodes);
std::vector<ProofNode> decode_nodes(std::string_view bytes);

std::string encode_embedded_proof(const MembershipProof& proof);
MembershipProof decode_embedded_proof(std::string_view bytes, LevelId level, std::uint64_t leaf_index);

std::string encode_proof(const MembershipProof& proof);
std::string encode_proof(const NonMembershipProof& proof);
std::string encode_proof(const NoVisibleVersionProof& proof);
std::string encode_proof(const RangeProof& proof);

MembershipProof decode_membership_proof(std::string_view bytes);
NonMembershipProof decode_non_membership_proof(std::string_view bytes);
NoVisibleVersionProof decode_no_visible_version_proof(std::string_view bytes);
RangeProof decode_range_proof(std::string_view bytes);

/// Number of 32-byte digests a proof carries.
std::size_t hash_count(const MembershipProof& proof);
std::size_t hash_count(const NonMembershipProof& proof);
std::size_t hash_count(const NoVisibleVersionProof& proof);
std::size_t hash_count(const RangeProof& proof);

}  // namespace elsm
