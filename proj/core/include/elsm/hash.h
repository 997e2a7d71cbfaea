#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "elsm/types.h"

namespace elsm {

// Domain-separation tags prefixed to every preimage.
namespace tag {
inline constexpr std::uint8_t kLeaf = 0x00;
inline constexpr std::uint8_t kChainLink = 0x01;
inline constexpr std::uint8_t kInternal = 0x02;
inline constexpr std::uint8_t kEmptyLevel = 0x03;
inline constexpr std::uint8_t kWalBase = 0x04;
inline constexpr std::uint8_t kWalStep = 0x05;
inline constexpr std::uint8_t kStateHash = 0x06;
}  // namespace tag

Digest sha256(std::string_view data);
Digest hmac_sha256(std::string_view key, std::string_view data);

/// H(0x00 | enc(r)): a single record, or the oldest link of a chain.
Digest leaf_digest(const Record& r);
/// H(0x01 | enc(r) | older): one link of a version chain.
Digest chain_link_digest(const Record& r, const Digest& older);
/// H(0x02 | left | right)
Digest internal_digest(const Digest& left, const Digest& right);
/// H(0x03), the root of an empty level.
const Digest& empty_level_root();

/// sigma_0 = H(0x04)
const Digest& wal_base_digest();
/// sigma_n = H(0x05 | sigma_{n-1} | enc(r_n))
Digest wal_step_digest(const Digest& prev, const Record& r);

/// H(0x06 | roots[1] | ... | roots[q] | wal_digest)
Digest state_hash(std::span<const Digest> roots, const Digest& wal_digest);

}  // namespace elsm
