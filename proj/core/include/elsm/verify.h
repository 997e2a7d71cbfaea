#pragma once

// Trusted-side proof checks. Every function treats its proof argument as
// adversarial and never throws on malformed content; it returns a Reject.

#include <optional>
#include <vector>

#include "elsm/errors.h"
#include "elsm/merkle.h"
#include "elsm/types.h"

namespace elsm {

struct Verdict {
  std::optional<RejectReason> reject;

  static Verdict accept() { return {}; }
  static Verdict fail(RejectReason r) { return {r}; }
  bool accepted() const { return !reject.has_value(); }
  explicit operator bool() const { return accepted(); }
};

struct RangeVerdict {
  std::optional<RejectReason> reject;
  std::vector<Record> records;  // every version with key in [k1, k2]

  bool accepted() const { return !reject.has_value(); }
  explicit operator bool() const { return accepted(); }
};

/// Accepts iff the proof recomputes `root`, the result is for `key`, it is not
/// newer than ts_q, and no newer-but-visible version of the key is exposed in
/// the proof.
Verdict verify_membership(const Digest& root, const Key& key, Timestamp ts_q, const Record& result,
                          const MembershipProof& proof);

Verdict verify_non_membership(const Digest& root, const Key& key, const NonMembershipProof& proof);

Verdict verify_no_visible_version(const Digest& root, const Key& key, Timestamp ts_q,
                                  const NoVisibleVersionProof& proof);

RangeVerdict verify_range(const Digest& root, const Key& k1, const Key& k2, const RangeProof& proof);

}  // namespace elsm
