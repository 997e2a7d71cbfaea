#pragma once

// Reference model: every admitted write with its full version history, no
// proofs, no levels. Used to check what the trusted core returns.

#include <map>
#include <optional>
#include <vector>

#include "elsm/types.h"

namespace elsm {

class ShadowModel {
 public:
  void apply(const Record& r);
  /// Newest version with ts <= ts_q, or nullopt if none or it is a tombstone.
  std::optional<Record> get(const Key& key, Timestamp ts_q = Timestamp::latest()) const;
  std::vector<Record> scan(const Key& k1, const Key& k2, Timestamp ts_q = Timestamp::latest()) const;
  std::size_t key_count() const { return versions_.size(); }
  std::size_t version_count() const { return version_count_; }
  std::vector<Key> keys() const;

 private:
  std::optional<Record> visible(const std::map<std::uint64_t, Record>& versions, Timestamp ts_q) const;

  std::map<Key, std::map<std::uint64_t, Record>> versions_;
  std::size_t version_count_ = 0;
};

}  // namespace elsm
