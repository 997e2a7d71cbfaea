#include "elsm/shadow_model.h"

namespace elsm {

void ShadowModel::apply(const Record& r) {
  auto [it, fresh] = versions_[r.key].insert_or_assign(r.ts.value, r);
  (void)it;
  if (fresh) ++version_count_;
}

std::optional<Record> ShadowModel::visible(const std::map<std::uint64_t, Record>& versions,
                                           Timestamp ts_q) const {
  auto it = versions.upper_bound(ts_q.value);
  if (it == versions.begin()) return std::nullopt;
  --it;
  if (it->second.tombstone) return std::nullopt;
  return it->second;
}

std::optional<Record> ShadowModel::get(const Key& key, Timestamp ts_q) const {
  auto it = versions_.find(key);
  if (it == versions_.end()) return std::nullopt;
  return visible(it->second, ts_q);
}

std::vector<Record> ShadowModel::scan(const Key& k1, const Key& k2, Timestamp ts_q) const {
  std::vector<Record> out;
  for (auto it = versions_.lower_bound(k1); it != versions_.end() && !(k2 < it->first); ++it) {
    if (auto r = visible(it->second, ts_q)) out.push_back(std::move(*r));
  }
  return out;
}

std::vector<Key> ShadowModel::keys() const {
  std::vector<Key> out;
  out.reserve(versions_.size());
  for (const auto& [k, v] : versions_) out.push_back(k);
  return out;
}

}  // namespace elsm
