#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace elsm {

// Opaque byte strings travel as std::string, LevelDB style.
using Bytes = std::string;

inline constexpr std::size_t kMaxKeyLength = 65535;
inline constexpr std::uint64_t kMaxValueLength = std::numeric_limits<std::uint32_t>::max();

/// Non-empty opaque key, ordered lexicographically as unsigned bytes.
class Key {
 public:
  explicit Key(std::string bytes);
  Key(const char* bytes) : Key(std::string(bytes)) {}  // NOLINT: literal convenience

  const std::string& bytes() const { return bytes_; }
  std::string_view view() const { return bytes_; }
  std::size_t size() const { return bytes_.size(); }

  // char_traits<char> compares as unsigned char, which is the ordering we want.
  friend std::strong_ordering operator<=>(const Key& a, const Key& b) {
    int c = a.bytes_.compare(b.bytes_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
  friend bool operator==(const Key& a, const Key& b) { return a.bytes_ == b.bytes_; }

 private:
  std::string bytes_;
};

/// Logical write timestamp. Zero means "before any write"; the trusted core
/// hands out 1, 2, 3, ...
struct Timestamp {
  std::uint64_t value = 0;

  static constexpr Timestamp latest() { return {std::numeric_limits<std::uint64_t>::max()}; }
  friend constexpr auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

/// Level index. Level 0 is the trusted write buffer, 1..q live untrusted.
struct LevelId {
  std::uint16_t index = 0;
  friend constexpr auto operator<=>(const LevelId&, const LevelId&) = default;
};

struct Record {
  Key key;
  std::string value;
  Timestamp ts;
  bool tombstone = false;

  static Record put(Key key, std::string value, Timestamp ts) {
    return Record{std::move(key), std::move(value), ts, false};
  }
  static Record erase(Key key, Timestamp ts) { return Record{std::move(key), {}, ts, true}; }

  friend bool operator==(const Record&, const Record&) = default;
};

/// Key ascending, then newest first within a key.
std::strong_ordering record_order(const Record& a, const Record& b);

struct RecordLess {
  bool operator()(const Record& a, const Record& b) const { return record_order(a, b) < 0; }
};

/// SHA-256 output.
struct Digest {
  std::array<std::uint8_t, 32> bytes{};

  std::string hex() const;
  static Digest from_hex(std::string_view hex);  // throws InvalidArgument
  std::string_view view() const {
    return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
  }

  friend bool operator==(const Digest&, const Digest&) = default;
};

std::string to_string(const Record& r);

}  // namespace elsm
