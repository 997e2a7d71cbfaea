#include "elsm/types.h"

#include "elsm/errors.h"

namespace elsm {

Key::Key(std::string bytes) : bytes_(std::move(bytes)) {
  if (bytes_.empty()) throw InvalidArgument("key must be non-empty");
  if (bytes_.size() > kMaxKeyLength) throw InvalidArgument("key longer than 65535 bytes");
}

std::strong_ordering record_order(const Record& a, const Record& b) {
  if (auto c = a.key <=> b.key; c != 0) return c;
  return b.ts <=> a.ts;
}

std::string Digest::hex() const {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (auto b : bytes) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0xf]);
  }
  return out;
}

namespace {
int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

Digest Digest::from_hex(std::string_view hex) {
  if (hex.size() != 64) throw InvalidArgument("digest hex must be 64 characters");
  Digest d;
  for (std::size_t i = 0; i < 32; ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw InvalidArgument("bad hex digit in digest");
    d.bytes[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return d;
}

std::string to_string(const Record& r) {
  std::string out = "<" + r.key.bytes() + "," + std::to_string(r.ts.value);
  if (r.tombstone) out += ",del";
  out += ">";
  return out;
}

std::string_view to_string(TreeErrc code) {
  switch (code) {
    case TreeErrc::kEmptyChain: return "EmptyChain";
    case TreeErrc::kUnsortedChain: return "UnsortedChain";
    case TreeErrc::kMixedKeys: return "MixedKeys";
    case TreeErrc::kUnsortedInput: return "UnsortedInput";
    case TreeErrc::kKeyAbsent: return "KeyAbsent";
    case TreeErrc::kKeyPresent: return "KeyPresent";
  }
  return "Unknown";
}

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::kRootMismatch: return "RootMismatch";
    case RejectReason::kWrongKey: return "WrongKey";
    case RejectReason::kFutureRecord: return "FutureRecord";
    case RejectReason::kStaleResult: return "StaleResult";
    case RejectReason::kMalformedProof: return "MalformedProof";
    case RejectReason::kNotAdjacent: return "NotAdjacent";
    case RejectReason::kNotBracketing: return "NotBracketing";
    case RejectReason::kGapInLeaves: return "GapInLeaves";
    case RejectReason::kBoundaryUncovered: return "BoundaryUncovered";
  }
  return "Unknown";
}

}  // namespace elsm
