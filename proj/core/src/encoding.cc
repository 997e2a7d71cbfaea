#include "elsm/encoding.h"

#include <cstring>

#include "elsm/errors.h"

namespace elsm {

void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

void put_u16le(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void put_u32le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_digest(std::string& out, const Digest& d) { out.append(d.view()); }

std::string_view ByteReader::take(std::size_t n) {
  if (n > remaining()) throw DecodeError("truncated input");
  auto out = data_.substr(pos_, n);
  pos_ += n;
  return out;
}

std::uint8_t ByteReader::u8() { return static_cast<std::uint8_t>(take(1)[0]); }

std::uint16_t ByteReader::u16le() {
  auto b = take(2);
  return static_cast<std::uint16_t>(static_cast<std::uint8_t>(b[0]) |
                                    static_cast<std::uint8_t>(b[1]) << 8);
}

std::uint32_t ByteReader::u32le() {
  auto b = take(4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = v << 8 | static_cast<std::uint8_t>(b[i]);
  return v;
}

std::uint64_t ByteReader::u64le() {
  auto b = take(8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = v << 8 | static_cast<std::uint8_t>(b[i]);
  return v;
}

Digest ByteReader::digest() {
  auto b = take(32);
  Digest d;
  std::memcpy(d.bytes.data(), b.data(), 32);
  return d;
}

void validate_record(const Record& r) {
  if (r.tombstone && !r.value.empty()) throw InvalidArgument("tombstone must carry an empty value");
  if (r.value.size() > kMaxValueLength) throw InvalidArgument("value longer than 2^32-1 bytes");
}

std::size_t encoded_size(const Record& r) { return 4 + r.key.size() + 8 + 1 + 4 + r.value.size(); }

void append_record(std::string& out, const Record& r) {
  put_u32le(out, static_cast<std::uint32_t>(r.key.size()));
  out.append(r.key.bytes());
  put_u64le(out, r.ts.value);
  put_u8(out, r.tombstone ? 1 : 0);
  put_u32le(out, static_cast<std::uint32_t>(r.value.size()));
  out.append(r.value);
}

std::string encode_record(const Record& r) {
  std::string out;
  out.reserve(encoded_size(r));
  append_record(out, r);
  return out;
}

Record read_record(ByteReader& reader) {
  std::uint32_t key_len = reader.u32le();
  if (key_len == 0 || key_len > kMaxKeyLength) throw DecodeError("bad key length");
  std::string key(reader.take(key_len));
  Timestamp ts{reader.u64le()};
  std::uint8_t flags = reader.u8();
  if (flags & ~1u) throw DecodeError("unknown record flags");
  std::uint32_t val_len = reader.u32le();
  std::string value(reader.take(val_len));
  bool tombstone = flags & 1u;
  if (tombstone && !value.empty()) throw DecodeError("tombstone with value");
  return Record{Key(std::move(key)), std::move(value), ts, tombstone};
}

Record decode_record(std::string_view bytes) {
  ByteReader reader(bytes);
  Record r = read_record(reader);
  if (!reader.done()) throw DecodeError("trailing bytes after record");
  return r;
}

}  // namespace elsm
