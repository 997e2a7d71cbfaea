#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "elsm/types.h"

namespace elsm {

void put_u8(std::string& out, std::uint8_t v);
void put_u16le(std::string& out, std::uint16_t v);
void put_u32le(std::string& out, std::uint32_t v);
void put_u64le(std::string& out, std::uint64_t v);
void put_digest(std::string& out, const Digest& d);

/// Bounds-checked little-endian cursor. Every read past the end throws
/// DecodeError, so adversarial input can be parsed without pre-validation.
class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::uint8_t u8();
  std::uint16_t u16le();
  std::uint32_t u32le();
  std::uint64_t u64le();
  Digest digest();
  std::string_view take(std::size_t n);

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return pos_ == data_.size(); }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

/// Canonical record preimage:
///   key_len u32 | key | ts u64 | flags u8 (bit0 = tombstone) | val_len u32 | value
/// All integers little-endian. Every hash in the system is computed over this.
std::string encode_record(const Record& r);
void append_record(std::string& out, const Record& r);
std::size_t encoded_size(const Record& r);

/// Parses exactly one record; throws DecodeError on malformed input or on
/// trailing bytes.
Record decode_record(std::string_view bytes);
Record read_record(ByteReader& reader);

/// Throws InvalidArgument if the record breaks the Record invariants.
void validate_record(const Record& r);

}  // namespace elsm
