#pragma once

// Write-ahead log: repeated { frame_len u32 | encode_record bytes | crc32 u32 },
// little-endian, crc32 (zlib polynomial) over the record bytes.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "elsm/types.h"

namespace elsm {

std::uint32_t crc32_of(std::string_view data);
std::string encode_wal_frame(const Record& r);

struct WalContents {
  std::vector<Record> records;
  std::vector<std::uint64_t> offsets;  // start of each frame
  std::uint64_t end_offset = 0;        // end of the last intact frame
  bool torn_tail = false;              // a partial/corrupt final frame was dropped
};

/// Parses a WAL image. A damaged final frame is reported as a torn tail; a
/// damaged frame followed by more bytes throws CorruptFrame.
WalContents parse_wal(std::string_view bytes, std::uint64_t from_offset = 0);

class WalWriter {
 public:
  WalWriter(std::filesystem::path path, bool sync);
  ~WalWriter();
  WalWriter(const WalWriter&) = delete;
  WalWriter& operator=(const WalWriter&) = delete;

  /// Appends one frame and returns its start offset. `between_halves`, when
  /// set, runs after the first half of the frame reaches the file (used to
  /// simulate a crash mid-write).
  std::uint64_t append(const Record& r, const std::function<void()>& between_halves = {});
  void truncate(std::uint64_t length);
  std::uint64_t size() const { return size_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  void write_all(std::string_view data);

  std::filesystem::path path_;
  bool sync_;
  int fd_ = -1;
  std::uint64_t size_ = 0;
};

}  // namespace elsm
