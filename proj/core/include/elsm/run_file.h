#pragma once

// Run file container, one per level:
//   magic "ELSM" | version u16 | level u16 | record_count u64 | root 32B |
//   { rec_len u32 | encode_record bytes | proof_len u32 | embedded proof }*
// All integers little-endian. The header root is whatever the writer
// claimed; nothing here checks it against the records.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "elsm/types.h"

namespace elsm {

inline constexpr char kRunMagic[4] = {'E', 'L', 'S', 'M'};
inline constexpr std::uint16_t kRunVersion = 1;

struct RunRecord {
  Record record;
  std::string embedded_proof;
};

struct RunFile {
  LevelId level;
  Digest root;
  std::vector<RunRecord> records;
};

std::string serialize_run(const RunFile& run);
/// Throws CorruptContainer on framing errors.
RunFile parse_run(std::string_view bytes);

/// Byte offset of the value of record `i` inside a serialized run. Used by
/// fault-injection tooling to tamper with files in place.
std::size_t run_value_offset(std::string_view bytes, std::size_t i);

std::string read_file(const std::filesystem::path& path);  // throws IoError
/// Writes to `path` through a sibling temp file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view data, bool sync);

}  // namespace elsm
