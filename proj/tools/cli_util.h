#pragma once

// Helpers shared by the elsm tool and its tests: the config file, output
// escaping and the bulk-load file format.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "elsm/trusted_core.h"

namespace elsm::cli {

/// Bytes outside [A-Za-z0-9._~/:-] become %XX, so every output field is a
/// single whitespace-free token.
std::string pct_encode(std::string_view raw);
/// Throws InvalidArgument on a malformed escape.
std::string pct_decode(std::string_view text);

/// elsm.conf: one "name = value" per line, '#' comments. Unknown names and
/// bad values throw InvalidArgument.
CoreConfig parse_config(std::string_view text);
std::string format_config(const CoreConfig& c);

/// Bulk-load file, one record per line:
///   <level> <key> <ts> put <value>
///   <level> <key> <ts> del
/// Fields are percent-encoded; '#' starts a comment line. Returns records
/// grouped per level (index 0 = level 1), each sorted for installation.
std::vector<std::vector<Record>> parse_load_file(std::string_view text, std::uint16_t max_levels);

}  // namespace elsm::cli
