#include "cli_util.h"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "elsm/errors.h"

namespace elsm::cli {

namespace {

bool plain(unsigned char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' || c == '_' ||
         c == '~' || c == '/' || c == ':' || c == '-';
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T number(std::string_view name, std::string_view v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw InvalidArgument("bad value for " + std::string(name) + ": '" + std::string(v) + "'");
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::string pct_encode(std::string_view raw) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(raw.size());
  for (unsigned char c : raw) {
    if (plain(c)) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    }
  }
  return out;
}

std::string pct_decode(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '%') {
      out.push_back(text[i]);
      continue;
    }
    int hi = i + 1 < text.size() ? hex_value(text[i + 1]) : -1;
    int lo = i + 2 < text.size() ? hex_value(text[i + 2]) : -1;
    if (hi < 0 || lo < 0) throw InvalidArgument("bad %-escape in '" + std::string(text) + "'");
    out.push_back(static_cast<char>(hi * 16 + lo));
    i += 2;
  }
  return out;
}

CoreConfig parse_config(std::string_view text) {
  CoreConfig c;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("elsm.conf line " + std::to_string(lineno) + ": expected name = value");
    }
    std::string_view k = trim(line.substr(0, eq));
    std::string_view v = trim(line.substr(eq + 1));
    if (k == "max_levels") {
      c.max_levels = number<std::uint16_t>(k, v);
    } else if (k == "l0_capacity") {
      c.l0_capacity = number<std::uint64_t>(k, v);
    } else if (k == "growth_factor") {
      c.growth_factor = number<std::uint32_t>(k, v);
    } else if (k == "base_size") {
      c.base_size = number<std::uint64_t>(k, v);
    } else if (k == "bind_interval") {
      c.bind_interval = number<std::uint64_t>(k, v);
    } else if (k == "auto_compact") {
      c.auto_compact = number<int>(k, v) != 0;
    } else if (k == "retention") {
      if (v == "all") {
        c.retention = Retention::kAllVersions;
      } else if (v == "latest") {
        c.retention = Retention::kLatestOnly;
      } else {
        throw InvalidArgument("retention must be 'all' or 'latest'");
      }
    } else if (k == "seal_key") {
      c.seal_key = pct_decode(v);
    } else {
      throw InvalidArgument("elsm.conf: unknown setting '" + std::string(k) + "'");
    }
  }
  if (c.max_levels < 2) throw InvalidArgument("max_levels must be at least 2");
  if (c.l0_capacity == 0) throw InvalidArgument("l0_capacity must be positive");
  if (c.growth_factor < 2) throw InvalidArgument("growth_factor must be at least 2");
  return c;
}

std::string format_config(const CoreConfig& c) {
  std::ostringstream o;
  o << "# elsm store configuration\n"
    << "max_levels = " << c.max_levels << '\n'
    << "l0_capacity = " << c.l0_capacity << '\n'
    << "growth_factor = " << c.growth_factor << '\n'
    << "base_size = " << c.base_size << '\n'
    << "bind_interval = " << c.bind_interval << '\n'
    << "auto_compact = " << (c.auto_compact ? 1 : 0) << '\n'
    << "retention = " << (c.retention == Retention::kAllVersions ? "all" : "latest") << '\n'
    << "seal_key = " << pct_encode(c.seal_key) << '\n';
  return o.str();
}

std::vector<std::vector<Record>> parse_load_file(std::string_view text, std::uint16_t max_levels) {
  std::vector<std::vector<Record>> levels;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto f = split_ws(line);
    const std::string where = "load line " + std::to_string(lineno);
    if (f.size() < 4) throw InvalidArgument(where + ": expected <level> <key> <ts> put|del [value]");
    auto level = number<std::uint16_t>("level", f[0]);
    if (level < 1 || level > max_levels) throw InvalidArgument(where + ": level out of range");
    Key key(pct_decode(f[1]));
    Timestamp ts{number<std::uint64_t>("ts", f[2])};
    if (levels.size() < level) levels.resize(level);
    if (f[3] == "put" && f.size() <= 5) {
      levels[level - 1].push_back(Record::put(std::move(key), f.size() == 5 ? pct_decode(f[4]) : std::string(), ts));
    } else if (f[3] == "del" && f.size() == 4) {
      levels[level - 1].push_back(Record::erase(std::move(key), ts));
    } else {
      throw InvalidArgument(where + ": expected put <value> or del");
    }
  }
  for (auto& l : levels) std::sort(l.begin(), l.end(), RecordLess{});
  return levels;
}

}  // namespace elsm::cli
