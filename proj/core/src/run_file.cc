#include "elsm/run_file.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "elsm/encoding.h"
#include "elsm/errors.h"

namespace elsm {

namespace {

constexpr std::size_t kHeaderSize = 4 + 2 + 2 + 8 + 32;

std::string errno_message(const std::string& what, const std::filesystem::path& path) {
  return what + " " + path.string() + ": " + std::strerror(errno);
}

}  // namespace

std::string serialize_run(const RunFile& run) {
  std::string out;
  out.append(kRunMagic, 4);
  put_u16le(out, kRunVersion);
  put_u16le(out, run.level.index);
  put_u64le(out, run.records.size());
  put_digest(out, run.root);
  for (const auto& rr : run.records) {
    put_u32le(out, static_cast<std::uint32_t>(encoded_size(rr.record)));
    append_record(out, rr.record);
    put_u32le(out, static_cast<std::uint32_t>(rr.embedded_proof.size()));
    out.append(rr.embedded_proof);
  }
  return out;
}

RunFile parse_run(std::string_view bytes) {
  try {
    ByteReader in(bytes);
    if (in.take(4) != std::string_view(kRunMagic, 4)) throw CorruptContainer("bad run file magic");
    if (in.u16le() != kRunVersion) throw CorruptContainer("unsupported run file version");
    RunFile run;
    run.level = LevelId{in.u16le()};
    std::uint64_t count = in.u64le();
    run.root = in.digest();
    if (count > in.remaining() / 26) throw CorruptContainer("record count exceeds file size");
    run.records.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      std::uint32_t rec_len = in.u32le();
      Record r = decode_record(in.take(rec_len));
      std::uint32_t proof_len = in.u32le();
      run.records.push_back(RunRecord{std::move(r), std::string(in.take(proof_len))});
    }
    if (!in.done()) throw CorruptContainer("trailing bytes in run file");
    return run;
  } catch (const DecodeError& e) {
    throw CorruptContainer(std::string("run file: ") + e.what());
  }
}

std::size_t run_value_offset(std::string_view bytes, std::size_t i) {
  ByteReader in(bytes);
  in.take(kHeaderSize);
  for (std::size_t k = 0;; ++k) {
    std::size_t rec_start = in.position() + 4;
    std::uint32_t rec_len = in.u32le();
    auto rec = in.take(rec_len);
    if (k == i) {
      ByteReader r(rec);
      std::uint32_t key_len = r.u32le();
      return rec_start + 4 + key_len + 8 + 1 + 4;
    }
    in.take(in.u32le());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(errno_message("cannot open", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(errno_message("cannot read", path));
  return std::move(ss).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view data, bool sync) {
  auto tmp = path;
  tmp += ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw IoError(errno_message("cannot create", tmp));
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      throw IoError(errno_message("write failed on", tmp));
    }
    off += static_cast<std::size_t>(n);
  }
  if (sync && ::fdatasync(fd) != 0) {
    ::close(fd);
    throw IoError(errno_message("fdatasync failed on", tmp));
  }
  ::close(fd);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename " + tmp.string() + ": " + ec.message());
}

}  // namespace elsm
