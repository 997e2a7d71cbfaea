#include "elsm/wal.h"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>
#include <zlib.h>

#include <cerrno>
#include <cstring>

#include "elsm/encoding.h"
#include "elsm/errors.h"

namespace elsm {

std::uint32_t crc32_of(std::string_view data) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  crc = ::crc32(crc, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size()));
  return static_cast<std::uint32_t>(crc);
}

std::string encode_wal_frame(const Record& r) {
  std::string body = encode_record(r);
  std::string out;
  out.reserve(body.size() + 8);
  put_u32le(out, static_cast<std::uint32_t>(body.size()));
  out.append(body);
  put_u32le(out, crc32_of(body));
  return out;
}

WalContents parse_wal(std::string_view bytes, std::uint64_t from_offset) {
  WalContents out;
  if (from_offset > bytes.size()) throw CorruptFrame("WAL offset beyond end of log");
  std::size_t pos = from_offset;
  out.end_offset = pos;
  while (pos < bytes.size()) {
    std::string_view rest = bytes.substr(pos);
    if (rest.size() < 4) {
      out.torn_tail = true;
      return out;
    }
    ByteReader in(rest);
    std::uint32_t len = in.u32le();
    if (in.remaining() < std::uint64_t{len} + 4) {
      // The frame runs past end-of-file: a torn final write.
      out.torn_tail = true;
      return out;
    }
    auto body = in.take(len);
    std::uint32_t crc = in.u32le();
    bool last = in.done();
    try {
      if (crc != crc32_of(body)) throw DecodeError("frame checksum mismatch");
      out.records.push_back(decode_record(body));
    } catch (const DecodeError& e) {
      if (last) {
        out.torn_tail = true;
        return out;
      }
      throw CorruptFrame("WAL frame at offset " + std::to_string(pos) + ": " + e.what());
    }
    out.offsets.push_back(pos);
    pos += in.position();
    out.end_offset = pos;
  }
  return out;
}

WalWriter::WalWriter(std::filesystem::path path, bool sync) : path_(std::move(path)), sync_(sync) {
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) throw IoError("cannot open WAL " + path_.string() + ": " + std::strerror(errno));
  struct stat st {};
  if (::fstat(fd_, &st) != 0) {
    ::close(fd_);
    throw IoError("cannot stat WAL " + path_.string());
  }
  size_ = static_cast<std::uint64_t>(st.st_size);
}

WalWriter::~WalWriter() {
  if (fd_ >= 0) ::close(fd_);
}

void WalWriter::write_all(std::string_view data) {
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(fd_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw IoError("WAL write failed: " + std::string(std::strerror(errno)));
    }
    off += static_cast<std::size_t>(n);
    size_ += static_cast<std::uint64_t>(n);
  }
}

std::uint64_t WalWriter::append(const Record& r, const std::function<void()>& between_halves) {
  std::string frame = encode_wal_frame(r);
  std::uint64_t offset = size_;
  if (between_halves) {
    std::size_t half = frame.size() / 2;
    write_all(std::string_view(frame).substr(0, half));
    between_halves();
    write_all(std::string_view(frame).substr(half));
  } else {
    write_all(frame);
  }
  if (sync_ && ::fdatasync(fd_) != 0) throw IoError("WAL fdatasync failed");
  return offset;
}

void WalWriter::truncate(std::uint64_t length) {
  if (::ftruncate(fd_, static_cast<off_t>(length)) != 0) {
    throw IoError("WAL truncate failed: " + std::string(std::strerror(errno)));
  }
  size_ = length;
  if (sync_ && ::fdatasync(fd_) != 0) throw IoError("WAL fdatasync failed");
}

}  // namespace elsm
