#include "elsm/hash.h"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <memory>
#include <string>

#include "elsm/encoding.h"
#include "elsm/errors.h"

namespace elsm {

namespace {

// The one-shot SHA256() looks the algorithm up on every call under OpenSSL 3;
// fetch it once and keep one context per thread.
const EVP_MD* sha256_md() {
  static EVP_MD* md = EVP_MD_fetch(nullptr, "SHA256", nullptr);
  return md;
}

struct CtxDeleter {
  void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};

}  // namespace

Digest sha256(std::string_view data) {
  thread_local std::unique_ptr<EVP_MD_CTX, CtxDeleter> ctx(EVP_MD_CTX_new());
  Digest d;
  unsigned int len = 0;
  if (!ctx || !sha256_md() || EVP_DigestInit_ex2(ctx.get(), sha256_md(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), d.bytes.data(), &len) != 1 || len != d.bytes.size()) {
    throw Error("SHA-256 failed");
  }
  return d;
}

Digest hmac_sha256(std::string_view key, std::string_view data) {
  Digest d;
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
           reinterpret_cast<const unsigned char*>(data.data()), data.size(), d.bytes.data(),
           &len) == nullptr ||
      len != d.bytes.size()) {
    throw Error("HMAC-SHA256 failed");
  }
  return d;
}

Digest leaf_digest(const Record& r) {
  std::string buf;
  buf.reserve(1 + encoded_size(r));
  put_u8(buf, tag::kLeaf);
  append_record(buf, r);
  return sha256(buf);
}

Digest chain_link_digest(const Record& r, const Digest& older) {
  std::string buf;
  buf.reserve(1 + encoded_size(r) + 32);
  put_u8(buf, tag::kChainLink);
  append_record(buf, r);
  put_digest(buf, older);
  return sha256(buf);
}

Digest internal_digest(const Digest& left, const Digest& right) {
  std::array<char, 65> buf;
  buf[0] = static_cast<char>(tag::kInternal);
  std::copy(left.bytes.begin(), left.bytes.end(), buf.begin() + 1);
  std::copy(right.bytes.begin(), right.bytes.end(), buf.begin() + 33);
  return sha256({buf.data(), buf.size()});
}

const Digest& empty_level_root() {
  static const Digest d = sha256(std::string(1, static_cast<char>(tag::kEmptyLevel)));
  return d;
}

const Digest& wal_base_digest() {
  static const Digest d = sha256(std::string(1, static_cast<char>(tag::kWalBase)));
  return d;
}

Digest wal_step_digest(const Digest& prev, const Record& r) {
  std::string buf;
  buf.reserve(1 + 32 + encoded_size(r));
  put_u8(buf, tag::kWalStep);
  put_digest(buf, prev);
  append_record(buf, r);
  return sha256(buf);
}

Digest state_hash(std::span<const Digest> roots, const Digest& wal_digest) {
  std::string buf;
  buf.reserve(1 + 32 * (roots.size() + 1));
  put_u8(buf, tag::kStateHash);
  for (const auto& r : roots) put_digest(buf, r);
  put_digest(buf, wal_digest);
  return sha256(buf);
}

}  // namespace elsm
