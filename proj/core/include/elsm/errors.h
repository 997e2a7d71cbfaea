#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "elsm/types.h"

namespace elsm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of a public operation was not met.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed bytes while decoding an encoding or a container.
class DecodeError : public Error {
 public:
  using Error::Error;
};

class CorruptContainer : public Error {
 public:
  using Error::Error;
};

/// A WAL frame that is not the final one failed its checksum or framing.
class CorruptFrame : public Error {
 public:
  using Error::Error;
};

enum class TreeErrc { kEmptyChain, kUnsortedChain, kMixedKeys, kUnsortedInput, kKeyAbsent, kKeyPresent };

std::string_view to_string(TreeErrc code);

class TreeError : public Error {
 public:
  explicit TreeError(TreeErrc code) : Error(std::string(to_string(code))), code_(code) {}
  TreeErrc code() const { return code_; }

 private:
  TreeErrc code_;
};

enum class RejectReason {
  kRootMismatch,
  kWrongKey,
  kFutureRecord,
  kStaleResult,
  kMalformedProof,
  kNotAdjacent,
  kNotBracketing,
  kGapInLeaves,
  kBoundaryUncovered,
};

std::string_view to_string(RejectReason reason);

/// The untrusted store answered with something the trusted core could not
/// verify. No data from the operation is returned.
class VerificationFailed : public Error {
 public:
  VerificationFailed(LevelId level, RejectReason reason)
      : Error("verification failed at L" + std::to_string(level.index) + ": " +
              std::string(to_string(reason))),
        level_(level),
        reason_(reason) {}

  LevelId level() const { return level_; }
  RejectReason reason() const { return reason_; }

 private:
  LevelId level_;
  RejectReason reason_;
};

class SealTampered : public Error {
 public:
  using Error::Error;
};

class WalMismatch : public Error {
 public:
  using Error::Error;
};

class CounterIoError : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class SelectorUnresolvable : public Error {
 public:
  using Error::Error;
};

}  // namespace elsm
