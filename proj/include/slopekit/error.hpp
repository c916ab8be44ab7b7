#pragma once

#include <stdexcept>
#include <string>

namespace slopekit {

enum class ErrorCode {
  InvalidArgument = 1,   // shape, domain or configuration problems
  PrecisionExceeded = 2, // q-precision or p-adic precision budget too small
  Unsupported = 3,       // (k, p) outside the configured range
  VerificationFailed = 4,
  Internal = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorCode::InvalidArgument, what) {}
};

class PrecisionError : public Error {
 public:
  explicit PrecisionError(const std::string& what) : Error(ErrorCode::PrecisionExceeded, what) {}
};

class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what) : Error(ErrorCode::Unsupported, what) {}
};

class VerificationError : public Error {
 public:
  explicit VerificationError(const std::string& what)
      : Error(ErrorCode::VerificationFailed, what) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorCode::Internal, what) {}
};

}  // namespace slopekit
