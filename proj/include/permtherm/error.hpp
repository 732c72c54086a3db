#pragma once

#include <stdexcept>
#include <string>

namespace permtherm {

enum class ErrorKind {
  Parameter,   // invalid model / algorithm parameter
  Dimension,   // size or shape mismatch
  Domain,      // input outside the region where an operation is defined
  Degenerate,  // valid input that produces no usable result
  Io,          // file or config problems
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace permtherm
