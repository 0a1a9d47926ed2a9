#pragma once

#include <stdexcept>
#include <string>

namespace qflow {

// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition or parameter violation by the caller.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Iterative kernel failed or produced non-finite output.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// Requested object exceeds a configured size cap.
class ResourceCapExceeded : public Error {
 public:
  using Error::Error;
};

// Malformed external input. `path()` locates the offending node.
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace qflow
