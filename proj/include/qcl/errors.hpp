#pragma once

#include <stdexcept>
#include <string>

namespace qcl {

// Dense-size caps are hard limits; exceeding one is always reported.
class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string source, int line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
        source_(std::move(source)),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  int line() const noexcept { return line_; }

 private:
  std::string source_;
  int line_;
};

class NotCleanable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RecoveryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class KeyMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MisalignedFactorization : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qcl
