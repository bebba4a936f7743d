#ifndef TUMORSEG_ERROR_HPP
#define TUMORSEG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tumorseg {

// Bad arguments, violated preconditions, inconsistent configuration.
// Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem and OS-level failures. Maps to CLI exit code 2.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed file contents (NIfTI, PNG, JSON...). Maps to CLI exit code 2.
class ParseError : public IoError {
 public:
  explicit ParseError(const std::string& what) : IoError(what) {}
};

}  // namespace tumorseg

#endif
