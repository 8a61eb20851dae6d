#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gecdq {

/// Malformed or invalid input data. The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse failure at a known location. `line` is 1-based; 0 when unknown.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EncodingError : public DataError {
 public:
  explicit EncodingError(std::size_t byte_offset)
      : DataError("invalid UTF-8 at byte offset " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

/// A lexicon, model, or configuration that violates its invariants.
class ValidationError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace gecdq
