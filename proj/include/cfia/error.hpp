#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cfia {

// Raised when caller-supplied data violates a documented precondition.
// The CLI maps every ValidationError to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A region code that does not match GROUP "-" GROUP.
class RegionParseError : public ValidationError {
 public:
  RegionParseError(std::string code, std::size_t position, std::string reason);

  const std::string& code() const { return code_; }
  // Offset of the offending character, or npos when the error is structural.
  std::size_t position() const { return position_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string code_;
  std::size_t position_;
  std::string reason_;
};

// Diagnostic for malformed file content: names the file, the 1-based line
// and the rule that was broken.
class DataError : public ValidationError {
 public:
  DataError(std::string file, std::size_t line, std::string rule,
            std::string detail);

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  const std::string& rule() const { return rule_; }

 private:
  std::string file_;
  std::size_t line_;
  std::string rule_;
};

}  // namespace cfia
